#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "lge/checks.hpp"

namespace lge {

// Command-line session: loaded models by name, configured caps, output mode.
// Model references are either paths (anything containing '/' or ending in
// ".json") or bare names resolved against the models directory.
struct Session {
    EngineCaps caps;
    bool json = false;
    std::string models_dir = "models";
    std::map<std::string, std::shared_ptr<const FiniteModel>> loaded;

    std::shared_ptr<const FiniteModel> model(const std::string& ref);
};

// Exit codes: 0 success, 1 verdict-negative, 2 usage/parse error, 3 cap
// exceeded. Commands throw engine errors; the CLI front end maps them.
int cmd_eval(Session& s, const std::string& model, const std::string& sort, const std::string& formula,
             std::ostream& out);

int cmd_closure(Session& s, const std::string& model, const std::string& sort,
                const std::string& points, const std::string& formulas, const std::string& mode,
                std::ostream& out);

int cmd_compare(Session& s, const std::string& model1, const std::string& model2,
                const std::string& sort, int rank, int depth, std::ostream& out);

int cmd_kb(Session& s, const std::string& model, const std::vector<std::string>& sorts,
           std::ostream& out);

int cmd_kb_iso(Session& s, const std::string& model1, const std::string& model2,
               const std::vector<std::string>& sorts, int depth, std::ostream& out);

int cmd_check(Session& s, const std::string& model, const std::string& suite, const SuiteOptions& opts,
              std::ostream& out);

int cmd_apply(Session& s, const std::string& model, const std::string& morphism,
              const std::string& source_sort, const std::string& target_sort,
              const std::string& formula, const std::string& points, std::ostream& out);

} // namespace lge
