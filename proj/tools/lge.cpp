// lge — logical geometry engine over small finite models.
//
// Subcommands: eval, closure, compare, kb, kb-iso, check, apply. Model
// references are JSON files or bare names resolved in the models directory.
// Exit codes: 0 success, 1 verdict-negative, 2 usage/parse error, 3 cap
// exceeded.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "lge/session.hpp"

namespace {

const char* models_dir_default() {
    const char* env = std::getenv("LGE_MODELS");
    return env ? env : "models";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"logical geometry engine over finite models"};
    app.require_subcommand(1);

    lge::Session session;
    session.models_dir = models_dir_default();
    bool json = false;
    std::uint64_t cap_points = 0;
    app.add_flag("--json", json, "structured output");
    app.add_option("--models-dir", session.models_dir, "model file directory");
    app.add_option("--cap-points", cap_points, "override the point-space cap");

    std::string model1, model2, sort_str, formula, points, mode = "logical", suite = "all";
    std::vector<std::string> sorts;
    std::string morphism, source_sort, target_sort;
    int rank = -1, depth = -1;
    lge::SuiteOptions suite_opts;

    auto* eval = app.add_subcommand("eval", "evaluate a formula into its satisfying point set");
    eval->add_option("model", model1)->required();
    eval->add_option("-X,--sort", sort_str, "comma-separated sort")->required();
    eval->add_option("formula", formula)->required();

    auto* closure = app.add_subcommand("closure", "Galois closures of point sets or descriptions");
    closure->add_option("model", model1)->required();
    closure->add_option("-X,--sort", sort_str)->required();
    closure->add_option("--points", points, "semicolon-separated points, coordinates by comma");
    closure->add_option("--formulas", formula, "semicolon-separated formulas");
    closure->add_option("--mode", mode, "logical | algebraic");

    auto* compare = app.add_subcommand("compare", "isotypeness and LG-equivalence of two models");
    compare->add_option("model1", model1)->required();
    compare->add_option("model2", model2)->required();
    compare->add_option("-X,--sort", sort_str)->required();
    compare->add_option("--rank", rank, "game rank budget (default: |H1|+|H2|+|X|)");
    compare->add_option("--depth", depth, "atom term depth budget");

    auto* kb = app.add_subcommand("kb", "build and list a knowledge base");
    kb->add_option("model", model1)->required();
    kb->add_option("-X,--sort", sorts, "sort (repeatable)")->required();

    auto* kbiso = app.add_subcommand("kb-iso", "knowledge-base isomorphism verdict");
    kbiso->add_option("model1", model1)->required();
    kbiso->add_option("model2", model2)->required();
    kbiso->add_option("-X,--sort", sorts, "sort (repeatable)")->required();
    kbiso->add_option("--depth", depth, "morphism grid term depth");

    auto* check = app.add_subcommand("check", "axiom, diagram, closure and oracle suites");
    check->add_option("model", model1)->required();
    check->add_option("--suite", suite, "halmos | diagrams | closures | anti | oracle | all");
    check->add_option("--seed", suite_opts.seed);
    check->add_option("--instances", suite_opts.instances);
    check->add_option("--depth", suite_opts.morphism_depth, "morphism term depth");

    auto* apply = app.add_subcommand("apply", "apply a sort morphism to formulas and point sets");
    apply->add_option("model", model1)->required();
    apply->add_option("-s,--morphism", morphism, "assignments 'y := mul(x,x); ...'")->required();
    apply->add_option("--source", source_sort, "source sort")->required();
    apply->add_option("--target", target_sort, "target sort")->required();
    apply->add_option("--formula", formula);
    apply->add_option("--points", points, "source-sort point set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    session.json = json;
    if (cap_points) session.caps.max_points = cap_points;

    try {
        if (eval->parsed()) return lge::cmd_eval(session, model1, sort_str, formula, std::cout);
        if (closure->parsed())
            return lge::cmd_closure(session, model1, sort_str, points, formula, mode, std::cout);
        if (compare->parsed())
            return lge::cmd_compare(session, model1, model2, sort_str, rank, depth, std::cout);
        if (kb->parsed()) return lge::cmd_kb(session, model1, sorts, std::cout);
        if (kbiso->parsed()) return lge::cmd_kb_iso(session, model1, model2, sorts, depth, std::cout);
        if (check->parsed()) return lge::cmd_check(session, model1, suite, suite_opts, std::cout);
        if (apply->parsed())
            return lge::cmd_apply(session, model1, morphism, source_sort, target_sort, formula, points,
                                  std::cout);
    } catch (const lge::cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const lge::internal_error& e) {
        std::cerr << "internal error (engine bug): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
