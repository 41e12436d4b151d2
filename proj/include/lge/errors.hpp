#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lge {

// Base class for all engine failures that are the caller's fault
// (bad input, violated precondition, exceeded cap). Internal invariant
// violations use internal_error instead.
struct engine_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error in a term/formula/morphism literal. `position` is the
// byte offset into the input text.
struct parse_error : engine_error {
    parse_error(const std::string& what, std::size_t pos)
        : engine_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

// Sort/model mismatch, unbound or unmapped variable, ill-sorted operand.
struct sort_error : engine_error {
    using engine_error::engine_error;
};

// Operations applied across models with different signatures.
struct signature_error : engine_error {
    using engine_error::engine_error;
};

// A configured resource cap would be exceeded (point space, subalgebra
// size, orbit count, oracle feasibility limit).
struct cap_error : engine_error {
    using engine_error::engine_error;
};

// Invalid model file. `path` points at the offending JSON field.
struct model_format_error : engine_error {
    model_format_error(const std::string& path, const std::string& what)
        : engine_error(path + ": " + what), path(path) {}
    std::string path;
};

// A check that must hold by construction failed; always a bug.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace lge
