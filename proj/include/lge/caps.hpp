#pragma once

#include <cstddef>
#include <cstdint>

namespace lge {

// Resource limits for the exhaustive machinery. Everything downstream
// enumerates point spaces, subalgebras or orbit lattices in full, so
// each of those gets an explicit ceiling with a conservative default.
struct EngineCaps {
    int max_carrier = 16;
    std::uint64_t max_points = std::uint64_t(1) << 24; // per hom space
    std::size_t max_subalgebra = 200000;               // generated subalgebra elements
    int max_lattice_orbits = 16;                       // lattice has 2^orbits elements

    // The definitional closure oracle replays quantifier games over the
    // whole point space; it is only meant for desk-size models.
    std::uint64_t oracle_max_points = 64;
    int oracle_max_carrier = 4;

    int term_depth = 3;     // default atom term depth for witness synthesis
    int morphism_depth = 2; // default term depth for morphism enumeration
};

} // namespace lge
