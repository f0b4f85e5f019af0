#pragma once

#include "axt/netlist.hpp"
#include "axt/sim.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace axt {

struct Literal {
    NetId net = 0;
    bool value = true;

    bool operator==(const Literal&) const = default;
};

// Bit w set iff input word w (input_words() order, at most 64) lies in the
// transitive fan-in of the net.
std::vector<std::uint64_t> word_support(const Netlist& netlist);

// Ternary evaluation with every primary input unknown: 0 or 1 for nets that
// are structurally constant, -1 otherwise.
std::vector<int> constant_nets(const Netlist& netlist);

// Rewrites `target` into the conjunction of literals it is forced by, walking
// back through gates tagged `tag` whose output value pins all inputs (AND=1,
// OR=0, NAND=0, NOR=1, NOT, BUF). Returns nullopt when the conjunction is
// self-contradictory.
std::optional<std::vector<Literal>> expand_literal(const Netlist& netlist, Literal target, const std::string& tag);

struct JustifyConfig {
    std::size_t budget = 1000000;  // candidate vectors evaluated
    std::uint64_t seed = 1;
    std::size_t exhaustive_bits = 20;
};

// Finds one input row under which every literal holds. Candidates are built
// by word-wise crossover of `seeds` rows that realized individual literals,
// refined by bit-flip hill climbing; inputs of at most exhaustive_bits bits
// are enumerated instead.
std::optional<std::vector<std::uint64_t>> justify(const Simulator& sim, const VectorSet& seeds, const Traces& traces,
                                                  const std::vector<Literal>& literals, const JustifyConfig& config);

}  // namespace axt
