#pragma once

#include "axt/netlist.hpp"

#include <cstdint>
#include <vector>

namespace axt {

// Saturating "uncontrollable / unobservable" value.
inline constexpr std::uint64_t kScoapInf = std::uint64_t{1} << 40;

struct ScoapReport {
    std::vector<std::uint64_t> cc0;
    std::vector<std::uint64_t> cc1;
    std::vector<std::uint64_t> co;

    std::uint64_t cc(NetId net, bool value) const { return value ? cc1[net] : cc0[net]; }
};

// Combinational SCOAP. MUX2 is treated as OR(AND(NOT s, a), AND(s, b)).
// A net with no sink that is not a primary output gets co = kScoapInf.
ScoapReport scoap(const Netlist& netlist);

}  // namespace axt
