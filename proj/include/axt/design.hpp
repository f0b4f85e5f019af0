#pragma once

#include "axt/approx.hpp"
#include "axt/hierarchy.hpp"
#include "axt/netlist.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace axt {

enum class DesignKind { Fir, FftButterfly };

std::string_view to_string(DesignKind kind);

// Architecture choice for one operator slot; the width comes from the slot.
struct ArchChoice {
    ArchKind arch = ArchKind::Exact;
    int k = 0;
    bool loa_and_carry = false;

    bool operator==(const ArchChoice&) const = default;
    auto operator<=>(const ArchChoice&) const = default;
};

struct DesignConfig {
    DesignKind design = DesignKind::Fir;
    int taps = 4;
    int width = 8;
    std::vector<std::uint64_t> coeffs{0x81, 0x7F, 0xFF, 0x7E};  // FIR coefficients, one per tap
    std::uint64_t twiddle = 0x81;                               // FFT butterfly constant
    std::map<std::string, ArchChoice> assign;                    // slot name -> architecture; default exact
    int n_variants = 10;

    void validate() const;  // throws BadParams
};

// One arithmetic operator of a design.
struct OperatorSlot {
    std::string name;  // instance name inside the top module, e.g. "mul2"
    OpType op;
    int width;         // operand width
};

std::vector<OperatorSlot> design_slots(const DesignConfig& config);

ArchParams slot_params(const OperatorSlot& slot, const ArchChoice& choice);

// FIR: x0..x{taps-1} times constant coefficients into a pairwise adder tree,
// output y. FFT butterfly: t = b * twiddle, outputs y0 = a + t and
// y1 = a - t mod 2^(2w+1). Coefficient constants are deterministic instances.
Design gen_design(const DesignConfig& config);

Netlist build_design(const DesignConfig& config);

// Name of the top module, which prefixes every instance tag.
std::string design_top(const DesignConfig& config);

// Exact function of the design on one input row, packed like the outputs.
std::uint64_t design_reference(const DesignConfig& config, std::span<const std::uint64_t> row);

}  // namespace axt
