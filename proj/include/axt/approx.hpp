#pragma once

#include "axt/netlist.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace axt {

// Operation type j of an arithmetic module. SUB is used by the FFT butterfly;
// CONST marks coefficient/twiddle constant generators.
enum class OpType : int { Add = 0, Mul = 1, Sub = 2, Const = 3 };

// Architecture family i.
enum class ArchKind : int { Exact = 0, Loa = 1, Trunc = 2, Block22 = 3 };

std::string_view to_string(OpType op);
std::string_view to_string(ArchKind arch);
std::optional<OpType> parse_op_type(std::string_view text);
std::optional<ArchKind> parse_arch_kind(std::string_view text);

struct ArchParams {
    OpType op = OpType::Add;
    ArchKind arch = ArchKind::Exact;
    int width = 8;          // bits per operand
    int k = 0;              // approximation degree in bits
    bool loa_and_carry = false;

    bool operator==(const ArchParams&) const = default;
    auto operator<=>(const ArchParams&) const = default;
};

// Short identifier such as "mul-trunc-w8-k2"; also the instance tag of a
// standalone generated module.
std::string describe(const ArchParams& p);

// Throws BadParams unless the combination is generatable.
void validate(const ArchParams& p);

// Adder: inputs a[w], b[w]; output s[w+1].
//   EXACT  ripple-carry
//   LOA    s[i] = a[i] | b[i] for i < k, exact upper part with carry-in 0
//          (or a[k-1] & b[k-1] when loa_and_carry)
//   TRUNC  s[i] = 0 for i < k, exact upper part with carry-in 0
Netlist gen_adder(const ArchParams& p);

// Multiplier: inputs a[w], b[w]; output p[2w].
//   EXACT   array multiplier (AND partial products, ripple row adders)
//   TRUNC   partial products with row + col < k replaced by CONST0
//   BLOCK22 2x2 digit blocks; blocks at bit offset sum < k use the
//           approximate block (3 x 3 -> 7), others are exact
Netlist gen_multiplier(const ArchParams& p);

// Subtractor: inputs a[w], b[w]; output d[w+1] = (a - b) mod 2^(w+1).
// Same families as the adder applied to a + ~b with carry-in 1 at stage k.
Netlist gen_subtractor(const ArchParams& p);

// Dispatches on p.op.
Netlist gen_module(const ArchParams& p);

// Reference arithmetic: a+b (w+1 bits), a*b (2w bits), (a-b) mod 2^(w+1).
std::uint64_t exact_oracle(OpType op, std::uint64_t a, std::uint64_t b, int width);

// Output width of the module for operand width `width`.
int output_width(OpType op, int width);

}  // namespace axt
