#include "axt/approx.hpp"

#include "axt/errors.hpp"
#include "axt/hierarchy.hpp"

#include <array>
#include <utility>
#include <vector>

namespace axt {

namespace {

constexpr std::array<std::string_view, 4> kOpNames = {"add", "mul", "sub", "const"};
constexpr std::array<std::string_view, 4> kArchNames = {"exact", "loa", "trunc", "block22"};

// Gate-level construction helpers; every gate gets the module's tag.
class Gen {
public:
    explicit Gen(std::string tag) : tag_(std::move(tag)) {}

    NetlistBuilder& b() { return b_; }

    std::vector<NetId> inputs(const std::string& name, int width)
    {
        std::vector<NetId> bits;
        for (const auto& n : bus(name, static_cast<std::size_t>(width))) bits.push_back(b_.add_input(n));
        b_.add_word(name, bits);
        return bits;
    }

    NetId gate(GateKind k, std::vector<NetId> in)
    {
        NetId out = b_.fresh_net("n");
        b_.add_gate(k, std::move(in), out, tag_);
        return out;
    }
    NetId and2(NetId x, NetId y) { return gate(GateKind::And, {x, y}); }
    NetId or2(NetId x, NetId y) { return gate(GateKind::Or, {x, y}); }
    NetId xor2(NetId x, NetId y) { return gate(GateKind::Xor, {x, y}); }
    NetId inv(NetId x) { return gate(GateKind::Not, {x}); }
    NetId const0() { return gate(GateKind::Const0, {}); }
    NetId const1() { return gate(GateKind::Const1, {}); }

    std::pair<NetId, NetId> half_adder(NetId x, NetId y) { return {xor2(x, y), and2(x, y)}; }

    std::pair<NetId, NetId> full_adder(NetId x, NetId y, NetId c)
    {
        NetId p = xor2(x, y);
        NetId s = xor2(p, c);
        NetId co = or2(and2(x, y), and2(p, c));
        return {s, co};
    }

    // Drives the named output word from `bits` through buffers so output nets
    // carry the port names.
    void outputs(const std::string& name, const std::vector<NetId>& bits)
    {
        std::vector<NetId> port;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            NetId o = b_.net(bit_name(name, i));
            b_.add_gate(GateKind::Buf, {bits[i]}, o, tag_);
            b_.add_output(o);
            port.push_back(o);
        }
        b_.add_word(name, std::move(port));
    }

    Netlist finish(const ArchParams& p)
    {
        b_.add_instance(tag_, InstanceInfo{InstanceKind::Approximate, static_cast<int>(p.op), static_cast<int>(p.arch)});
        return b_.build();
    }

private:
    std::string tag_;
    NetlistBuilder b_;
};

// Ripple addition of x + y (+ optional carry-in) over equal-width, non-empty
// operands; returns the sum bits and the carry out.
struct RippleResult {
    std::vector<NetId> sum;
    NetId carry;
};

RippleResult ripple(Gen& g, const std::vector<NetId>& x, const std::vector<NetId>& y, std::optional<NetId> cin)
{
    RippleResult r;
    std::optional<NetId> c = cin;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto [s, co] = c ? g.full_adder(x[i], y[i], *c) : g.half_adder(x[i], y[i]);
        r.sum.push_back(s);
        c = co;
    }
    r.carry = *c;
    return r;
}

// Adds `addend` shifted left by `shift` into the accumulator (bits by
// weight) with a ripple chain, dropping carries at or above `max_width`.
std::vector<NetId> accumulate(Gen& g, std::vector<NetId> acc, const std::vector<NetId>& addend, std::size_t shift,
                              std::size_t max_width)
{
    while (acc.size() < shift) acc.push_back(g.const0());
    std::optional<NetId> carry;
    for (std::size_t i = 0;; ++i) {
        const std::size_t w = shift + i;
        if (w >= max_width || (i >= addend.size() && !carry)) break;
        std::vector<NetId> terms;
        if (i < addend.size()) terms.push_back(addend[i]);
        if (w < acc.size()) terms.push_back(acc[w]);
        if (carry) terms.push_back(*carry);
        NetId bit = terms[0];
        carry.reset();
        if (terms.size() >= 2) {
            auto [s, co] = terms.size() == 3 ? g.full_adder(terms[0], terms[1], terms[2])
                                             : g.half_adder(terms[0], terms[1]);
            bit = s;
            carry = co;
        }
        if (w < acc.size())
            acc[w] = bit;
        else
            acc.push_back(bit);
    }
    return acc;
}

// Shared low/high structure of the adder and subtractor. `y` is the (possibly
// inverted) second operand; `carry_one` injects a 1 at stage k.
std::vector<NetId> approx_sum(Gen& g, const ArchParams& p, const std::vector<NetId>& a, const std::vector<NetId>& y,
                              bool carry_one, NetId& carry_out)
{
    const auto k = static_cast<std::size_t>(p.k);
    std::vector<NetId> sum;
    for (std::size_t i = 0; i < k; ++i) {
        if (p.arch == ArchKind::Loa)
            sum.push_back(g.or2(a[i], y[i]));
        else
            sum.push_back(g.const0());
    }
    std::optional<NetId> cin;
    if (carry_one)
        cin = g.const1();
    else if (p.arch == ArchKind::Loa && p.loa_and_carry && k > 0)
        cin = g.and2(a[k - 1], y[k - 1]);
    std::vector<NetId> hi_a(a.begin() + static_cast<long>(k), a.end());
    std::vector<NetId> hi_y(y.begin() + static_cast<long>(k), y.end());
    auto r = ripple(g, hi_a, hi_y, cin);
    sum.insert(sum.end(), r.sum.begin(), r.sum.end());
    carry_out = r.carry;
    return sum;
}

}  // namespace

std::string_view to_string(OpType op) { return kOpNames.at(static_cast<std::size_t>(op)); }
std::string_view to_string(ArchKind arch) { return kArchNames.at(static_cast<std::size_t>(arch)); }

std::optional<OpType> parse_op_type(std::string_view text)
{
    for (std::size_t i = 0; i < kOpNames.size(); ++i)
        if (kOpNames[i] == text) return static_cast<OpType>(i);
    return std::nullopt;
}

std::optional<ArchKind> parse_arch_kind(std::string_view text)
{
    for (std::size_t i = 0; i < kArchNames.size(); ++i)
        if (kArchNames[i] == text) return static_cast<ArchKind>(i);
    return std::nullopt;
}

std::string describe(const ArchParams& p)
{
    std::string s = std::string(to_string(p.op)) + "-" + std::string(to_string(p.arch)) + "-w" +
                    std::to_string(p.width) + "-k" + std::to_string(p.k);
    if (p.loa_and_carry) s += "-ac";
    return s;
}

void validate(const ArchParams& p)
{
    if (p.op == OpType::Const) throw BadParams("constant generators are not arithmetic modules");
    if (p.width < 2) throw BadParams("operand width must be at least 2");
    if (p.width > 31) throw BadParams("operand width must be at most 31");
    if (p.k < 0 || p.k >= p.width) throw BadParams("approximation degree k must satisfy 0 <= k < width");
    if (p.arch == ArchKind::Exact && p.k != 0) throw BadParams("exact architecture requires k = 0");
    if (p.loa_and_carry && p.arch != ArchKind::Loa) throw BadParams("loa_and_carry applies to LOA only");
    switch (p.op) {
    case OpType::Add:
    case OpType::Sub:
        if (p.arch == ArchKind::Block22) throw BadParams("BLOCK22 is a multiplier architecture");
        break;
    case OpType::Mul:
        if (p.arch == ArchKind::Loa) throw BadParams("LOA is an adder architecture");
        if (p.arch == ArchKind::Block22 && p.width % 2 != 0) throw BadParams("BLOCK22 needs an even width");
        break;
    default: break;
    }
}

Netlist gen_adder(const ArchParams& p)
{
    if (p.op != OpType::Add) throw BadParams("gen_adder needs op ADD");
    validate(p);
    Gen g(describe(p));
    auto a = g.inputs("a", p.width);
    auto b = g.inputs("b", p.width);
    NetId carry = 0;
    auto sum = approx_sum(g, p, a, b, false, carry);
    sum.push_back(carry);
    g.outputs("s", sum);
    return g.finish(p);
}

Netlist gen_subtractor(const ArchParams& p)
{
    if (p.op != OpType::Sub) throw BadParams("gen_subtractor needs op SUB");
    validate(p);
    Gen g(describe(p));
    auto a = g.inputs("a", p.width);
    auto b = g.inputs("b", p.width);
    std::vector<NetId> nb;
    for (NetId x : b) nb.push_back(g.inv(x));
    NetId carry = 0;
    auto diff = approx_sum(g, p, a, nb, true, carry);
    // Top bit: 0 + 1 + carry.
    diff.push_back(g.inv(carry));
    g.outputs("d", diff);
    return g.finish(p);
}

Netlist gen_multiplier(const ArchParams& p)
{
    if (p.op != OpType::Mul) throw BadParams("gen_multiplier needs op MUL");
    validate(p);
    Gen g(describe(p));
    const auto w = static_cast<std::size_t>(p.width);
    const auto k = static_cast<std::size_t>(p.k);
    auto a = g.inputs("a", p.width);
    auto b = g.inputs("b", p.width);
    std::vector<NetId> acc;

    if (p.arch == ArchKind::Block22) {
        for (std::size_t j = 0; j < w / 2; ++j) {
            for (std::size_t i = 0; i < w / 2; ++i) {
                NetId a0 = a[2 * i], a1 = a[2 * i + 1];
                NetId b0 = b[2 * j], b1 = b[2 * j + 1];
                std::vector<NetId> block;
                if (2 * i + 2 * j < k) {
                    block = {g.and2(a0, b0), g.or2(g.and2(a1, b0), g.and2(a0, b1)), g.and2(a1, b1)};
                } else {
                    NetId x = g.and2(a1, b0);
                    NetId y = g.and2(a0, b1);
                    NetId hi = g.and2(a1, b1);
                    NetId c1 = g.and2(x, y);
                    block = {g.and2(a0, b0), g.xor2(x, y), g.xor2(hi, c1), g.and2(hi, c1)};
                }
                acc = accumulate(g, std::move(acc), block, 2 * (i + j), 2 * w);
            }
        }
    } else {
        for (std::size_t r = 0; r < w; ++r) {
            std::vector<NetId> row;
            for (std::size_t c = 0; c < w; ++c) {
                if (p.arch == ArchKind::Trunc && r + c < k)
                    row.push_back(g.const0());
                else
                    row.push_back(g.and2(a[c], b[r]));
            }
            acc = accumulate(g, std::move(acc), row, r, 2 * w);
        }
    }
    while (acc.size() < 2 * w) acc.push_back(g.const0());
    acc.resize(2 * w);
    g.outputs("p", acc);
    return g.finish(p);
}

Netlist gen_module(const ArchParams& p)
{
    switch (p.op) {
    case OpType::Add: return gen_adder(p);
    case OpType::Mul: return gen_multiplier(p);
    case OpType::Sub: return gen_subtractor(p);
    default: throw BadParams("no generator for op type '" + std::string(to_string(p.op)) + "'");
    }
}

int output_width(OpType op, int width)
{
    switch (op) {
    case OpType::Mul: return 2 * width;
    case OpType::Const: return width;
    default: return width + 1;
    }
}

std::uint64_t exact_oracle(OpType op, std::uint64_t a, std::uint64_t b, int width)
{
    const std::uint64_t limit = std::uint64_t{1} << width;
    if (a >= limit || b >= limit) throw BadParams("operand exceeds the declared width");
    switch (op) {
    case OpType::Add: return a + b;
    case OpType::Mul: return a * b;
    case OpType::Sub: return (a - b) & ((limit << 1) - 1);
    default: throw BadParams("exact_oracle supports add, mul and sub");
    }
}

}  // namespace axt
