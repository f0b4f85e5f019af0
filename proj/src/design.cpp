#include "axt/design.hpp"

#include "axt/errors.hpp"

#include <algorithm>

namespace axt {

namespace {

Netlist const_leaf(std::uint64_t value, int width)
{
    NetlistBuilder b;
    std::vector<NetId> bits;
    for (int i = 0; i < width; ++i) {
        NetId n = b.net(bit_name("c", static_cast<std::size_t>(i)));
        b.add_gate(((value >> i) & 1U) ? GateKind::Const1 : GateKind::Const0, {}, n);
        b.add_output(n);
        bits.push_back(n);
    }
    b.add_word("c", std::move(bits));
    return b.build();
}

// Zero-extends a bus to `width` with tie constants.
std::vector<std::string> widen(std::vector<std::string> bits, std::size_t width)
{
    while (bits.size() < width) bits.emplace_back(kTie0);
    return bits;
}

class DesignBuilder {
public:
    explicit DesignBuilder(const DesignConfig& c) : cfg_(c) {}

    std::string constant(const std::string& name, std::uint64_t value)
    {
        const std::string leaf = "const_" + name;
        design_.leaves[leaf] = const_leaf(value, cfg_.width);
        const InstanceInfo info{InstanceKind::Deterministic, static_cast<int>(OpType::Const), 0};
        top_.instances.push_back({name, leaf, info, {{"c", bus(name, static_cast<std::size_t>(cfg_.width))}}});
        return name;
    }

    // Instantiates an arithmetic slot; returns the output bus.
    std::vector<std::string> op(const OperatorSlot& slot, const std::vector<std::string>& a,
                                const std::vector<std::string>& b, std::vector<std::string> out = {})
    {
        ArchChoice choice;
        if (auto it = cfg_.assign.find(slot.name); it != cfg_.assign.end()) choice = it->second;
        const ArchParams p = slot_params(slot, choice);
        const std::string leaf = describe(p);
        if (!design_.leaves.count(leaf)) design_.leaves[leaf] = gen_module(p);
        const std::size_t ow = static_cast<std::size_t>(output_width(p.op, p.width));
        if (out.empty()) out = bus(slot.name + "_o", ow);
        const InstanceInfo info{InstanceKind::Approximate, static_cast<int>(p.op), static_cast<int>(p.arch)};
        const auto w = static_cast<std::size_t>(p.width);
        const char* out_port = p.op == OpType::Mul ? "p" : (p.op == OpType::Sub ? "d" : "s");
        top_.instances.push_back({slot.name, leaf, info, {{"a", widen(a, w)}, {"b", widen(b, w)}, {out_port, out}}});
        return out;
    }

    Design finish(CompositeModule top)
    {
        top.instances = std::move(top_.instances);
        design_.top = top.name;
        design_.composites[top.name] = std::move(top);
        return std::move(design_);
    }

private:
    const DesignConfig& cfg_;
    Design design_;
    CompositeModule top_;
};

// Pairwise reduction plan of the FIR adder tree: (slot, left, right) triples
// over operand indices, in creation order. Operand i < taps is product i.
struct TreeNode {
    std::size_t left, right;
    int width;  // operand width of the adder
};

std::vector<TreeNode> adder_tree(int taps, int width)
{
    std::vector<std::pair<std::size_t, int>> level;  // operand id, operand width
    for (int i = 0; i < taps; ++i) level.push_back({static_cast<std::size_t>(i), 2 * width});
    std::vector<TreeNode> nodes;
    std::size_t next = static_cast<std::size_t>(taps);
    while (level.size() > 1) {
        std::vector<std::pair<std::size_t, int>> up;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            const int w = std::max(level[i].second, level[i + 1].second);
            nodes.push_back({level[i].first, level[i + 1].first, w});
            up.push_back({next++, w + 1});
        }
        if (level.size() % 2) up.push_back(level.back());
        level = std::move(up);
    }
    return nodes;
}

}  // namespace

std::string_view to_string(DesignKind kind) { return kind == DesignKind::Fir ? "fir" : "fft"; }

void DesignConfig::validate() const
{
    if (width < 2 || width > 15) throw BadParams("design width must be in [2, 15]");
    if (design == DesignKind::Fir) {
        if (taps < 1 || taps > 16) throw BadParams("FIR taps must be in [1, 16]");
        if (coeffs.size() != static_cast<std::size_t>(taps)) throw BadParams("coefficient count must equal taps");
        for (auto c : coeffs)
            if (c >> width) throw BadParams("coefficient exceeds the data width");
    } else if (twiddle >> width) {
        throw BadParams("twiddle exceeds the data width");
    }
    const auto slots = design_slots(*this);
    for (const auto& [name, choice] : assign) {
        auto it = std::find_if(slots.begin(), slots.end(), [&](const OperatorSlot& s) { return s.name == name; });
        if (it == slots.end()) throw BadParams("assignment to unknown operator '" + name + "'");
        axt::validate(slot_params(*it, choice));
    }
}

std::vector<OperatorSlot> design_slots(const DesignConfig& c)
{
    std::vector<OperatorSlot> slots;
    if (c.design == DesignKind::FftButterfly) {
        slots.push_back({"mul0", OpType::Mul, c.width});
        slots.push_back({"add0", OpType::Add, 2 * c.width});
        slots.push_back({"sub0", OpType::Sub, 2 * c.width});
        return slots;
    }
    for (int i = 0; i < c.taps; ++i) slots.push_back({"mul" + std::to_string(i), OpType::Mul, c.width});
    const auto tree = adder_tree(c.taps, c.width);
    for (std::size_t i = 0; i < tree.size(); ++i) slots.push_back({"add" + std::to_string(i), OpType::Add, tree[i].width});
    return slots;
}

ArchParams slot_params(const OperatorSlot& slot, const ArchChoice& choice)
{
    return ArchParams{slot.op, choice.arch, slot.width, choice.k, choice.loa_and_carry};
}

std::string design_top(const DesignConfig& c) { return std::string(to_string(c.design)); }

Design gen_design(const DesignConfig& c)
{
    c.validate();
    const auto slots = design_slots(c);
    const auto w = static_cast<std::size_t>(c.width);
    DesignBuilder db(c);
    CompositeModule top;
    top.name = design_top(c);

    if (c.design == DesignKind::FftButterfly) {
        top.inputs = {{"a", w}, {"b", w}};
        top.outputs = {{"y0", 2 * w + 1}, {"y1", 2 * w + 1}};
        db.constant("tw", c.twiddle);
        auto t = db.op(slots[0], bus("b", w), bus("tw", w));
        db.op(slots[1], bus("a", w), t, bus("y0", 2 * w + 1));
        db.op(slots[2], bus("a", w), t, bus("y1", 2 * w + 1));
        return db.finish(std::move(top));
    }

    const auto taps = static_cast<std::size_t>(c.taps);
    std::vector<std::vector<std::string>> operands;
    for (std::size_t i = 0; i < taps; ++i) {
        const std::string x = "x" + std::to_string(i);
        top.inputs.push_back({x, w});
        auto coeff = db.constant("c" + std::to_string(i), c.coeffs[i]);
        operands.push_back(db.op(slots[i], bus(x, w), bus(coeff, w)));
    }
    const auto tree = adder_tree(c.taps, c.width);
    const std::size_t out_w = tree.empty() ? 2 * w : static_cast<std::size_t>(tree.back().width) + 1;
    top.outputs = {{"y", out_w}};
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const bool last = i + 1 == tree.size();
        operands.push_back(db.op(slots[taps + i], operands[tree[i].left], operands[tree[i].right],
                                 last ? bus("y", out_w) : std::vector<std::string>{}));
    }
    if (tree.empty()) {
        // Single tap: the product is the output; rebind the multiplier.
        top.outputs = {{"y", 2 * w}};
        Design d = db.finish(std::move(top));
        auto& inst = d.composites[design_top(c)].instances.back();
        inst.bindings.back().nets = bus("y", 2 * w);
        return d;
    }
    return db.finish(std::move(top));
}

Netlist build_design(const DesignConfig& config) { return flatten(gen_design(config)); }

std::uint64_t design_reference(const DesignConfig& c, std::span<const std::uint64_t> row)
{
    if (c.design == DesignKind::FftButterfly) {
        const std::uint64_t t = row[1] * c.twiddle;
        const int ow = 2 * c.width + 1;
        const std::uint64_t m = (std::uint64_t{1} << ow) - 1;
        return ((row[0] + t) & m) | (((row[0] - t) & m) << ow);
    }
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) acc += row[i] * c.coeffs[i];
    return acc;
}

}  // namespace axt
