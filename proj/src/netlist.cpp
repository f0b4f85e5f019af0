#include "axt/netlist.hpp"

#include "axt/errors.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>

namespace axt {

namespace {

constexpr std::array<std::string_view, 11> kGateNames = {
    "AND", "OR", "NAND", "NOR", "XOR", "XNOR", "NOT", "BUF", "MUX2", "CONST0", "CONST1"};

}  // namespace

std::string_view to_string(GateKind kind) { return kGateNames.at(static_cast<std::size_t>(kind)); }

std::optional<GateKind> parse_gate_kind(std::string_view text)
{
    for (std::size_t i = 0; i < kGateNames.size(); ++i)
        if (kGateNames[i] == text) return static_cast<GateKind>(i);
    return std::nullopt;
}

bool arity_ok(GateKind kind, std::size_t n)
{
    switch (kind) {
    case GateKind::Not:
    case GateKind::Buf: return n == 1;
    case GateKind::Mux2: return n == 3;
    case GateKind::Const0:
    case GateKind::Const1: return n == 0;
    default: return n >= 2;
    }
}

std::string_view to_string(InstanceKind kind)
{
    return kind == InstanceKind::Approximate ? "approximate" : "deterministic";
}

// ---------------------------------------------------------------- Netlist

std::optional<NetId> Netlist::find_net(std::string_view name) const
{
    auto it = net_index_.find(std::string(name));
    if (it == net_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<GateId> Netlist::find_gate(std::string_view name) const
{
    auto it = gate_index_.find(std::string(name));
    if (it == gate_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<GateId> Netlist::driver(NetId net) const
{
    auto d = driver_.at(net);
    if (d < 0) return std::nullopt;
    return static_cast<GateId>(d);
}

namespace {

std::vector<Word> signature(const Netlist& n, const std::vector<NetId>& ports, bool inputs)
{
    std::vector<Word> out;
    std::set<NetId> covered;
    for (const auto& w : n.words()) {
        if (w.bits.empty()) continue;
        bool is_in = n.is_input(w.bits.front());
        if (is_in != inputs) continue;
        out.push_back(w);
        covered.insert(w.bits.begin(), w.bits.end());
    }
    for (NetId p : ports)
        if (!covered.count(p)) out.push_back(Word{n.net_name(p), {p}});
    return out;
}

}  // namespace

std::vector<Word> Netlist::input_words() const { return signature(*this, inputs_, true); }

std::vector<Word> Netlist::output_words() const
{
    // A net can be both input and output (pass-through); output words are
    // recognised by membership in the output list instead.
    std::vector<Word> out;
    std::set<NetId> covered;
    std::set<NetId> outs(outputs_.begin(), outputs_.end());
    for (const auto& w : words_) {
        if (w.bits.empty() || !outs.count(w.bits.front()) || is_input(w.bits.front())) continue;
        out.push_back(w);
        covered.insert(w.bits.begin(), w.bits.end());
    }
    for (NetId p : outputs_)
        if (!covered.count(p)) out.push_back(Word{net_names_[p], {p}});
    return out;
}

std::vector<GateId> Netlist::gates_with_tag(std::string_view tag) const
{
    std::vector<GateId> ids;
    for (const auto& g : gates_)
        if (g.tag == tag) ids.push_back(g.id);
    return ids;
}

// ---------------------------------------------------------------- NetlistBuilder

NetlistBuilder::NetlistBuilder(const Netlist& base)
    : net_names_(base.net_names_),
      net_index_(base.net_index_),
      gates_(base.gates_),
      gate_index_(base.gate_index_),
      inputs_(base.inputs_),
      outputs_(base.outputs_),
      words_(base.words_),
      instances_(base.instances_)
{
}

NetId NetlistBuilder::net(std::string_view name)
{
    std::string key(name);
    auto it = net_index_.find(key);
    if (it != net_index_.end()) return it->second;
    auto id = static_cast<NetId>(net_names_.size());
    net_names_.push_back(key);
    net_index_.emplace(std::move(key), id);
    return id;
}

NetId NetlistBuilder::fresh_net(std::string_view stem)
{
    std::string name;
    do {
        name = std::string(stem) + std::to_string(fresh_counter_++);
    } while (net_index_.count(name));
    return net(name);
}

bool NetlistBuilder::has_net(std::string_view name) const { return net_index_.count(std::string(name)) != 0; }

NetId NetlistBuilder::add_input(std::string_view name)
{
    NetId id = net(name);
    inputs_.push_back(id);
    return id;
}

void NetlistBuilder::add_output(NetId n) { outputs_.push_back(n); }

void NetlistBuilder::add_word(std::string name, std::vector<NetId> bits)
{
    words_.push_back(Word{std::move(name), std::move(bits)});
}

GateId NetlistBuilder::add_gate(GateKind kind, std::vector<NetId> inputs, NetId output, std::string tag,
                                std::string name)
{
    auto id = static_cast<GateId>(gates_.size());
    if (name.empty()) {
        name = "g" + std::to_string(id);
        while (gate_index_.count(name)) name += "_";
    }
    if (gate_index_.count(name)) throw SemanticError("duplicate gate id '" + name + "'");
    gate_index_.emplace(name, id);
    gates_.push_back(Gate{id, std::move(name), kind, std::move(inputs), output, std::move(tag)});
    return id;
}

void NetlistBuilder::set_tag(GateId gate, std::string tag) { gates_.at(gate).tag = std::move(tag); }

std::optional<GateId> NetlistBuilder::find_gate(std::string_view name) const
{
    auto it = gate_index_.find(std::string(name));
    if (it == gate_index_.end()) return std::nullopt;
    return it->second;
}

void NetlistBuilder::add_instance(std::string tag, InstanceInfo info) { instances_[std::move(tag)] = info; }

NetId NetlistBuilder::detach_driver(NetId n, std::string_view stem)
{
    for (auto& g : gates_) {
        if (g.output == n) {
            NetId moved = fresh_net(stem);
            g.output = moved;
            return moved;
        }
    }
    throw SemanticError("net '" + net_names_.at(n) + "' has no gate driver to detach");
}

Netlist NetlistBuilder::build() const
{
    Netlist n;
    n.net_names_ = net_names_;
    n.net_index_ = net_index_;
    n.gates_ = gates_;
    n.gate_index_ = gate_index_;
    n.inputs_ = inputs_;
    n.outputs_ = outputs_;
    n.words_ = words_;
    n.instances_ = instances_;

    const std::size_t nn = net_names_.size();
    n.driver_.assign(nn, -2);
    n.is_input_.assign(nn, 0);
    n.is_output_.assign(nn, 0);
    n.readers_.assign(nn, {});

    for (NetId p : inputs_) {
        if (n.is_input_[p]) throw SemanticError("input '" + net_names_[p] + "' declared twice");
        n.is_input_[p] = 1;
        n.driver_[p] = -1;
    }
    for (const auto& g : gates_) {
        if (!arity_ok(g.kind, g.inputs.size()))
            throw SemanticError("gate '" + g.name + "' of kind " + std::string(to_string(g.kind)) + " has " +
                                std::to_string(g.inputs.size()) + " inputs");
        if (n.driver_[g.output] != -2)
            throw SemanticError("net '" + net_names_[g.output] + "' has more than one driver");
        n.driver_[g.output] = g.id;
        for (NetId in : g.inputs) n.readers_[in].push_back(g.id);
        if (!g.tag.empty() && !instances_.count(g.tag))
            throw SemanticError("gate '" + g.name + "' tagged with unknown instance '" + g.tag + "'");
    }
    for (NetId p : outputs_) {
        if (n.is_output_[p]) throw SemanticError("output '" + net_names_[p] + "' declared twice");
        n.is_output_[p] = 1;
    }
    for (NetId i = 0; i < nn; ++i)
        if (n.driver_[i] == -2) throw SemanticError("net '" + net_names_[i] + "' is undriven");

    std::set<NetId> in_word, out_word;
    for (const auto& w : words_) {
        if (w.bits.empty()) throw SemanticError("word '" + w.name + "' is empty");
        bool inputs = n.is_input_[w.bits.front()] != 0;
        auto& seen = inputs ? in_word : out_word;
        for (NetId b : w.bits) {
            bool ok = inputs ? n.is_input_[b] != 0 : n.is_output_[b] != 0;
            if (!ok) throw SemanticError("word '" + w.name + "' mixes non-port or mixed-direction bits");
            if (!seen.insert(b).second)
                throw SemanticError("net '" + net_names_[b] + "' belongs to more than one word");
        }
    }
    return n;
}

// ---------------------------------------------------------------- analyses

std::vector<GateId> topo_order(const Netlist& netlist)
{
    const auto& gates = netlist.gates();
    std::vector<std::size_t> pending(gates.size(), 0);
    for (const auto& g : gates)
        for (NetId in : g.inputs)
            if (netlist.driver(in)) ++pending[g.id];

    std::priority_queue<GateId, std::vector<GateId>, std::greater<>> ready;
    for (const auto& g : gates)
        if (pending[g.id] == 0) ready.push(g.id);

    std::vector<GateId> order;
    order.reserve(gates.size());
    while (!ready.empty()) {
        GateId id = ready.top();
        ready.pop();
        order.push_back(id);
        for (GateId r : netlist.readers(gates[id].output))
            if (--pending[r] == 0) ready.push(r);
    }
    if (order.size() == gates.size()) return order;

    // Walk backwards through unresolved drivers until a gate repeats.
    GateId start = 0;
    while (pending[start] == 0) ++start;
    std::vector<GateId> walk;
    std::vector<int> pos(gates.size(), -1);
    GateId cur = start;
    while (pos[cur] < 0) {
        pos[cur] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (NetId in : gates[cur].inputs) {
            auto d = netlist.driver(in);
            if (d && pending[*d] > 0) {
                cur = *d;
                break;
            }
        }
    }
    std::vector<std::size_t> cycle;
    for (std::size_t i = static_cast<std::size_t>(pos[cur]); i < walk.size(); ++i)
        cycle.push_back(gates[walk[i]].output);
    std::reverse(cycle.begin(), cycle.end());
    std::string msg = "combinational cycle through nets:";
    for (auto c : cycle) msg += " " + netlist.net_name(static_cast<NetId>(c));
    throw CycleError(msg, std::move(cycle));
}

bool structurally_equal(const Netlist& a, const Netlist& b)
{
    auto names = [](const Netlist& n, const std::vector<NetId>& ids) {
        std::vector<std::string> out;
        for (NetId i : ids) out.push_back(n.net_name(i));
        return out;
    };
    if (names(a, a.primary_inputs()) != names(b, b.primary_inputs())) return false;
    if (names(a, a.primary_outputs()) != names(b, b.primary_outputs())) return false;
    if (a.words().size() != b.words().size() || a.gates().size() != b.gates().size()) return false;
    for (std::size_t i = 0; i < a.words().size(); ++i) {
        if (a.words()[i].name != b.words()[i].name) return false;
        if (names(a, a.words()[i].bits) != names(b, b.words()[i].bits)) return false;
    }
    for (std::size_t i = 0; i < a.gates().size(); ++i) {
        const auto& ga = a.gates()[i];
        const auto& gb = b.gates()[i];
        if (ga.name != gb.name || ga.kind != gb.kind || ga.tag != gb.tag) return false;
        if (a.net_name(ga.output) != b.net_name(gb.output)) return false;
        if (names(a, ga.inputs) != names(b, gb.inputs)) return false;
    }
    return a.instances() == b.instances();
}

}  // namespace axt
