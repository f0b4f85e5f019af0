#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace axt {

using NetId = std::uint32_t;
using GateId = std::uint32_t;

enum class GateKind : std::uint8_t {
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    Mux2,  // inputs (select, a, b); output = select ? b : a
    Const0,
    Const1,
};

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view text);
bool arity_ok(GateKind kind, std::size_t n_inputs);

enum class InstanceKind : std::uint8_t { Approximate, Deterministic };

std::string_view to_string(InstanceKind kind);

struct InstanceInfo {
    InstanceKind kind = InstanceKind::Approximate;
    int op_type = 0;
    int arch_id = 0;

    bool operator==(const InstanceInfo&) const = default;
};

struct Gate {
    GateId id = 0;
    std::string name;
    GateKind kind = GateKind::Buf;
    std::vector<NetId> inputs;
    NetId output = 0;
    std::string tag;  // hierarchical path of the originating module instance
};

// A named group of primary-input or primary-output bits, LSB first.
struct Word {
    std::string name;
    std::vector<NetId> bits;

    std::size_t width() const { return bits.size(); }
};

// Flat combinational gate graph over single-bit nets. Immutable once built;
// construct through NetlistBuilder, which validates the structural invariants.
class Netlist {
public:
    Netlist() = default;

    std::size_t num_nets() const { return net_names_.size(); }
    std::size_t num_gates() const { return gates_.size(); }

    const std::string& net_name(NetId net) const { return net_names_.at(net); }
    std::optional<NetId> find_net(std::string_view name) const;

    const std::vector<Gate>& gates() const { return gates_; }
    const Gate& gate(GateId id) const { return gates_.at(id); }
    std::optional<GateId> find_gate(std::string_view name) const;

    const std::vector<NetId>& primary_inputs() const { return inputs_; }
    const std::vector<NetId>& primary_outputs() const { return outputs_; }
    // Word declarations in file order (input and output words mixed).
    const std::vector<Word>& words() const { return words_; }

    // Input signature: declared input words in declaration order followed by
    // a one-bit word for every primary input not covered by a declaration.
    std::vector<Word> input_words() const;
    std::vector<Word> output_words() const;

    const std::map<std::string, InstanceInfo>& instances() const { return instances_; }

    // Gate driving `net`, or nullopt for a primary input.
    std::optional<GateId> driver(NetId net) const;
    bool is_input(NetId net) const { return is_input_.at(net) != 0; }
    bool is_output(NetId net) const { return is_output_.at(net) != 0; }
    // Gates reading `net`, one entry per input pin.
    const std::vector<GateId>& readers(NetId net) const { return readers_.at(net); }
    std::size_t fanout(NetId net) const { return readers_.at(net).size(); }

    // Gate ids carrying `tag`, in id order.
    std::vector<GateId> gates_with_tag(std::string_view tag) const;

private:
    friend class NetlistBuilder;

    std::vector<std::string> net_names_;
    std::unordered_map<std::string, NetId> net_index_;
    std::vector<Gate> gates_;
    std::unordered_map<std::string, GateId> gate_index_;
    std::vector<NetId> inputs_;
    std::vector<NetId> outputs_;
    std::vector<Word> words_;
    std::map<std::string, InstanceInfo> instances_;

    std::vector<std::int64_t> driver_;  // gate id, or -1 for primary input
    std::vector<std::uint8_t> is_input_;
    std::vector<std::uint8_t> is_output_;
    std::vector<std::vector<GateId>> readers_;
};

class NetlistBuilder {
public:
    NetlistBuilder() = default;
    // Start from a copy of an existing netlist (used to derive modified copies).
    explicit NetlistBuilder(const Netlist& base);

    // Returns the net called `name`, creating it if needed.
    NetId net(std::string_view name);
    // Creates a net with a name not yet in use, derived from `stem`.
    NetId fresh_net(std::string_view stem);
    bool has_net(std::string_view name) const;
    const std::string& net_name(NetId net) const { return net_names_.at(net); }

    NetId add_input(std::string_view name);
    void add_output(NetId net);
    void add_word(std::string name, std::vector<NetId> bits);

    GateId add_gate(GateKind kind, std::vector<NetId> inputs, NetId output,
                    std::string tag = {}, std::string name = {});
    void set_tag(GateId gate, std::string tag);
    std::optional<GateId> find_gate(std::string_view name) const;
    void add_instance(std::string tag, InstanceInfo info);

    // Moves whatever gate drives `net` onto a fresh net and returns that net,
    // leaving `net` undriven so a new gate can be inserted in front of it.
    NetId detach_driver(NetId net, std::string_view stem);

    std::size_t num_gates() const { return gates_.size(); }

    // Validates arity, single drivers, fully-driven nets, word and tag
    // consistency. Throws SemanticError on violation.
    Netlist build() const;

private:
    std::vector<std::string> net_names_;
    std::unordered_map<std::string, NetId> net_index_;
    std::vector<Gate> gates_;
    std::unordered_map<std::string, GateId> gate_index_;
    std::vector<NetId> inputs_;
    std::vector<NetId> outputs_;
    std::vector<Word> words_;
    std::map<std::string, InstanceInfo> instances_;
    std::size_t fresh_counter_ = 0;
};

// Deterministic topological order of gate ids; ties broken by smallest id.
// Throws CycleError carrying the nets of one cycle.
std::vector<GateId> topo_order(const Netlist& netlist);

// Structural equality by names (net ids may differ between equal netlists).
bool structurally_equal(const Netlist& a, const Netlist& b);

}  // namespace axt
