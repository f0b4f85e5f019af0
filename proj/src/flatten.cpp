#include "axt/hierarchy.hpp"

#include "axt/errors.hpp"

#include <unordered_map>

namespace axt {

std::string bit_name(const std::string& port, std::size_t i) { return port + "[" + std::to_string(i) + "]"; }

std::vector<std::string> bus(const std::string& name, std::size_t width)
{
    std::vector<std::string> out;
    out.reserve(width);
    for (std::size_t i = 0; i < width; ++i) out.push_back(bit_name(name, i));
    return out;
}

namespace {

class Flattener {
public:
    explicit Flattener(const Design& d) : design_(d) {}

    Netlist run()
    {
        auto it = design_.composites.find(design_.top);
        if (it == design_.composites.end()) throw UnknownModule("top module '" + design_.top + "' not found");
        const auto& top = it->second;

        Scope scope;
        for (const auto& p : top.inputs) {
            std::vector<NetId> bits;
            for (const auto& n : bus(p.name, p.width)) {
                bits.push_back(b_.add_input(n));
                scope[n] = n;
            }
            b_.add_word(p.name, std::move(bits));
        }
        for (const auto& p : top.outputs)
            for (const auto& n : bus(p.name, p.width)) scope[n] = n;

        expand(top, top.name, scope, 0);

        for (const auto& p : top.outputs) {
            std::vector<NetId> bits;
            for (const auto& n : bus(p.name, p.width)) {
                NetId id = b_.net(n);
                b_.add_output(id);
                bits.push_back(id);
            }
            b_.add_word(p.name, std::move(bits));
        }
        return b_.build();
    }

private:
    using Scope = std::unordered_map<std::string, std::string>;

    struct PortView {
        std::string name;
        std::size_t width;
    };

    std::string resolve(const Scope& scope, const std::string& path, const std::string& local) const
    {
        auto it = scope.find(local);
        if (it != scope.end()) return it->second;
        return path + "." + local;
    }

    std::string tie(const std::string& child_path, bool one)
    {
        NetId n = b_.fresh_net(child_path + ".tie");
        b_.add_gate(one ? GateKind::Const1 : GateKind::Const0, {}, n, child_path);
        return b_.net_name(n);
    }

    static const Binding& find_binding(const InstanceDecl& inst, const PortView& port)
    {
        const Binding* found = nullptr;
        for (const auto& bnd : inst.bindings) {
            if (bnd.port != port.name) continue;
            if (found) throw PortMismatch("port '" + port.name + "' of '" + inst.name + "' bound twice");
            found = &bnd;
        }
        if (!found) throw PortMismatch("port '" + port.name + "' of '" + inst.name + "' is unconnected");
        if (found->nets.size() != port.width)
            throw PortMismatch("port '" + port.name + "' of '" + inst.name + "' has width " +
                               std::to_string(port.width) + " but is connected to " +
                               std::to_string(found->nets.size()) + " nets");
        return *found;
    }

    static void check_names(const InstanceDecl& inst, const std::vector<PortView>& ins,
                            const std::vector<PortView>& outs)
    {
        for (const auto& bnd : inst.bindings) {
            bool known = false;
            for (const auto& p : ins) known = known || p.name == bnd.port;
            for (const auto& p : outs) known = known || p.name == bnd.port;
            if (!known) throw PortMismatch("instance '" + inst.name + "' has no port '" + bnd.port + "'");
        }
    }

    std::string bound_input(const std::string& net, const Scope& scope, const std::string& path,
                            const std::string& child_path)
    {
        if (net == kTie0) return tie(child_path, false);
        if (net == kTie1) return tie(child_path, true);
        return resolve(scope, path, net);
    }

    void expand(const CompositeModule& mod, const std::string& path, const Scope& scope, int depth)
    {
        if (depth > 64) throw UnknownModule("instantiation of '" + mod.name + "' recurses without end");
        for (const auto& inst : mod.instances) {
            std::string child_path = path + "." + inst.name;
            if (auto leaf = design_.leaves.find(inst.module); leaf != design_.leaves.end()) {
                expand_leaf(inst, leaf->second, child_path, path, scope);
            } else if (auto comp = design_.composites.find(inst.module); comp != design_.composites.end()) {
                const auto& child = comp->second;
                std::vector<PortView> ins, outs;
                for (const auto& p : child.inputs) ins.push_back({p.name, p.width});
                for (const auto& p : child.outputs) outs.push_back({p.name, p.width});
                check_names(inst, ins, outs);
                Scope inner;
                for (const auto& p : ins) {
                    const auto& bnd = find_binding(inst, p);
                    for (std::size_t i = 0; i < p.width; ++i)
                        inner[bit_name(p.name, i)] = bound_input(bnd.nets[i], scope, path, child_path);
                }
                for (const auto& p : outs) {
                    const auto& bnd = find_binding(inst, p);
                    for (std::size_t i = 0; i < p.width; ++i) {
                        if (bnd.nets[i] == kTie0 || bnd.nets[i] == kTie1)
                            throw PortMismatch("output port '" + p.name + "' of '" + inst.name + "' tied to a constant");
                        inner[bit_name(p.name, i)] = resolve(scope, path, bnd.nets[i]);
                    }
                }
                expand(child, child_path, inner, depth + 1);
            } else {
                throw UnknownModule("module '" + inst.module + "' (instance '" + inst.name + "') is not defined");
            }
        }
    }

    void expand_leaf(const InstanceDecl& inst, const Netlist& leaf, const std::string& child_path,
                     const std::string& path, const Scope& scope)
    {
        auto in_words = leaf.input_words();
        auto out_words = leaf.output_words();
        std::vector<PortView> ins, outs;
        for (const auto& w : in_words) ins.push_back({w.name, w.width()});
        for (const auto& w : out_words) outs.push_back({w.name, w.width()});
        check_names(inst, ins, outs);

        b_.add_instance(child_path, inst.info);
        std::vector<std::string> mapped(leaf.num_nets());
        for (std::size_t wi = 0; wi < in_words.size(); ++wi) {
            const auto& bnd = find_binding(inst, ins[wi]);
            for (std::size_t i = 0; i < in_words[wi].bits.size(); ++i)
                mapped[in_words[wi].bits[i]] = bound_input(bnd.nets[i], scope, path, child_path);
        }
        struct Alias {
            std::string from, to;
        };
        std::vector<Alias> aliases;
        for (std::size_t wi = 0; wi < out_words.size(); ++wi) {
            const auto& bnd = find_binding(inst, outs[wi]);
            for (std::size_t i = 0; i < out_words[wi].bits.size(); ++i) {
                const auto& target = bnd.nets[i];
                if (target == kTie0 || target == kTie1)
                    throw PortMismatch("output port '" + outs[wi].name + "' of '" + inst.name + "' tied to a constant");
                NetId leaf_net = out_words[wi].bits[i];
                std::string flat = resolve(scope, path, target);
                if (mapped[leaf_net].empty())
                    mapped[leaf_net] = flat;
                else
                    aliases.push_back({mapped[leaf_net], flat});
            }
        }
        for (NetId n = 0; n < leaf.num_nets(); ++n)
            if (mapped[n].empty()) mapped[n] = child_path + "." + leaf.net_name(n);

        for (const auto& g : leaf.gates()) {
            std::vector<NetId> in;
            in.reserve(g.inputs.size());
            for (NetId x : g.inputs) in.push_back(b_.net(mapped[x]));
            b_.add_gate(g.kind, std::move(in), b_.net(mapped[g.output]), child_path);
        }
        for (const auto& a : aliases) b_.add_gate(GateKind::Buf, {b_.net(a.from)}, b_.net(a.to), child_path);
    }

    const Design& design_;
    NetlistBuilder b_;
};

}  // namespace

Netlist flatten(const Design& design) { return Flattener(design).run(); }

}  // namespace axt
