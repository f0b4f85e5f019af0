#include "axt/scoap.hpp"

#include <algorithm>

namespace axt {

namespace {

std::uint64_t sat(std::uint64_t x) { return std::min(x, kScoapInf); }
std::uint64_t add(std::uint64_t a, std::uint64_t b) { return sat(a + b); }

struct Cc {
    std::uint64_t c0, c1;
};

Cc and_cc(const std::vector<Cc>& in)
{
    Cc r{kScoapInf, 0};
    for (const auto& c : in) {
        r.c0 = std::min(r.c0, c.c0);
        r.c1 = add(r.c1, c.c1);
    }
    return {add(r.c0, 1), add(r.c1, 1)};
}

Cc or_cc(const std::vector<Cc>& in)
{
    Cc r{0, kScoapInf};
    for (const auto& c : in) {
        r.c0 = add(r.c0, c.c0);
        r.c1 = std::min(r.c1, c.c1);
    }
    return {add(r.c0, 1), add(r.c1, 1)};
}

Cc xor_cc(const std::vector<Cc>& in)
{
    std::uint64_t even = 0, odd = kScoapInf;
    for (const auto& c : in) {
        const std::uint64_t e = std::min(add(even, c.c0), add(odd, c.c1));
        const std::uint64_t o = std::min(add(even, c.c1), add(odd, c.c0));
        even = e;
        odd = o;
    }
    return {add(even, 1), add(odd, 1)};
}

Cc flip(Cc c) { return {c.c1, c.c0}; }

}  // namespace

ScoapReport scoap(const Netlist& netlist)
{
    const auto order = topo_order(netlist);
    const std::size_t nn = netlist.num_nets();
    ScoapReport r;
    r.cc0.assign(nn, 1);
    r.cc1.assign(nn, 1);
    r.co.assign(nn, kScoapInf);
    auto cc = [&](NetId n) { return Cc{r.cc0[n], r.cc1[n]}; };

    for (GateId id : order) {
        const auto& g = netlist.gate(id);
        std::vector<Cc> in;
        for (NetId n : g.inputs) in.push_back(cc(n));
        Cc out{};
        switch (g.kind) {
        case GateKind::And: out = and_cc(in); break;
        case GateKind::Nand: out = flip(and_cc(in)); break;
        case GateKind::Or: out = or_cc(in); break;
        case GateKind::Nor: out = flip(or_cc(in)); break;
        case GateKind::Xor: out = xor_cc(in); break;
        case GateKind::Xnor: out = flip(xor_cc(in)); break;
        case GateKind::Not: out = {add(in[0].c1, 1), add(in[0].c0, 1)}; break;
        case GateKind::Buf: out = {add(in[0].c0, 1), add(in[0].c1, 1)}; break;
        case GateKind::Mux2: {
            const Cc ns{add(in[0].c1, 1), add(in[0].c0, 1)};
            out = or_cc({and_cc({ns, in[1]}), and_cc({in[0], in[2]})});
            break;
        }
        case GateKind::Const0: out = {1, kScoapInf}; break;
        case GateKind::Const1: out = {kScoapInf, 1}; break;
        }
        r.cc0[g.output] = out.c0;
        r.cc1[g.output] = out.c1;
    }

    for (NetId n : netlist.primary_outputs()) r.co[n] = 0;
    auto relax = [&](NetId n, std::uint64_t v) { r.co[n] = std::min(r.co[n], v); };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& g = netlist.gate(*it);
        const std::uint64_t co_out = r.co[g.output];
        const auto& in = g.inputs;
        switch (g.kind) {
        case GateKind::And:
        case GateKind::Nand:
        case GateKind::Or:
        case GateKind::Nor:
        case GateKind::Xor:
        case GateKind::Xnor: {
            const bool is_and = g.kind == GateKind::And || g.kind == GateKind::Nand;
            const bool is_or = g.kind == GateKind::Or || g.kind == GateKind::Nor;
            for (std::size_t i = 0; i < in.size(); ++i) {
                std::uint64_t v = add(co_out, 1);
                for (std::size_t j = 0; j < in.size(); ++j) {
                    if (j == i) continue;
                    const std::uint64_t side =
                        is_and ? r.cc1[in[j]] : is_or ? r.cc0[in[j]] : std::min(r.cc0[in[j]], r.cc1[in[j]]);
                    v = add(v, side);
                }
                relax(in[i], v);
            }
            break;
        }
        case GateKind::Not:
        case GateKind::Buf: relax(in[0], add(co_out, 1)); break;
        case GateKind::Mux2: {
            const NetId s = in[0], a = in[1], b = in[2];
            const Cc ns{add(r.cc1[s], 1), add(r.cc0[s], 1)};
            const Cc t1 = and_cc({ns, cc(a)});
            const Cc t2 = and_cc({cc(s), cc(b)});
            const std::uint64_t co_t1 = add(add(co_out, t2.c0), 1);
            const std::uint64_t co_t2 = add(add(co_out, t1.c0), 1);
            relax(a, add(add(co_t1, ns.c1), 1));
            relax(b, add(add(co_t2, r.cc1[s]), 1));
            const std::uint64_t co_ns = add(add(co_t1, r.cc1[a]), 1);
            relax(s, std::min(add(co_ns, 1), add(add(co_t2, r.cc1[b]), 1)));
            break;
        }
        case GateKind::Const0:
        case GateKind::Const1: break;
        }
    }
    return r;
}

}  // namespace axt
