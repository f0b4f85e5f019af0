#include "axt/justify.hpp"

#include "axt/errors.hpp"
#include "axt/rng.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace axt {

std::vector<std::uint64_t> word_support(const Netlist& netlist)
{
    const auto words = netlist.input_words();
    if (words.size() > 64) throw BadParams("word support is limited to 64 input words");
    std::vector<std::uint64_t> sup(netlist.num_nets(), 0);
    for (std::size_t w = 0; w < words.size(); ++w)
        for (NetId n : words[w].bits) sup[n] |= std::uint64_t{1} << w;
    for (GateId id : topo_order(netlist)) {
        const auto& g = netlist.gate(id);
        std::uint64_t s = 0;
        for (NetId n : g.inputs) s |= sup[n];
        sup[g.output] = s;
    }
    return sup;
}

std::vector<int> constant_nets(const Netlist& netlist)
{
    std::vector<int> v(netlist.num_nets(), -1);
    for (GateId id : topo_order(netlist)) {
        const auto& g = netlist.gate(id);
        std::vector<int> in;
        for (NetId n : g.inputs) in.push_back(v[n]);
        auto count = [&](int x) { return std::count(in.begin(), in.end(), x); };
        const auto n_in = static_cast<long>(in.size());
        int r = -1;
        switch (g.kind) {
        case GateKind::And:
        case GateKind::Nand:
            r = count(0) ? 0 : (count(1) == n_in ? 1 : -1);
            if (g.kind == GateKind::Nand && r >= 0) r = 1 - r;
            break;
        case GateKind::Or:
        case GateKind::Nor:
            r = count(1) ? 1 : (count(0) == n_in ? 0 : -1);
            if (g.kind == GateKind::Nor && r >= 0) r = 1 - r;
            break;
        case GateKind::Xor:
        case GateKind::Xnor:
            r = count(-1) ? -1 : static_cast<int>(count(1) % 2);
            if (g.kind == GateKind::Xnor && r >= 0) r = 1 - r;
            break;
        case GateKind::Not: r = in[0] < 0 ? -1 : 1 - in[0]; break;
        case GateKind::Buf: r = in[0]; break;
        case GateKind::Mux2:
            if (in[0] == 0) r = in[1];
            else if (in[0] == 1) r = in[2];
            else r = (in[1] == in[2]) ? in[1] : -1;
            break;
        case GateKind::Const0: r = 0; break;
        case GateKind::Const1: r = 1; break;
        }
        v[g.output] = r;
    }
    return v;
}

std::optional<std::vector<Literal>> expand_literal(const Netlist& netlist, Literal target, const std::string& tag)
{
    std::map<NetId, bool> out;
    std::vector<Literal> stack{target};
    std::map<NetId, bool> seen;
    while (!stack.empty()) {
        Literal l = stack.back();
        stack.pop_back();
        auto it = seen.find(l.net);
        if (it != seen.end()) {
            if (it->second != l.value) return std::nullopt;
            continue;
        }
        seen[l.net] = l.value;
        auto d = netlist.driver(l.net);
        bool forced = false;
        if (d && netlist.gate(*d).tag == tag) {
            const auto& g = netlist.gate(*d);
            std::optional<bool> each;
            switch (g.kind) {
            case GateKind::And: if (l.value) each = true; break;
            case GateKind::Nand: if (!l.value) each = true; break;
            case GateKind::Or: if (!l.value) each = false; break;
            case GateKind::Nor: if (l.value) each = false; break;
            case GateKind::Not: each = !l.value; break;
            case GateKind::Buf: each = l.value; break;
            default: break;
            }
            if (each) {
                forced = true;
                for (NetId n : g.inputs) stack.push_back({n, *each});
            }
        }
        if (!forced) {
            auto [pos, inserted] = out.emplace(l.net, l.value);
            if (!inserted && pos->second != l.value) return std::nullopt;
        }
    }
    std::vector<Literal> lits;
    for (auto [n, v] : out) lits.push_back({n, v});
    return lits;
}

namespace {

class Search {
public:
    Search(const Simulator& sim, const std::vector<Literal>& lits)
        : sim_(sim), lits_(lits), proto_(VectorSet::for_netlist(sim.netlist())), values_(sim.netlist().num_nets())
    {
    }

    // Evaluates up to 64 rows; returns per-row count of satisfied literals.
    std::vector<std::size_t> eval(const std::vector<std::vector<std::uint64_t>>& rows)
    {
        VectorSet vs(proto_.names(), proto_.widths());
        for (const auto& r : rows) vs.push_back(r);
        sim_.eval_block(vs, 0, values_);
        std::vector<std::size_t> sat(rows.size(), 0);
        for (const auto& l : lits_) {
            const std::uint64_t hit = l.value ? values_[l.net] : ~values_[l.net];
            for (std::size_t i = 0; i < rows.size(); ++i) sat[i] += (hit >> i) & 1U;
        }
        return sat;
    }

    const VectorSet& proto() const { return proto_; }

private:
    const Simulator& sim_;
    const std::vector<Literal>& lits_;
    VectorSet proto_;
    std::vector<std::uint64_t> values_;
};

std::uint64_t word_mask(int width) { return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1; }

}  // namespace

std::optional<std::vector<std::uint64_t>> justify(const Simulator& sim, const VectorSet& seeds, const Traces& traces,
                                                  const std::vector<Literal>& literals, const JustifyConfig& config)
{
    const Netlist& nl = sim.netlist();
    Search search(sim, literals);
    const auto& widths = search.proto().widths();
    const std::size_t n_words = widths.size();
    const std::size_t want = literals.size();
    int total_bits = 0;
    for (int w : widths) total_bits += w;

    if (static_cast<std::size_t>(total_bits) <= config.exhaustive_bits) {
        const std::uint64_t space = std::uint64_t{1} << total_bits;
        for (std::uint64_t base = 0; base < space; base += 64) {
            std::vector<std::vector<std::uint64_t>> rows;
            for (std::uint64_t t = base; t < std::min(space, base + 64); ++t) {
                std::vector<std::uint64_t> r(n_words);
                int shift = 0;
                for (std::size_t w = 0; w < n_words; ++w) {
                    r[w] = (t >> shift) & word_mask(widths[w]);
                    shift += widths[w];
                }
                rows.push_back(std::move(r));
            }
            auto sat = search.eval(rows);
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (sat[i] == want) return rows[i];
        }
        return std::nullopt;
    }

    if (seeds.size() > 0) sim.check_signature(seeds);
    // A cycle of the seed trace that already realizes everything.
    if (traces.n_vectors() == seeds.size() && seeds.size() > 0) {
        for (std::size_t b = 0; b < traces.n_blocks(); ++b) {
            std::uint64_t all = traces.lane_mask(b);
            for (const auto& l : literals) all &= l.value ? traces.block(l.net, b) : ~traces.block(l.net, b);
            if (all) {
                auto row = seeds.row(b * 64 + static_cast<std::size_t>(std::countr_zero(all)));
                return std::vector<std::uint64_t>(row.begin(), row.end());
            }
        }
    }

    const auto support = word_support(nl);
    std::vector<std::vector<std::size_t>> realized(literals.size());
    if (traces.n_vectors() == seeds.size()) {
        for (std::size_t i = 0; i < literals.size(); ++i)
            for (std::size_t t = 0; t < seeds.size() && realized[i].size() < 256; ++t)
                if (traces.value(literals[i].net, t) == literals[i].value) realized[i].push_back(t);
    }

    Rng rng(config.seed);
    auto random_row = [&] {
        std::vector<std::uint64_t> r(n_words);
        for (std::size_t w = 0; w < n_words; ++w) r[w] = rng.bits(widths[w]);
        return r;
    };
    auto crossover = [&] {
        std::vector<std::uint64_t> r(n_words);
        for (std::size_t w = 0; w < n_words; ++w) {
            std::vector<std::size_t> owners;
            for (std::size_t i = 0; i < literals.size(); ++i)
                if (((support[literals[i].net] >> w) & 1U) && !realized[i].empty()) owners.push_back(i);
            if (owners.empty()) {
                r[w] = rng.bits(widths[w]);
                continue;
            }
            const auto& cyc = realized[owners[rng.below(owners.size())]];
            r[w] = seeds.value(cyc[rng.below(cyc.size())], w);
        }
        return r;
    };

    std::vector<std::uint64_t> best = random_row();
    std::size_t best_sat = search.eval({best})[0];
    std::size_t spent = 1;
    bool cross_phase = true;
    while (spent < config.budget) {
        std::vector<std::vector<std::uint64_t>> rows;
        const std::size_t batch = std::min<std::size_t>(64, config.budget - spent);
        for (std::size_t i = 0; i < batch; ++i) {
            if (cross_phase) {
                rows.push_back(crossover());
                continue;
            }
            auto r = best;
            const std::size_t flips = 1 + rng.below(3);
            for (std::size_t f = 0; f < flips; ++f) {
                const std::size_t w = rng.below(n_words);
                r[w] ^= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(widths[w]));
            }
            rows.push_back(std::move(r));
        }
        auto sat = search.eval(rows);
        spent += rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (sat[i] == want) return rows[i];
            if (sat[i] >= best_sat) {
                best_sat = sat[i];
                best = rows[i];
            }
        }
        cross_phase = !cross_phase;
    }
    return std::nullopt;
}

}  // namespace axt
