#include "axt/detect.hpp"

#include "axt/errors.hpp"
#include "axt/justify.hpp"
#include "axt/rng.hpp"

#include <algorithm>
#include <cmath>

namespace axt {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

// Deviation between packed output values, taken word by word so a wide
// upper word does not mask errors in a lower one.
class OutputWords {
public:
    explicit OutputWords(const Netlist& nl)
    {
        const auto& pos = nl.primary_outputs();
        std::vector<bool> covered(pos.size(), false);
        for (const auto& w : nl.output_words()) {
            std::vector<std::size_t> idx;
            for (NetId b : w.bits) {
                auto it = std::find(pos.begin(), pos.end(), b);
                if (it == pos.end()) continue;
                const auto i = static_cast<std::size_t>(it - pos.begin());
                idx.push_back(i);
                covered[i] = true;
            }
            if (!idx.empty()) words_.push_back(std::move(idx));
        }
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < pos.size(); ++i)
            if (!covered[i]) rest.push_back(i);
        if (!rest.empty()) words_.push_back(std::move(rest));
    }

    std::uint64_t deviation(std::uint64_t a, std::uint64_t b) const
    {
        std::uint64_t d = 0;
        for (const auto& w : words_) d = std::max(d, abs_diff(extract(a, w), extract(b, w)));
        return d;
    }

private:
    static std::uint64_t extract(std::uint64_t v, const std::vector<std::size_t>& bits)
    {
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) x |= ((v >> bits[i]) & 1U) << i;
        return x;
    }

    std::vector<std::vector<std::size_t>> words_;
};

// Per-vector majority word across candidates; the lower median when no word
// holds a strict majority.
std::vector<std::uint64_t> reference_outputs(const std::vector<std::vector<std::uint64_t>>& outs)
{
    std::vector<std::uint64_t> ref;
    if (outs.empty()) return ref;
    ref.resize(outs.front().size());
    std::vector<std::uint64_t> col(outs.size());
    for (std::size_t t = 0; t < ref.size(); ++t) {
        for (std::size_t c = 0; c < outs.size(); ++c) col[c] = outs[c][t];
        std::sort(col.begin(), col.end());
        std::uint64_t word = col[(col.size() - 1) / 2];
        for (std::size_t i = 0; i < col.size();) {
            std::size_t j = i;
            while (j < col.size() && col[j] == col[i]) ++j;
            if (2 * (j - i) > col.size()) word = col[i];
            i = j;
        }
        ref[t] = word;
    }
    return ref;
}

void check_signatures(const std::vector<const Netlist*>& nets)
{
    if (nets.empty()) throw EmptySet("no candidate netlists");
    const auto proto = VectorSet::for_netlist(*nets.front());
    const auto n_out = nets.front()->primary_outputs().size();
    for (const Netlist* nl : nets) {
        if (!VectorSet::for_netlist(*nl).same_signature(proto) || nl->primary_outputs().size() != n_out)
            throw SignatureMismatch("candidate netlists differ in their port signature");
    }
    if (n_out > 64) throw SignatureMismatch("outputs wider than 64 bits cannot be compared");
}

bool rare_value(const ActivityReport& act, NetId n, double theta, bool& value)
{
    const double p = act.p1(n);
    if (p < theta) {
        value = true;
        return true;
    }
    if (1.0 - p < theta) {
        value = false;
        return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(Verdict v) { return v == Verdict::Infected ? "infected" : "clean"; }

ErrorRanking rank_by_error(const std::vector<Candidate>& candidates, const StreamConfig& uniform,
                           const StreamConfig& correlated, double quantile)
{
    if (!(quantile > 0.0 && quantile <= 1.0)) throw BadParams("deviation quantile must lie in (0, 1]");
    std::vector<const Netlist*> nets;
    for (const auto& c : candidates) nets.push_back(&c.netlist);
    check_signatures(nets);

    ErrorRanking r;
    r.vectors = generate_stream(candidates.front().netlist, uniform);
    const std::size_t n_uniform = r.vectors.size();
    r.vectors.append(generate_stream(candidates.front().netlist, correlated));

    std::vector<std::vector<std::uint64_t>> outs;
    for (const auto& c : candidates) outs.push_back(Simulator(c.netlist).outputs(r.vectors));
    r.reference = reference_outputs(outs);

    const std::span<const std::uint64_t> med(r.reference);
    const OutputWords words(candidates.front().netlist);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const std::span<const std::uint64_t> o(outs[i]);
        RankEntry e;
        e.id = candidates[i].id;
        e.index = i;
        e.uniform = error_metrics(o.first(n_uniform), med.first(n_uniform));
        e.correlated = error_metrics(o.subspan(n_uniform), med.subspan(n_uniform));
        e.mred = 0.5 * (e.uniform.mred + e.correlated.mred);
        r.max_wce = std::max({r.max_wce, e.uniform.wce, e.correlated.wce});
        std::vector<std::uint64_t> dev(o.size());
        for (std::size_t t = 0; t < o.size(); ++t) dev[t] = words.deviation(o[t], med[t]);
        if (!dev.empty()) {
            const auto k = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(dev.size()))) - 1;
            auto nth = dev.begin() + static_cast<long>(std::min(k, dev.size() - 1));
            std::nth_element(dev.begin(), nth, dev.end());
            r.deviation_quantile = std::max(r.deviation_quantile, *nth);
        }
        r.order.push_back(std::move(e));
    }
    std::stable_sort(r.order.begin(), r.order.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.mred != b.mred) return a.mred < b.mred;
        return a.id < b.id;
    });
    return r;
}

std::vector<Suspect> suspect_instances(const Netlist& netlist, const DelayModel& delay, double clock,
                                       const std::vector<double>& scales, std::size_t n_paths, double window,
                                       const ActivityReport* activity, double theta)
{
    if (scales.empty()) throw BadParams("at least one delay scale is required");
    std::map<std::string, Suspect> by_tag;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        DelayModel m = delay;
        m.scale = delay.scale * scales[s];
        const auto paths = near_critical_paths(netlist, m, clock, n_paths, window);
        for (const auto& [tag, hits] : paths_to_instances(paths, netlist)) {
            auto& sp = by_tag[tag];
            sp.tag = tag;
            sp.hits_per_scale.resize(scales.size(), 0);
            sp.hits_per_scale[s] += hits;
            sp.hits += hits;
        }
    }
    for (auto& [tag, sp] : by_tag)
        sp.all_scales = std::all_of(sp.hits_per_scale.begin(), sp.hits_per_scale.end(), [](auto h) { return h > 0; });
    if (activity) {
        const auto constant = constant_nets(netlist);
        for (auto& [tag, sp] : by_tag) {
            for (GateId g : netlist.gates_with_tag(tag)) {
                const NetId n = netlist.gate(g).output;
                bool v = false;
                if (constant[n] < 0 && rare_value(*activity, n, theta, v)) {
                    sp.rare = true;
                    break;
                }
            }
        }
    }
    std::vector<Suspect> out;
    for (auto& [tag, sp] : by_tag) {
        sp.score = static_cast<double>(sp.hits) * (sp.rare ? 2.0 : 1.0);
        out.push_back(std::move(sp));
    }
    std::stable_sort(out.begin(), out.end(), [](const Suspect& a, const Suspect& b) { return a.score > b.score; });
    return out;
}

ResilienceResult resilience_test(const Netlist& netlist, const std::string& tag, std::size_t budget_vectors,
                                 const ResilienceContext& ctx)
{
    if (!netlist.instances().count(tag)) throw UnknownInstance("no instance '" + tag + "'");
    if (budget_vectors == 0) throw BadParams("resilience test needs a positive vector budget");
    std::vector<const Netlist*> population = ctx.population;
    if (std::find(population.begin(), population.end(), &netlist) == population.end())
        population.push_back(&netlist);
    check_signatures(population);

    const Simulator sim(netlist);
    const auto support = word_support(netlist);
    const auto gates = netlist.gates_with_tag(tag);
    std::uint64_t cone = 0;
    for (GateId g : gates) cone |= support[netlist.gate(g).output];

    VectorSet vs = VectorSet::for_netlist(netlist);
    const auto& widths = vs.widths();
    Rng rng(ctx.seed ^ fnv1a(tag));
    std::vector<std::uint64_t> row(vs.num_words());

    // Stress vectors: saturate the low (even) or high (odd) half of every
    // word feeding the instance, the rest random.
    for (std::size_t i = 0; i < budget_vectors; ++i) {
        for (std::size_t w = 0; w < row.size(); ++w) {
            const int width = widths[w];
            row[w] = rng.bits(width);
            if (!(cone >> w & 1U)) continue;
            const int lo = (width + 1) / 2;
            const std::uint64_t full = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
            const std::uint64_t low = (std::uint64_t{1} << lo) - 1;
            row[w] |= (i % 2 == 0) ? low : (full & ~low);
        }
        vs.push_back(row);
    }

    // Rare-value replay: drive the instance's rarest internal values, never
    // seen ones first.
    ResilienceResult res;
    if (ctx.profile && ctx.replay_targets > 0) {
        const Traces traces = sim.run(*ctx.profile);
        const ActivityReport act = activity_profile(traces);
        const auto constant = constant_nets(netlist);
        struct Target {
            Literal lit;
            std::uint64_t seen;
        };
        std::vector<Target> targets;
        for (GateId g : gates) {
            const NetId n = netlist.gate(g).output;
            bool v = false;
            if (constant[n] >= 0 || !rare_value(act, n, ctx.theta, v)) continue;
            targets.push_back({{n, v}, v ? act.ones[n] : act.total_cycles - act.ones[n]});
        }
        std::stable_sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) {
            if (a.seen != b.seen) return a.seen < b.seen;
            return a.lit.net > b.lit.net;  // later nets sit deeper in the instance
        });
        std::vector<std::vector<Literal>> tried;
        std::size_t used = 0;
        for (const auto& t : targets) {
            if (used == ctx.replay_targets) break;
            auto lits = expand_literal(netlist, t.lit, tag);
            if (!lits || std::find(tried.begin(), tried.end(), *lits) != tried.end()) continue;
            tried.push_back(*lits);
            ++used;
            JustifyConfig jc{ctx.replay_budget, ctx.seed ^ fnv1a(netlist.net_name(t.lit.net)), 20};
            if (auto w = justify(sim, *ctx.profile, traces, *lits, jc)) {
                vs.push_back(*w);
                ++res.replays;
            }
        }
    }

    std::vector<std::vector<std::uint64_t>> outs;
    std::size_t self = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (population[i] == &netlist) self = i;
        outs.push_back(Simulator(*population[i]).outputs(vs));
    }
    const auto ref = reference_outputs(outs);
    const OutputWords words(netlist);
    res.vectors = vs.size();
    for (std::size_t t = 0; t < vs.size(); ++t)
        if (static_cast<double>(words.deviation(outs[self][t], ref[t])) > ctx.tol) ++res.deviations;
    res.score = 1.0 - static_cast<double>(res.deviations) / static_cast<double>(res.vectors);
    return res;
}

DetectionReport classify(const std::vector<Candidate>& candidates, const DetectConfig& cfg)
{
    if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0)) throw BadThreshold("suspicion threshold must lie in (0, 1]");
    if (!(cfg.theta > 0.0 && cfg.theta < 0.5)) throw BadThreshold("theta must lie in (0, 0.5)");
    const StreamConfig uni{cfg.n_vectors, cfg.seed, StreamMode::Uniform, 0.0};
    const StreamConfig cor{cfg.n_vectors, cfg.seed + 1, StreamMode::Correlated, cfg.rho};
    const ErrorRanking ranking = rank_by_error(candidates, uni, cor, cfg.tol_quantile);

    ResilienceContext ctx;
    for (const auto& c : candidates) ctx.population.push_back(&c.netlist);
    ctx.tol = cfg.tol_factor * static_cast<double>(ranking.deviation_quantile);
    ctx.profile = &ranking.vectors;
    ctx.theta = cfg.theta;
    ctx.replay_targets = cfg.replay_targets;
    ctx.replay_budget = cfg.replay_budget;
    ctx.seed = cfg.seed;

    DetectionReport report;
    report.netlists.resize(candidates.size());
    for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
        const auto& e = ranking.order[pos];
        report.netlists[e.index].error_rank = pos + 1;
        report.netlists[e.index].mred = e.mred;
    }

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Netlist& nl = candidates[i].netlist;
        auto& nv = report.netlists[i];
        nv.id = candidates[i].id;
        const ActivityReport act = activity_profile(Simulator(nl), ranking.vectors);
        const auto constant = constant_nets(nl);
        const auto suspects =
            suspect_instances(nl, candidates[i].delay.value_or(cfg.delay), cfg.clock, cfg.scales, cfg.n_paths, cfg.window, &act, cfg.theta);
        std::map<std::string, const Suspect*> by_tag;
        for (const auto& s : suspects) by_tag[s.tag] = &s;

        double max_raw = 0.0;
        for (const auto& [tag, info] : nl.instances()) {
            InstanceVerdict iv;
            iv.tag = tag;
            auto it = by_tag.find(tag);
            if (it != by_tag.end()) {
                iv.hits = it->second->hits;
                iv.rare = it->second->rare;
            }
            if (iv.hits > 0) {
                if (info.kind == InstanceKind::Deterministic) {
                    // No approximation to stress: the share of non-constant
                    // rare nets stands in for failed resilience.
                    std::size_t rare = 0, total = 0;
                    for (GateId g : nl.gates_with_tag(tag)) {
                        const NetId n = nl.gate(g).output;
                        bool v = false;
                        ++total;
                        if (constant[n] < 0 && rare_value(act, n, cfg.theta, v)) ++rare;
                    }
                    iv.evidence = total ? static_cast<double>(rare) / static_cast<double>(total) : 0.0;
                } else {
                    iv.evidence = 1.0 - resilience_test(nl, tag, cfg.stress, ctx).score;
                }
            }
            iv.raw = static_cast<double>(iv.hits) * iv.evidence * (iv.rare ? 2.0 : 1.0);
            max_raw = std::max(max_raw, iv.raw);
            nv.instances.push_back(std::move(iv));
        }
        for (auto& iv : nv.instances) {
            iv.suspicion = max_raw > 0.0 ? iv.raw / max_raw : 0.0;
            iv.flagged = iv.raw > 0.0 && iv.suspicion >= cfg.threshold;
            if (iv.flagged) nv.verdict = Verdict::Infected;
        }
    }
    return report;
}

Metrics score(const DetectionReport& report, const GroundTruth& truth)
{
    Metrics m;
    std::size_t seen = 0;
    for (const auto& nv : report.netlists) {
        auto t = truth.find(nv.id);
        if (t == truth.end()) throw LabelMismatch("no labels for netlist '" + nv.id + "'");
        ++seen;
        if (t->second.size() != nv.instances.size()) throw LabelMismatch("instance sets differ for '" + nv.id + "'");
        for (const auto& iv : nv.instances) {
            auto l = t->second.find(iv.tag);
            if (l == t->second.end()) throw LabelMismatch("no label for instance '" + iv.tag + "'");
            if (l->second)
                (iv.flagged ? m.tp : m.fn)++;
            else
                (iv.flagged ? m.fp : m.tn)++;
        }
    }
    if (seen != truth.size()) throw LabelMismatch("labels name netlists absent from the report");
    const double n = static_cast<double>(m.tp + m.fp + m.tn + m.fn);
    m.accuracy = n > 0 ? static_cast<double>(m.tp + m.tn) / n : 0.0;
    m.fpr = (m.fp + m.tn) ? static_cast<double>(m.fp) / static_cast<double>(m.fp + m.tn) : 0.0;
    if (m.fn + m.tp) m.fnr = static_cast<double>(m.fn) / static_cast<double>(m.fn + m.tp);
    return m;
}

}  // namespace axt
