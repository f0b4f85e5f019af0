#include "axt/attack.hpp"

#include "axt/errors.hpp"
#include "axt/justify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace axt {

ModuleSpec characterize(const ArchParams& params, const StreamConfig& stream, double theta)
{
    validate(params);
    const Netlist nl = gen_module(params);
    const Netlist exact = gen_module(ArchParams{params.op, ArchKind::Exact, params.width, 0, false});
    const VectorSet vs = generate_stream(nl, stream);
    const Traces tr = simulate(nl, vs);
    const ActivityReport act = activity_profile(tr);
    const PowerProxy base = power_proxy(exact, activity_profile(simulate(exact, vs)));
    const ScoapReport sc = scoap(nl);

    ModuleSpec spec;
    spec.params = params;
    spec.stream = stream;
    spec.e_norm = error_profile(nl, params, vs).mred;
    spec.p_norm = power_proxy(nl, act, base).ratio.value_or(1.0);
    // Only rare values that actually occurred can serve as trigger literals.
    for (const auto& r : rare_nets(act, theta)) {
        const std::uint64_t seen = r.value ? act.ones[r.net] : act.total_cycles - act.ones[r.net];
        if (seen == 0) continue;
        ++spec.rare_count;
        const std::uint64_t cc1 = sc.cc1[r.net];
        if (cc1 < kScoapInf) spec.scoap_max_cc1 = std::max(spec.scoap_max_cc1, cc1);
    }
    spec.r_norm = static_cast<double>(spec.rare_count) / static_cast<double>(nl.num_nets());
    return spec;
}

double attack_score(const ModuleSpec& spec, const CostWeights& w)
{
    return w.w_ap * (spec.e_norm + (1.0 - spec.p_norm)) + w.w_r * spec.r_norm;
}

void BudgetConstraints::validate() const
{
    if (!(delta_e > 0.0) || !(delta_p > 0.0)) throw BadParams("budget slacks delta_e and delta_p must be positive");
    if (e_prime < 0.0 || p_prime < 0.0) throw BadParams("budget caps must be non-negative");
}

BudgetCheck check_budget(const std::vector<ModuleSpec>& selected, double e_composed, double p_composed,
                         const BudgetConstraints& budget, const std::optional<StreamConfig>& composition)
{
    budget.validate();
    double sum_e = 0.0, sum_p = 0.0;
    for (const auto& s : selected) {
        if (composition) {
            const auto& a = s.stream;
            const auto& b = *composition;
            if (a.n_vectors != b.n_vectors || a.mode != b.mode || a.rho != b.rho || a.seed != b.seed)
                throw UnitMismatch("module '" + describe(s.params) + "' was characterized on a different stream");
        }
        sum_e += s.e_norm;
        sum_p += s.p_norm;
    }
    BudgetCheck c;
    c.error_margin = budget.delta_e - (e_composed - sum_e);
    c.power_margin = budget.delta_p - (p_composed - sum_p);
    c.error_ok = e_composed - sum_e < budget.delta_e;
    c.power_ok = p_composed - sum_p < budget.delta_p;
    c.pass = c.error_ok && c.power_ok;
    return c;
}

std::string_view to_string(PayloadKind kind) { return kind == PayloadKind::Leak ? "leak" : "corrupt"; }

std::optional<PayloadKind> parse_payload_kind(std::string_view text)
{
    if (text == "leak") return PayloadKind::Leak;
    if (text == "corrupt") return PayloadKind::Corrupt;
    return std::nullopt;
}

namespace {

struct Candidate {
    Literal lit;
    std::string tag;
    double score;
    std::uint64_t seen;  // cycles showing the rare value
};

std::vector<NetId> default_secret(const Netlist& nl)
{
    std::vector<NetId> bits;
    for (const auto& [tag, info] : nl.instances()) {
        if (info.kind != InstanceKind::Deterministic) continue;
        for (GateId g : nl.gates_with_tag(tag)) bits.push_back(nl.gate(g).output);
    }
    return bits;
}

}  // namespace

InfectedDesign insert_trojan(const Netlist& netlist, const VectorSet& profile, const ActivityReport& activity,
                             const ScoapReport& testability, const TrojanConfig& cfg)
{
    if (cfg.q == 0) throw BadParams("trigger arity q must be positive");
    const auto rare = rare_nets(activity, cfg.theta);
    const TimingReport timing = sta(netlist, cfg.delay, cfg.clock);
    const auto support = word_support(netlist);

    // Delay added behind a literal: optional inverter, AND tree, payload gate.
    const auto levels = static_cast<double>(std::bit_width(cfg.q - 1));
    const double payload_delay = cfg.delay.of(cfg.payload == PayloadKind::Leak ? GateKind::Mux2 : GateKind::Xor);

    std::vector<Candidate> cands;
    for (const auto& r : rare) {
        auto d = netlist.driver(r.net);
        if (!d) continue;
        const auto& tag = netlist.gate(*d).tag;
        auto inst = netlist.instances().find(tag);
        if (inst == netlist.instances().end() || inst->second.kind != InstanceKind::Approximate) continue;
        const std::uint64_t seen = r.value ? activity.ones[r.net] : activity.total_cycles - activity.ones[r.net];
        if (seen == 0) continue;
        if (testability.cc0[r.net] >= cfg.scoap_ceiling || testability.cc1[r.net] >= cfg.scoap_ceiling) continue;
        const double extra = (r.value ? 0.0 : cfg.delay.of(GateKind::Not)) + levels * cfg.delay.of(GateKind::And) +
                             payload_delay;
        if (timing.arrival[r.net] + extra > cfg.clock + 1e-9) continue;
        auto sc = cfg.instance_scores.find(tag);
        const double score = sc == cfg.instance_scores.end() ? -1e300 : sc->second;
        cands.push_back({{r.net, r.value}, tag, score, seen});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.seen != b.seen) return a.seen < b.seen;
        return a.lit.net < b.lit.net;
    });

    // Prefer literals over disjoint input words so their rare values stay
    // independent; fill up with overlapping ones only if necessary.
    std::vector<Candidate> chosen;
    std::uint64_t used = 0;
    auto taken = [&](const Candidate& c) {
        return std::any_of(chosen.begin(), chosen.end(), [&](const Candidate& x) { return x.lit.net == c.lit.net; });
    };
    for (const auto& c : cands) {
        if (chosen.size() == cfg.q) break;
        if (support[c.lit.net] & used) continue;
        chosen.push_back(c);
        used |= support[c.lit.net];
    }
    const Simulator clean_sim(netlist);
    const Traces traces = clean_sim.run(profile);
    // Overlapping literals. The short profile cannot tell a near-duplicate of a
    // chosen literal from an independent one, so candidates are ranked on a
    // uniform screening stream by redundancy: the largest share of any chosen
    // literal's firings they fire with. The least redundant one whose
    // conjunction with the chosen literals can be justified is taken.
    std::optional<std::vector<std::uint64_t>> witness;
    if (cands.size() < cfg.q)
        throw NoRareNets("only " + std::to_string(cands.size()) + " usable rare nets at theta " +
                         std::to_string(cfg.theta) + ", need " + std::to_string(cfg.q));
    if (chosen.size() < cfg.q) {
        const Traces screen = clean_sim.run(generate_stream(
            netlist, {std::max<std::size_t>(cfg.screen_vectors, 1), cfg.seed ^ 0x5c4ee11ULL, StreamMode::Uniform, 0.0}));
        auto fired = [&](const std::vector<Literal>& ls) {
            std::uint64_t count = 0;
            for (std::size_t b = 0; b < screen.n_blocks(); ++b) {
                std::uint64_t m = screen.lane_mask(b);
                for (const auto& l : ls) m &= l.value ? screen.block(l.net, b) : ~screen.block(l.net, b);
                count += static_cast<std::uint64_t>(std::popcount(m));
            }
            return count;
        };
        const std::size_t probe = std::min<std::size_t>(cfg.witness_budget, 16384);
        while (chosen.size() < cfg.q) {
            std::vector<std::pair<double, std::size_t>> order;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                if (taken(cands[i])) continue;
                double r = 0.0;
                for (const auto& x : chosen)
                    r = std::max(r, static_cast<double>(fired({cands[i].lit, x.lit})) /
                                        static_cast<double>(std::max<std::uint64_t>(1, fired({x.lit}))));
                order.emplace_back(r, i);
            }
            std::stable_sort(order.begin(), order.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            bool added = false;
            for (const auto& [r, i] : order) {
                std::vector<Literal> ls;
                for (const auto& c : chosen) ls.push_back(c.lit);
                ls.push_back(cands[i].lit);
                auto w = justify(clean_sim, profile, traces, ls, JustifyConfig{probe, cfg.seed + chosen.size(), 20});
                if (!w) continue;
                chosen.push_back(cands[i]);
                witness = std::move(w);
                added = true;
                break;
            }
            if (!added) break;
        }
        if (chosen.size() < cfg.q)
            throw NoWitness("no satisfiable set of " + std::to_string(cfg.q) + " trigger literals");
    }
    std::vector<Literal> lits;
    for (const auto& c : chosen) lits.push_back(c.lit);
    if (!witness) witness = justify(clean_sim, profile, traces, lits, JustifyConfig{cfg.witness_budget, cfg.seed, 20});
    if (!witness) throw NoWitness("no input satisfies all " + std::to_string(cfg.q) + " trigger literals");

    // All Trojan logic carries the host's tag so the instance table is unchanged.
    const std::string host = chosen.front().tag;
    const std::string stem = host + ".n";
    NetlistBuilder b(netlist);
    std::vector<NetId> terms;
    for (const auto& l : lits) {
        if (l.value) {
            terms.push_back(l.net);
            continue;
        }
        NetId inv = b.fresh_net(stem);
        b.add_gate(GateKind::Not, {l.net}, inv, host);
        terms.push_back(inv);
    }
    while (terms.size() > 1) {
        std::vector<NetId> next;
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
            NetId o = b.fresh_net(stem);
            b.add_gate(GateKind::And, {terms[i], terms[i + 1]}, o, host);
            next.push_back(o);
        }
        if (terms.size() % 2) next.push_back(terms.back());
        terms = std::move(next);
    }
    NetId root = terms.front();
    if (lits.size() == 1 && lits.front().value) {
        // q = 1: give the trigger its own net so it is identifiable.
        NetId o = b.fresh_net(stem);
        b.add_gate(GateKind::Buf, {root}, o, host);
        root = o;
    }

    HTInstance ht;
    ht.q = cfg.q;
    ht.payload = cfg.payload;
    ht.host_instances = {host};
    for (const auto& l : lits) ht.trigger.push_back({netlist.net_name(l.net), l.value});

    const auto& pos = netlist.primary_outputs();
    std::vector<NetId> secret;
    for (const auto& name : cfg.secret_nets) {
        auto n = netlist.find_net(name);
        if (!n) throw BadParams("secret net '" + name + "' not found");
        secret.push_back(*n);
    }
    if (cfg.payload == PayloadKind::Leak) {
        if (secret.empty()) secret = default_secret(netlist);
        if (secret.empty()) throw BadParams("LEAK payload needs secret nets");
        const std::size_t n = std::min(secret.size(), pos.size());
        for (std::size_t i = 0; i < n; ++i) {
            NetId orig = b.detach_driver(pos[i], stem);
            b.add_gate(GateKind::Mux2, {root, orig, secret[i]}, pos[i], host);
        }
        for (const auto& w : netlist.output_words()) ht.payload_target += (ht.payload_target.empty() ? "" : ",") + w.name;
    } else {
        NetId target = pos.back();
        if (cfg.corrupt_output) {
            auto n = netlist.find_net(*cfg.corrupt_output);
            if (!n || !netlist.is_output(*n)) throw BadParams("corrupt target must be a primary output");
            target = *n;
        }
        NetId orig = b.detach_driver(target, stem);
        b.add_gate(GateKind::Xor, {orig, root}, target, host);
        ht.payload_target = netlist.net_name(target);
    }
    Netlist infected = b.build();
    ht.trigger_net = infected.net_name(root);

    const double slack = sta(infected, cfg.delay, cfg.clock).min_slack();
    if (slack < -1e-9) throw WouldViolateTiming("Trojan logic leaves min slack " + std::to_string(slack));

    // Fail closed: the witness must fire the trigger and the payload.
    ht.witness = *witness;
    for (const auto& w : infected.input_words()) ht.witness_words.push_back(w.name);
    const VectorSet ws = witness_stream(infected, ht);
    const Traces wt = simulate(infected, ws);
    bool fired = wt.value(root, 0);
    for (const auto& l : lits) fired = fired && wt.value(*infected.find_net(netlist.net_name(l.net)), 0) == l.value;
    if (cfg.payload == PayloadKind::Leak) {
        const std::size_t n = std::min(secret.size(), pos.size());
        for (std::size_t i = 0; i < n; ++i)
            fired = fired && wt.value(pos[i], 0) == wt.value(*infected.find_net(netlist.net_name(secret[i])), 0);
    } else {
        fired = fired && Simulator(netlist).outputs(ws)[0] != Simulator(infected).outputs(ws)[0];
    }
    if (!fired) throw NoWitness("witness does not fire the payload");
    return {std::move(infected), std::move(ht)};
}

VectorSet witness_stream(const Netlist& netlist, const HTInstance& ht)
{
    VectorSet vs = VectorSet::for_netlist(netlist);
    if (vs.names() != ht.witness_words) throw StreamMismatch("witness words do not match the netlist inputs");
    vs.push_back(ht.witness);
    return vs;
}

StealthReport verify_stealth(const Netlist& clean, const Netlist& infected, const HTInstance& ht,
                             const VectorSet& stream, const ReferenceFn& reference, const DelayModel& delay,
                             double clock)
{
    const Simulator cs(clean), is(infected);
    std::vector<std::uint64_t> ref(stream.size());
    for (std::size_t t = 0; t < stream.size(); ++t) ref[t] = reference(stream.row(t));
    const auto e_clean = error_metrics(cs.outputs(stream), ref);
    const auto e_inf = error_metrics(is.outputs(stream), ref);
    const auto a_clean = activity_profile(cs, stream);
    const auto a_inf = activity_profile(is, stream);
    const auto p_clean = power_proxy(clean, a_clean);
    const auto p_inf = power_proxy(infected, a_inf, p_clean);

    StealthReport r;
    r.error_delta = e_inf.mred - e_clean.mred;
    r.power_delta_fraction = p_inf.ratio.value_or(1.0) - 1.0;
    if (auto root = infected.find_net(ht.trigger_net)) {
        r.trigger_count = a_inf.ones[*root];
        r.trigger_rate = stream.size() ? static_cast<double>(r.trigger_count) / static_cast<double>(stream.size()) : 0.0;
    }
    r.min_slack = sta(infected, delay, clock).min_slack();
    return r;
}

}  // namespace axt
