// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "arith_oracle.hpp"
#include "oracles.hpp"

#include "axt/approx.hpp"
#include "axt/attack.hpp"
#include "axt/design.hpp"
#include "axt/detect.hpp"
#include "axt/errors.hpp"
#include "axt/experiment.hpp"
#include "axt/netlist_io.hpp"
#include "axt/profile.hpp"
#include "axt/rng.hpp"
#include "axt/scoap.hpp"
#include "axt/sim.hpp"
#include "axt/sta.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>

using namespace axt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass) detail = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::uint64_t native(OpType op, std::uint64_t a, std::uint64_t b, int w)
{
    switch (op) {
    case OpType::Add: return a + b;
    case OpType::Mul: return a * b;
    case OpType::Sub: return (a - b) & oracle::mask(output_width(OpType::Sub, w));
    default: return 0;
    }
}

const OpType kOps[] = {OpType::Add, OpType::Sub, OpType::Mul};
const ArchKind kArchs[] = {ArchKind::Exact, ArchKind::Loa, ArchKind::Trunc, ArchKind::Block22};

// 1. Every generator at k = 0 equals exact_oracle (and native arithmetic)
// exhaustively for widths up to 8.
Outcome oracle_equivalence()
{
    Outcome o;
    double worst = 0.0;
    std::size_t archs = 0, vectors = 0;
    for (OpType op : kOps)
        for (ArchKind arch : kArchs)
            for (bool ac : {false, true}) {
                if (ac && arch != ArchKind::Loa) continue;
                const auto t0 = std::chrono::steady_clock::now();
                bool any = false;
                for (int w = 1; w <= 8; ++w) {
                    const ArchParams p{op, arch, w, 0, ac};
                    try {
                        validate(p);
                    } catch (const BadParams&) {
                        continue;
                    }
                    any = true;
                    const Netlist nl = gen_module(p);
                    const VectorSet vs = exhaustive_stream(nl);
                    const auto out = Simulator(nl).outputs(vs);
                    for (std::size_t t = 0; t < vs.size(); ++t) {
                        const std::uint64_t a = vs.value(t, 0), b = vs.value(t, 1);
                        const std::uint64_t e = exact_oracle(op, a, b, w);
                        if (out[t] != e || e != native(op, a, b, w))
                            o.fail(describe(p) + " mismatch at a=" + std::to_string(a) + " b=" + std::to_string(b));
                    }
                    vectors += vs.size();
                }
                const double s = seconds_since(t0);
                if (!any) continue;
                ++archs;
                worst = std::max(worst, s);
                if (s >= 10.0) o.fail(fmt("architecture took %.2f s", s));
            }
    if (o.pass)
        o.detail = std::to_string(archs) + " op/arch combinations, " + std::to_string(vectors) +
                   " vectors, 0 mismatches, slowest " + fmt("%.3f s", worst);
    return o;
}

// 2. ER/MED/MRED/WCE from the profiler equal a scalar recomputation from the
// word-level arithmetic models on exhaustive streams.
Outcome error_metrics_exact()
{
    Outcome o;
    std::size_t configs = 0;
    for (OpType op : kOps)
        for (ArchKind arch : kArchs)
            for (int w = 2; w <= 8; ++w)
                for (int k = 0; k <= 4; ++k)
                    for (bool ac : {false, true}) {
                        if (ac && arch != ArchKind::Loa) continue;
                        const ArchParams p{op, arch, w, k, ac};
                        try {
                            validate(p);
                        } catch (const BadParams&) {
                            continue;
                        }
                        const Netlist nl = gen_module(p);
                        const VectorSet vs = exhaustive_stream(nl);
                        const ErrorReport r = error_profile(nl, p, vs);
                        std::size_t wrong = 0;
                        double sum_ed = 0.0, sum_red = 0.0;
                        std::uint64_t wce = 0;
                        const std::uint64_t n = std::uint64_t{1} << (2 * w);
                        for (std::uint64_t t = 0; t < n; ++t) {
                            const std::uint64_t a = t & oracle::mask(w), b = t >> w;
                            const std::uint64_t got = oracle::model(p, a, b), want = native(op, a, b, w);
                            const std::uint64_t ed = got > want ? got - want : want - got;
                            if (ed == 0) continue;
                            ++wrong;
                            sum_ed += static_cast<double>(ed);
                            sum_red += static_cast<double>(ed) / static_cast<double>(want == 0 ? 1 : want);
                            wce = std::max(wce, ed);
                        }
                        const double nd = static_cast<double>(n);
                        if (vs.size() != n || r.er != static_cast<double>(wrong) / nd || r.med != sum_ed / nd ||
                            r.mred != sum_red / nd || r.wce != wce)
                            o.fail(describe(p) + " metrics differ from brute force");
                        ++configs;
                    }
    if (o.pass) o.detail = std::to_string(configs) + " configurations, exact equality";
    return o;
}

// 3. Hand-derived SCOAP values.
Outcome scoap_hand()
{
    struct Expect {
        std::string net;
        std::uint64_t cc0, cc1, co;
    };
    struct Circuit {
        std::string name, text;
        std::vector<Expect> expect;
    };
    const std::vector<Circuit> circuits{
        {"and2", "input a\ninput b\ngate g AND y a b\noutput y\n", {{"y", 2, 3, 0}, {"a", 1, 1, 2}}},
        {"or2", "input a\ninput b\ngate g OR y a b\noutput y\n", {{"y", 3, 2, 0}, {"b", 1, 1, 2}}},
        {"nand2", "input a\ninput b\ngate g NAND y a b\noutput y\n", {{"y", 3, 2, 0}, {"a", 1, 1, 2}}},
        {"nor2", "input a\ninput b\ngate g NOR y a b\noutput y\n", {{"y", 2, 3, 0}, {"a", 1, 1, 2}}},
        {"xor2", "input a\ninput b\ngate g XOR y a b\noutput y\n", {{"y", 3, 3, 0}, {"a", 1, 1, 2}}},
        {"not chain 3",
         "input x0\ngate g1 NOT x1 x0\ngate g2 NOT x2 x1\ngate g3 NOT x3 x2\noutput x3\n",
         {{"x3", 4, 4, 0}, {"x2", 3, 3, 1}, {"x1", 2, 2, 2}, {"x0", 1, 1, 3}}},
        {"and3", "input a\ninput b\ninput c\ngate g AND y a b c\noutput y\n", {{"y", 2, 4, 0}, {"c", 1, 1, 3}}},
        {"and-or tree",
         "input a\ninput b\ninput c\ngate g0 AND m a b\ngate g1 OR y m c\noutput y\n",
         {{"m", 2, 3, 2}, {"y", 4, 2, 0}, {"c", 1, 1, 3}, {"a", 1, 1, 4}}},
        {"reconvergent fanout",
         "input a\ngate g0 NOT n1 a\ngate g1 BUF n2 a\ngate g2 AND y n1 n2\noutput y\n",
         {{"n1", 2, 2, 3}, {"n2", 2, 2, 3}, {"y", 3, 5, 0}, {"a", 1, 1, 4}}},
        {"2-bit ripple adder",
         "input a0\ninput a1\ninput b0\ninput b1\n"
         "gate g0 XOR s0 a0 b0\ngate g1 AND c0 a0 b0\ngate g2 XOR t a1 b1\ngate g3 XOR s1 t c0\n"
         "gate g4 AND g a1 b1\ngate g5 AND p t c0\ngate g6 OR c1 g p\noutput s0\noutput s1\noutput c1\n",
         {{"s0", 3, 3, 0}, {"c0", 2, 3, 4}, {"t", 3, 3, 3}, {"s1", 6, 6, 0}, {"g", 2, 3, 4},
          {"p", 3, 7, 3}, {"c1", 6, 4, 0}, {"a0", 1, 1, 2}, {"a1", 1, 1, 5}}},
    };
    Outcome o;
    std::size_t values = 0;
    for (const auto& c : circuits) {
        const Netlist nl = parse_netlist(c.text);
        const auto r = scoap(nl);
        for (const auto& e : c.expect) {
            const NetId n = *nl.find_net(e.net);
            if (r.cc0[n] != e.cc0 || r.cc1[n] != e.cc1 || r.co[n] != e.co)
                o.fail(c.name + ": net " + e.net + " got (" + std::to_string(r.cc0[n]) + "," + std::to_string(r.cc1[n]) +
                       "," + std::to_string(r.co[n]) + ")");
            values += 3;
        }
    }
    if (o.pass) o.detail = std::to_string(circuits.size()) + " circuits, " + std::to_string(values) + " values exact";
    return o;
}

// 4. STA against exhaustive path enumeration on random DAGs.
Outcome sta_dfs()
{
    Outcome o;
    DelayModel m;
    m.set(GateKind::And, 1.25);
    m.set(GateKind::Or, 1.5);
    m.set(GateKind::Xor, 2.0);
    m.set(GateKind::Not, 0.5);
    m.set(GateKind::Mux2, 2.25);
    std::size_t dags = 0, checked_paths = 0;
    for (std::uint64_t seed = 1; dags < 50 && seed < 500; ++seed) {
        const Netlist nl = oracle::random_dag(seed * 7919, 6, 40 + static_cast<int>(seed % 30), 4);
        const auto best = oracle::longest_path_dfs(nl, [&](GateKind k) { return m.of(k); }, 10000);
        if (!best) continue;
        ++dags;
        const double clock = *best + 2.0;
        const auto rep = sta(nl, m, clock);
        if (rep.critical_delay != *best) o.fail("seed " + std::to_string(seed) + ": critical delay differs");

        // Every input-to-output path delay, for the window check.
        std::vector<double> all;
        std::function<void(NetId, double)> walk = [&](NetId n, double d) {
            if (nl.is_output(n)) all.push_back(d);
            // A gate reading the same net twice still forms one path.
            auto readers = nl.readers(n);
            std::sort(readers.begin(), readers.end());
            readers.erase(std::unique(readers.begin(), readers.end()), readers.end());
            for (auto gid : readers) walk(nl.gate(gid).output, d + m.of(nl.gate(gid).kind));
        };
        for (NetId pi : nl.primary_inputs()) walk(pi, 0.0);
        const double window = 3.0;
        std::vector<double> want;
        for (double d : all)
            if (clock - d >= 0.0 && clock - d <= window) want.push_back(clock - d);
        std::sort(want.begin(), want.end());
        const std::size_t n_paths = 25;
        const auto paths = near_critical_paths(nl, m, clock, n_paths, window);
        if (paths.size() != std::min(n_paths, want.size())) o.fail("seed " + std::to_string(seed) + ": path count");
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto& p = paths[i];
            double d = 0.0;
            bool connected = nl.is_input(p.nets.front()) && nl.is_output(p.nets.back()) &&
                             p.gates.size() + 1 == p.nets.size();
            for (std::size_t j = 0; connected && j < p.gates.size(); ++j) {
                const auto& g = nl.gate(p.gates[j]);
                connected = g.output == p.nets[j + 1] &&
                            std::find(g.inputs.begin(), g.inputs.end(), p.nets[j]) != g.inputs.end();
                d += m.of(g.kind);
            }
            if (!connected) o.fail("seed " + std::to_string(seed) + ": disconnected path");
            if (d != p.delay || clock - d != p.slack) o.fail("seed " + std::to_string(seed) + ": path delay differs");
            if (p.slack < 0.0 || p.slack > window) o.fail("seed " + std::to_string(seed) + ": path outside window");
            if (i < want.size() && p.slack != want[i]) o.fail("seed " + std::to_string(seed) + ": not the best paths");
            ++checked_paths;
        }
    }
    if (dags < 50) o.fail("only " + std::to_string(dags) + " DAGs within the path limit");
    if (o.pass)
        o.detail = std::to_string(dags) + " DAGs exact, " + std::to_string(checked_paths) + " window paths verified";
    return o;
}

bool trigger_holds(const Netlist& nl, const HTInstance& ht, const Traces& tr, std::size_t t)
{
    for (const auto& l : ht.trigger)
        if (tr.value(*nl.find_net(l.net), t) != l.value) return false;
    return true;
}

struct Infected {
    std::string label;
    DesignConfig design;
    Netlist clean;
    Netlist infected;
    HTInstance ht;
    DelayModel delay;
};

// The all-exact default FIR infected the way the experiment infects a variant.
Infected infect_exact_fir(std::uint64_t seed)
{
    DesignConfig dc;
    SpecCache cache({1000, derive_seed(seed, "characterize"), StreamMode::Correlated, 0.5}, 0.01);
    Variant v = evaluate_variant(dc, cache, BudgetConstraints{});
    TrojanConfig tc;
    tc.seed = derive_seed(seed, "witness");
    tc.delay = close_timing(v.netlist, tc.clock, 0.92);
    tc.instance_scores = slot_scores(v, CostWeights{});
    const VectorSet profile = generate_stream(v.netlist, {1000, derive_seed(seed, "profile"), StreamMode::Correlated, 0.5});
    auto inf = insert_trojan(v.netlist, profile, activity_profile(Simulator(v.netlist), profile), scoap(v.netlist), tc);
    return {"exact FIR", dc, v.netlist, std::move(inf.netlist), std::move(inf.ht), tc.delay};
}

// Infected variants of a default experiment run.
std::vector<Infected> experiment_infections(std::uint64_t seed)
{
    ExperimentConfig c;
    c.seed = seed;
    c.stealth_vectors = 1000;
    auto r = run_experiment(c);
    std::vector<Infected> out;
    for (std::size_t i = 0; i < r.variants.size(); ++i)
        if (r.trojans[i])
            out.push_back({"seed " + std::to_string(seed) + " " + r.variants[i].id, r.variants[i].config,
                           r.variants[i].netlist, r.candidates[i].netlist, *r.trojans[i], *r.candidates[i].delay});
    return out;
}

// The coefficient words packed LSB first, cut to the output width.
std::uint64_t leaked_coefficients(const DesignConfig& dc, std::size_t out_bits)
{
    std::uint64_t v = 0;
    int shift = 0;
    for (auto c : dc.coeffs) {
        if (shift < 64) v |= c << shift;
        shift += dc.width;
    }
    return out_bits >= 64 ? v : v & oracle::mask(static_cast<int>(out_bits));
}

// 5. Stealth of LEAK Trojans on the width-8, 4-tap FIR.
Outcome stealth(const std::vector<Infected>& designs)
{
    Outcome o;
    double worst_power = -1.0;
    std::size_t checked = 0;
    for (const auto& d : designs) {
        const VectorSet ws = witness_stream(d.clean, d.ht);
        VectorSet vs = VectorSet::for_netlist(d.clean);
        const VectorSet raw = generate_stream(d.clean, {100000, 0xACCE55 + checked, StreamMode::Uniform, 0.0});
        for (std::size_t t = 0; t < raw.size(); ++t) {
            bool witness = true;
            for (std::size_t w = 0; w < ws.num_words() && witness; ++w) witness = raw.value(t, w) == ws.value(0, w);
            if (!witness) vs.push_back(raw.row(t));
        }
        const DesignConfig dc = d.design;
        const auto st = verify_stealth(
            d.clean, d.infected, d.ht, vs, [&dc](std::span<const std::uint64_t> row) { return design_reference(dc, row); },
            d.delay, 10.0);
        const auto a = Simulator(d.clean).outputs(vs), b = Simulator(d.infected).outputs(vs);
        std::size_t differ = 0;
        for (std::size_t t = 0; t < vs.size(); ++t) differ += a[t] != b[t];
        if (st.error_delta != 0.0 || differ != 0)
            o.fail(d.label + ": " + std::to_string(differ) + " output differences off the witness");
        if (st.power_delta_fraction > 0.02) o.fail(d.label + fmt(": power overhead %.4f", st.power_delta_fraction));
        worst_power = std::max(worst_power, st.power_delta_fraction);

        const Traces wt = simulate(d.infected, ws);
        const std::uint64_t y = Simulator(d.infected).outputs(ws)[0];
        const std::uint64_t want = leaked_coefficients(dc, d.infected.primary_outputs().size());
        if (!trigger_holds(d.infected, d.ht, wt, 0) || d.ht.payload != PayloadKind::Leak || y != want)
            o.fail(d.label + ": witness does not leak the coefficients");
        ++checked;
    }
    if (o.pass)
        o.detail = std::to_string(checked) + " infected FIRs: error_delta 0 on 1e5 vectors, max power overhead " +
                   fmt("%.4f", worst_power) + ", witness outputs equal the coefficient bits";
    return o;
}

// 6. Trigger rarity at 1e6 uniform vectors, and fail-closed insertion.
Outcome rarity(const std::vector<Infected>& designs)
{
    Outcome o;
    const double bound = std::pow(0.01, 4) * 10.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto& d = designs[i];
        const VectorSet vs = generate_stream(d.clean, {1000000, 0x5EED + i, StreamMode::Uniform, 0.0});
        const Traces tr = simulate(d.infected, vs);
        std::size_t fired = 0;
        for (std::size_t t = 0; t < vs.size(); ++t) fired += trigger_holds(d.infected, d.ht, tr, t);
        const double rate = static_cast<double>(fired) / 1e6;
        worst = std::max(worst, rate);
        if (rate > bound) o.fail(d.label + fmt(": trigger rate %.3g", rate));
    }

    // Fail-closed: every emitted instance carries a witness that fires.
    std::size_t emitted = 0, refused = 0;
    DesignConfig dc;
    const Netlist nl = build_design(dc);
    const ScoapReport sc = scoap(nl);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        TrojanConfig tc;
        tc.seed = seed;
        tc.payload = seed % 2 ? PayloadKind::Leak : PayloadKind::Corrupt;
        tc.q = 2 + seed % 5;
        tc.witness_budget = seed % 3 == 0 ? 1 : 100000;
        tc.delay = close_timing(nl, tc.clock, 0.92);
        const VectorSet vs = generate_stream(nl, {500 + 100 * (seed % 4), seed, StreamMode::Correlated, 0.3 + 0.1 * (seed % 4)});
        try {
            auto inf = insert_trojan(nl, vs, activity_profile(simulate(nl, vs)), sc, tc);
            const Traces wt = simulate(inf.netlist, witness_stream(inf.netlist, inf.ht));
            if (!trigger_holds(inf.netlist, inf.ht, wt, 0) || !wt.value(*inf.netlist.find_net(inf.ht.trigger_net), 0))
                o.fail("seed " + std::to_string(seed) + ": emitted instance without a firing witness");
            ++emitted;
        } catch (const Error&) {
            ++refused;
        }
    }
    if (o.pass)
        o.detail = fmt("max rate %.3g", worst) + fmt(" <= %.1e over ", bound) + std::to_string(designs.size()) +
                   " designs; fail-closed: " + std::to_string(emitted) + " emitted with firing witness, " +
                   std::to_string(refused) + " refused";
    return o;
}

// 7. Detection quality over seeded FIR experiments.
Outcome detection_quality()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Metrics pooled;
    const std::size_t trials = 60;
    const double fractions[] = {0.3, 0.4, 0.5};
    std::size_t netlists = 0, netlists_ok = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        ExperimentConfig c;
        c.seed = 1000 + i;
        c.infected_fraction = fractions[i % 3];
        c.stealth_vectors = 1000;
        const auto r = run_experiment(c);
        pooled.tp += r.metrics.tp;
        pooled.fp += r.metrics.fp;
        pooled.tn += r.metrics.tn;
        pooled.fn += r.metrics.fn;
        netlists += r.candidates.size();
        netlists_ok += r.netlists_correct;
    }
    const double s = seconds_since(t0);
    const double total = static_cast<double>(pooled.tp + pooled.fp + pooled.tn + pooled.fn);
    const double acc = static_cast<double>(pooled.tp + pooled.tn) / total;
    const double fpr = static_cast<double>(pooled.fp) / static_cast<double>(std::max<std::size_t>(1, pooled.fp + pooled.tn));
    const double fnr = static_cast<double>(pooled.fn) / static_cast<double>(std::max<std::size_t>(1, pooled.fn + pooled.tp));
    if (acc < 0.85) o.fail("accuracy");
    if (fpr > 0.12) o.fail("fpr");
    if (fnr > 0.08) o.fail("fnr");
    if (s > 600.0) o.fail("runtime");
    o.detail = std::to_string(trials) + " trials: accuracy " + fmt("%.4f", acc) + ", fpr " + fmt("%.4f", fpr) + ", fnr " +
               fmt("%.4f", fnr) + " (reference 0.90 / 0.08 / 0.02); tp " + std::to_string(pooled.tp) + " fp " +
               std::to_string(pooled.fp) + " tn " + std::to_string(pooled.tn) + " fn " + std::to_string(pooled.fn) +
               "; netlist accuracy " + fmt("%.4f", static_cast<double>(netlists_ok) / static_cast<double>(netlists)) +
               fmt("; %.1f s", s) + (o.pass ? "" : " [failed: " + o.detail + "]");
    return o;
}

// 8. Clean exact-architecture candidate sets raise no flags.
Outcome zero_fp()
{
    Outcome o;
    std::size_t clean_trials = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        DesignConfig dc;
        if (seed % 2 == 0) {
            dc.design = DesignKind::FftButterfly;
            dc.twiddle = 1 + rng.below(255);
        } else {
            for (auto& c : dc.coeffs) c = 1 + rng.below(255);
        }
        const Netlist nl = build_design(dc);
        const DelayModel delay = close_timing(nl, 10.0, 0.92);
        std::vector<Candidate> cands;
        for (int i = 0; i < 5; ++i) cands.push_back({"c" + std::to_string(i), nl, delay});
        DetectConfig cfg;
        cfg.seed = seed;
        const auto rep = classify(cands, cfg);
        std::size_t flags = 0;
        for (const auto& nv : rep.netlists)
            for (const auto& iv : nv.instances) flags += iv.flagged;
        if (flags) o.fail("seed " + std::to_string(seed) + ": " + std::to_string(flags) + " flags");
        else ++clean_trials;
    }
    o.detail = std::to_string(clean_trials) + "/20 trials without flags (FIR and FFT, 5 candidates each)" +
               (o.pass ? "" : " [" + o.detail + "]");
    return o;
}

// 9. Identical config and seed give byte-identical artifacts.
Outcome determinism()
{
    Outcome o;
    const fs::path base = fs::temp_directory_path() / "axt_acceptance";
    fs::remove_all(base);
    std::vector<fs::path> dirs{base / "a", base / "b"};
    for (const auto& d : dirs) {
        ExperimentConfig c;
        c.seed = 42;
        c.out_dir = d.string();
        run_experiment(c);
    }
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(dirs[0])) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), dirs[0]);
        const auto other = dirs[1] / rel;
        if (!fs::exists(other) || read_text_file(e.path().string()) != read_text_file(other.string()))
            o.fail(rel.string() + " differs");
        ++files;
    }
    std::size_t files_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(dirs[1])) files_b += e.is_regular_file();
    if (files != files_b) o.fail("file sets differ");
    if (files == 0) o.fail("no artifacts");
    fs::remove_all(base);
    if (o.pass) o.detail = std::to_string(files) + " artifacts byte-identical across two runs";
    return o;
}

// 10. check_budget against the literal inequalities, and monotonicity.
Outcome budget_logic()
{
    Outcome o;
    Rng rng(2024);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.unit(); };
    std::size_t passes = 0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<ModuleSpec> specs(1 + rng.below(6));
        double se = 0.0, sp = 0.0;
        for (auto& s : specs) {
            s.e_norm = uni(0.0, 0.05);
            s.p_norm = uni(0.3, 1.0);
            se += s.e_norm;
            sp += s.p_norm;
        }
        BudgetConstraints b;
        b.delta_e = uni(0.0, 0.05);
        b.delta_p = uni(0.0, 0.5);
        const double e = uni(0.0, se + 0.1), p = uni(0.0, sp + 1.0);
        const auto r = check_budget(specs, e, p, b);
        const bool direct = (e - se < b.delta_e) && (p - sp < b.delta_p);
        if (r.pass != direct) o.fail("case " + std::to_string(i) + ": pass differs from the inequalities");
        passes += r.pass;
        const double e2 = e * uni(0.0, 1.0), p2 = p * uni(0.0, 1.0);
        for (auto [ee, pp] : {std::pair{e2, p}, std::pair{e, p2}, std::pair{e2, p2}})
            if (r.pass && !check_budget(specs, ee, pp, b).pass) o.fail("case " + std::to_string(i) + ": not monotone");
    }
    if (o.pass) o.detail = "10000 cases exact (" + std::to_string(passes) + " pass), monotone under decreasing E', P'";
    return o;
}

}  // namespace

int main()
{
    int failed = 0;
    auto run = [&](int id, const char* name, const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    };
    run(1, "oracle equivalence", oracle_equivalence);
    run(2, "error metrics", error_metrics_exact);
    run(3, "SCOAP hand-worked circuits", scoap_hand);
    run(4, "STA vs exhaustive DFS", sta_dfs);

    std::vector<Infected> infected;
    try {
        infected.push_back(infect_exact_fir(1));
        for (std::uint64_t seed : {1, 2, 3})
            for (auto& d : experiment_infections(seed)) infected.push_back(std::move(d));
    } catch (const std::exception& e) {
        std::printf("infection setup failed: %s\n", e.what());
    }
    run(5, "Trojan stealth", [&] {
        Outcome o;
        if (infected.empty()) o.fail("no infected designs");
        return o.pass ? stealth(infected) : o;
    });
    run(6, "trigger rarity and fail-closed", [&] {
        Outcome o;
        if (infected.empty()) o.fail("no infected designs");
        return o.pass ? rarity(infected) : o;
    });
    run(7, "detection quality", detection_quality);
    run(8, "zero false positives on clean sets", zero_fp);
    run(9, "determinism", determinism);
    run(10, "budget logic", budget_logic);
    std::printf("%d of 10 criteria failed\n", failed);
    return failed ? 1 : 0;
}
