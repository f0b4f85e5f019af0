#include "axt/experiment.hpp"

#include "axt/errors.hpp"
#include "axt/netlist_io.hpp"
#include "axt/rng.hpp"
#include "axt/scoap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>

namespace axt {

namespace fs = std::filesystem;

std::vector<LibraryEntry> default_library()
{
    using A = ArchKind;
    return {
        {OpType::Add, {A::Exact, 0}},   {OpType::Add, {A::Loa, 2}},    {OpType::Add, {A::Loa, 4}},
        {OpType::Add, {A::Trunc, 2}},   {OpType::Sub, {A::Exact, 0}},  {OpType::Sub, {A::Loa, 2}},
        {OpType::Sub, {A::Trunc, 2}},   {OpType::Mul, {A::Exact, 0}},  {OpType::Mul, {A::Trunc, 2}},
        {OpType::Mul, {A::Trunc, 4}},   {OpType::Mul, {A::Block22, 2}}, {OpType::Mul, {A::Block22, 4}},
    };
}

std::vector<CsvRow> library_rows(const std::vector<LibraryEntry>& library)
{
    std::vector<CsvRow> rows{{"op", "arch", "k", "loa_and_carry"}};
    for (const auto& e : library)
        rows.push_back({std::string(to_string(e.op)), std::string(to_string(e.choice.arch)),
                        std::to_string(e.choice.k), e.choice.loa_and_carry ? "1" : "0"});
    return rows;
}

std::vector<LibraryEntry> parse_library(const std::vector<CsvRow>& rows)
{
    // Extra columns (a characterized library.csv) are ignored.
    if (rows.empty() || rows.front().size() < 4 ||
        !std::equal(rows.front().begin(), rows.front().begin() + 4, CsvRow{"op", "arch", "k", "loa_and_carry"}.begin()))
        throw BadParams("library header must start with op,arch,k,loa_and_carry");
    std::vector<LibraryEntry> lib;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != rows.front().size())
            throw BadParams("library row " + std::to_string(i) + " needs " + std::to_string(rows.front().size()) + " fields");
        auto op = parse_op_type(r[0]);
        auto arch = parse_arch_kind(r[1]);
        if (!op || !arch) throw BadParams("library row " + std::to_string(i) + ": unknown op or arch");
        LibraryEntry e;
        e.op = *op;
        e.choice.arch = *arch;
        try {
            e.choice.k = std::stoi(r[2]);
        } catch (const std::exception&) {
            throw BadParams("library row " + std::to_string(i) + ": bad k");
        }
        e.choice.loa_and_carry = r[3] == "1";
        if (std::find(lib.begin(), lib.end(), e) == lib.end()) lib.push_back(e);
    }
    return lib;
}

const ModuleSpec& SpecCache::get(const ArchParams& params)
{
    auto it = specs_.find(params);
    if (it == specs_.end()) it = specs_.emplace(params, characterize(params, stream_, theta_)).first;
    return it->second;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& label)
{
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // splitmix64 finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

std::string format_assignment(const DesignConfig& config)
{
    std::string s;
    for (const auto& slot : design_slots(config)) {
        ArchChoice c;
        if (auto it = config.assign.find(slot.name); it != config.assign.end()) c = it->second;
        if (!s.empty()) s += ';';
        s += slot.name + "=" + std::string(to_string(c.arch)) + "-k" + std::to_string(c.k);
        if (c.loa_and_carry) s += "-ac";
    }
    return s;
}

std::map<std::string, ArchChoice> parse_assignment(const std::string& text)
{
    std::map<std::string, ArchChoice> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(';', pos), text.size());
        const std::string item = text.substr(pos, end - pos);
        pos = end + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw BadParams("assignment item '" + item + "' needs slot=arch");
        std::string spec = item.substr(eq + 1);
        ArchChoice c;
        if (spec.size() > 3 && spec.compare(spec.size() - 3, 3, "-ac") == 0) {
            c.loa_and_carry = true;
            spec.resize(spec.size() - 3);
        }
        const auto dash = spec.find("-k");
        const auto arch = parse_arch_kind(spec.substr(0, dash));
        if (!arch) throw BadParams("assignment item '" + item + "': unknown architecture");
        c.arch = *arch;
        if (dash != std::string::npos) {
            try {
                std::size_t used = 0;
                c.k = std::stoi(spec.substr(dash + 2), &used);
                if (used != spec.size() - dash - 2) throw std::invalid_argument("k");
            } catch (const std::exception&) {
                throw BadParams("assignment item '" + item + "': bad k");
            }
        }
        out[item.substr(0, eq)] = c;
    }
    return out;
}

namespace {

struct Point {
    double e;
    double p;
    std::uint64_t index;  // mixed-radix assignment code
};

// Per-slot ratio of instance power to the same instance in the exact design.
double composed_power(const Netlist& nl, const ActivityReport& act, const Netlist& exact,
                      const ActivityReport& exact_act, const std::vector<std::string>& tags)
{
    double sum = 0.0;
    for (const auto& tag : tags) {
        const double base = instance_power(exact, exact_act, tag);
        const double v = instance_power(nl, act, tag);
        sum += base > 0.0 ? v / base : (v > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    }
    return sum;
}

// The exact design simulated on the composition stream.
struct Baseline {
    Netlist exact;
    VectorSet stream;
    ActivityReport activity;
    std::vector<std::string> tags;

    Baseline(const DesignConfig& design, const StreamConfig& sc)
    {
        DesignConfig exact_cfg = design;
        exact_cfg.assign.clear();
        exact = build_design(exact_cfg);
        stream = generate_stream(exact, sc);
        activity = activity_profile(Simulator(exact), stream);
        for (const auto& slot : design_slots(design)) tags.push_back(design_top(design) + "." + slot.name);
    }
};

// Builds v.config and fills the composed figures and the budget check.
void evaluate(Variant& v, const Baseline& base, const BudgetConstraints& budget, const StreamConfig& sc)
{
    const DesignConfig dc = v.config;
    v.netlist = build_design(dc);
    const Simulator sim(v.netlist);
    v.e_composed = error_profile(
        v.netlist, [&dc](std::span<const std::uint64_t> row) { return design_reference(dc, row); }, base.stream).mred;
    v.p_composed = composed_power(v.netlist, activity_profile(sim, base.stream), base.exact, base.activity, base.tags);
    v.check = check_budget(v.specs, v.e_composed, v.p_composed, budget, sc);
}

bool within_caps(const Variant& v, const BudgetConstraints& budget)
{
    return v.check.pass && v.e_composed <= budget.e_prime && v.p_composed <= budget.p_prime;
}

}  // namespace

Variant evaluate_variant(const DesignConfig& design, SpecCache& cache, const BudgetConstraints& budget)
{
    design.validate();
    budget.validate();
    Variant v;
    v.id = "v0";
    v.config = design;
    for (const auto& slot : design_slots(design)) {
        ArchChoice c;
        if (auto it = design.assign.find(slot.name); it != design.assign.end()) c = it->second;
        v.config.assign[slot.name] = c;
        v.specs.push_back(cache.get(slot_params(slot, c)));
        v.sum_e += v.specs.back().e_norm;
        v.sum_p += v.specs.back().p_norm;
    }
    evaluate(v, Baseline(design, cache.stream()), budget, cache.stream());
    return v;
}

bool Variant::within_budget(const BudgetConstraints& budget) const { return within_caps(*this, budget); }

DelayModel close_timing(const Netlist& netlist, double clock, double utilization)
{
    const double crit = sta(netlist, DelayModel{}, clock).critical_delay;
    DelayModel d;
    d.scale = crit > 0.0 ? utilization * clock / crit : 1.0;
    return d;
}

std::map<std::string, double> slot_scores(const Variant& v, const CostWeights& weights)
{
    std::map<std::string, double> out;
    const auto slots = design_slots(v.config);
    for (std::size_t s = 0; s < slots.size() && s < v.specs.size(); ++s)
        out[design_top(v.config) + "." + slots[s].name] = attack_score(v.specs[s], weights);
    return out;
}

std::vector<Variant> generate_variants(const DesignConfig& design, const std::vector<LibraryEntry>& library,
                                       const BudgetConstraints& budget, SpecCache& cache)
{
    design.validate();
    budget.validate();
    if (design.n_variants < 1) throw BadParams("n_variants must be positive");
    const auto slots = design_slots(design);

    std::vector<std::vector<ArchChoice>> options(slots.size());
    std::vector<std::vector<const ModuleSpec*>> specs(slots.size());
    std::uint64_t combos = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        for (const auto& e : library) {
            if (e.op != slots[s].op) continue;
            const ArchParams p = slot_params(slots[s], e.choice);
            try {
                validate(p);
            } catch (const BadParams&) {
                continue;  // e.g. k too large for this slot's width
            }
            if (std::find(options[s].begin(), options[s].end(), e.choice) != options[s].end()) continue;
            options[s].push_back(e.choice);
            specs[s].push_back(&cache.get(p));
        }
        if (options[s].empty())
            throw BadParams("library has no usable architecture for slot '" + slots[s].name + "'");
        combos *= options[s].size();
        if (combos > 4000000) throw BadParams("too many library assignments to enumerate");
    }

    std::vector<Point> pts;
    pts.reserve(combos);
    for (std::uint64_t code = 0; code < combos; ++code) {
        double e = 0.0, p = 0.0;
        std::uint64_t c = code;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto* m = specs[s][c % options[s].size()];
            c /= options[s].size();
            e += m->e_norm;
            p += m->p_norm;
        }
        pts.push_back({e, p, code});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        if (a.e != b.e) return a.e < b.e;
        if (a.p != b.p) return a.p < b.p;
        return a.index < b.index;
    });

    const Baseline base(design, cache.stream());

    std::vector<Variant> out;
    const auto wanted = static_cast<std::size_t>(design.n_variants);
    const std::size_t max_builds = 50 * wanted;
    std::size_t builds = 0;
    std::size_t front_no = 0;
    while (!pts.empty() && out.size() < wanted && builds < max_builds) {
        // Peel the next non-dominated front; pts stays sorted by (e, p).
        std::vector<Point> front, rest;
        double best_p = std::numeric_limits<double>::infinity();
        for (const auto& pt : pts) {
            if (pt.p < best_p) {
                front.push_back(pt);
                best_p = pt.p;
            } else {
                rest.push_back(pt);
            }
        }
        pts = std::move(rest);

        // Evenly spaced picks along the front first, then the remainder.
        const std::size_t need = std::min(front.size(), wanted - out.size());
        std::vector<std::size_t> order;
        std::vector<bool> queued(front.size(), false);
        for (std::size_t j = 0; j < need; ++j) {
            const std::size_t i = need == 1 ? 0 : (j * (front.size() - 1) + (need - 1) / 2) / (need - 1);
            if (!queued[i]) {
                queued[i] = true;
                order.push_back(i);
            }
        }
        for (std::size_t i = 0; i < front.size(); ++i)
            if (!queued[i]) order.push_back(i);

        for (std::size_t i : order) {
            if (out.size() == wanted || builds == max_builds) break;
            ++builds;
            Variant v;
            v.config = design;
            v.config.assign.clear();
            std::uint64_t c = front[i].index;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                const std::size_t o = c % options[s].size();
                c /= options[s].size();
                v.config.assign[slots[s].name] = options[s][o];
                v.specs.push_back(*specs[s][o]);
            }
            v.sum_e = front[i].e;
            v.sum_p = front[i].p;
            v.front = front_no;
            evaluate(v, base, budget, cache.stream());
            if (!within_caps(v, budget)) continue;
            v.id = "v" + std::to_string(out.size());
            out.push_back(std::move(v));
        }
        ++front_no;
    }
    if (out.empty()) throw BudgetInfeasible("no library assignment satisfies the budget");
    return out;
}

void ExperimentConfig::validate() const
{
    design.validate();
    budget.validate();
    if (char_vectors == 0 || stealth_vectors == 0) throw BadParams("stream sizes must be positive");
    if (rho < 0.0 || rho > 1.0) throw BadParams("rho must lie in [0, 1]");
    if (!(theta > 0.0 && theta < 0.5)) throw BadThreshold("theta must lie in (0, 0.5)");
    if (q == 0) throw BadParams("q must be positive");
    if (!(clock > 0.0)) throw BadParams("clock must be positive");
    if (!(utilization > 0.0 && utilization <= 1.0)) throw BadParams("utilization must lie in (0, 1]");
    if (infected_fraction < 0.0 || infected_fraction > 1.0) throw BadParams("infected_fraction must lie in [0, 1]");
}

std::vector<CsvRow> detect_report_rows(const DetectionReport& report)
{
    std::vector<CsvRow> rows{{"netlist", "verdict", "instance", "suspicion", "flagged"}};
    for (const auto& nv : report.netlists)
        for (const auto& iv : nv.instances)
            rows.push_back({nv.id, std::string(to_string(nv.verdict)), iv.tag, fmt_num(iv.suspicion),
                            iv.flagged ? "1" : "0"});
    return rows;
}

std::vector<CsvRow> metrics_rows(const Metrics& m)
{
    return {{"accuracy", "fpr", "fnr", "tp", "fp", "tn", "fn"},
            {fmt_num(m.accuracy), fmt_num(m.fpr), m.fnr ? fmt_num(*m.fnr) : "n/a", std::to_string(m.tp),
             std::to_string(m.fp), std::to_string(m.tn), std::to_string(m.fn)}};
}

std::vector<CsvRow> stealth_rows(const std::vector<std::pair<std::string, StealthReport>>& rows)
{
    std::vector<CsvRow> out{{"netlist", "error_delta", "power_delta_fraction", "trigger_rate", "trigger_count",
                             "min_slack"}};
    for (const auto& [id, s] : rows)
        out.push_back({id, fmt_num(s.error_delta), fmt_num(s.power_delta_fraction), fmt_num(s.trigger_rate),
                       std::to_string(s.trigger_count), fmt_num(s.min_slack)});
    return out;
}

std::vector<CsvRow> timing_rows(const std::vector<Candidate>& candidates)
{
    std::vector<CsvRow> rows{{"netlist", "delay_scale"}};
    for (const auto& c : candidates) {
        // Shortest round-trip form so a reloaded annotation is bit-identical.
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, c.delay.value_or(DelayModel{}).scale);
        rows.push_back({c.id, std::string(buf, r.ptr)});
    }
    return rows;
}

void apply_timing(std::vector<Candidate>& candidates, const std::vector<CsvRow>& rows)
{
    if (rows.empty() || rows.front() != CsvRow{"netlist", "delay_scale"})
        throw BadParams("timing header must be netlist,delay_scale");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) throw BadParams("timing row " + std::to_string(i) + " needs 2 fields");
        auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Candidate& c) { return c.id == rows[i][0]; });
        if (it == candidates.end()) continue;
        DelayModel d;
        try {
            d.scale = std::stod(rows[i][1]);
        } catch (const std::exception&) {
            throw BadParams("timing row " + std::to_string(i) + ": bad scale");
        }
        d.validate();
        it->delay = d;
    }
}

std::vector<CsvRow> ground_truth_rows(const std::vector<Candidate>& candidates,
                                      const std::vector<std::optional<HTInstance>>& trojans)
{
    std::vector<CsvRow> rows{{"netlist", "instance", "infected", "payload", "trigger", "witness"}};
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& ht = i < trojans.size() ? trojans[i] : std::nullopt;
        for (const auto& [tag, info] : candidates[i].netlist.instances()) {
            const bool host = ht && std::find(ht->host_instances.begin(), ht->host_instances.end(), tag) !=
                                        ht->host_instances.end();
            CsvRow r{candidates[i].id, tag, host ? "1" : "0", "", "", ""};
            if (host) {
                r[3] = std::string(to_string(ht->payload));
                for (const auto& l : ht->trigger) r[4] += (r[4].empty() ? "" : "&") + l.net + "=" + (l.value ? "1" : "0");
                for (std::size_t w = 0; w < ht->witness.size(); ++w)
                    r[5] += (w ? ";" : "") + ht->witness_words[w] + "=" + std::to_string(ht->witness[w]);
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

GroundTruth parse_ground_truth(const std::vector<CsvRow>& rows)
{
    if (rows.empty() || rows.front().size() < 3 || rows.front()[0] != "netlist" || rows.front()[1] != "instance" ||
        rows.front()[2] != "infected")
        throw BadParams("ground truth header must start with netlist,instance,infected");
    GroundTruth gt;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() < 3 || (r[2] != "0" && r[2] != "1"))
            throw BadParams("ground truth row " + std::to_string(i) + " is malformed");
        gt[r[0]][r[1]] = r[2] == "1";
    }
    return gt;
}

DetectionReport parse_detect_report(const std::vector<CsvRow>& rows)
{
    if (rows.empty() || rows.front().size() < 4 || rows.front()[0] != "netlist" || rows.front()[2] != "instance")
        throw BadParams("detect report header must be netlist,verdict,instance,suspicion[,flagged]");
    const bool has_flag = rows.front().size() >= 5;
    DetectionReport rep;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() < rows.front().size()) throw BadParams("detect report row " + std::to_string(i) + " is short");
        if (rep.netlists.empty() || rep.netlists.back().id != r[0]) {
            rep.netlists.emplace_back();
            rep.netlists.back().id = r[0];
        }
        auto& nv = rep.netlists.back();
        nv.verdict = r[1] == "infected" ? Verdict::Infected : Verdict::Clean;
        InstanceVerdict iv;
        iv.tag = r[2];
        try {
            iv.suspicion = std::stod(r[3]);
        } catch (const std::exception&) {
            throw BadParams("detect report row " + std::to_string(i) + ": bad suspicion");
        }
        // Without the flag column, flags are recovered from the default threshold.
        iv.flagged = has_flag ? r[4] == "1" : iv.suspicion >= 0.5;
        nv.instances.push_back(std::move(iv));
    }
    return rep;
}

namespace {

void write_artifacts(const ExperimentConfig& cfg, const ExperimentResult& res, const SpecCache& cache,
                     const fs::path& dir)
{
    fs::create_directories(dir / "netlists");
    CostWeights weights;
    std::vector<CsvRow> lib{{"op", "arch", "k", "loa_and_carry", "width", "e_norm", "p_norm", "rare_count", "r_norm",
                             "scoap_max_cc1", "score"}};
    for (const auto& [p, s] : cache.entries())
        lib.push_back({std::string(to_string(p.op)), std::string(to_string(p.arch)), std::to_string(p.k),
                       p.loa_and_carry ? "1" : "0", std::to_string(p.width), fmt_num(s.e_norm), fmt_num(s.p_norm),
                       std::to_string(s.rare_count), fmt_num(s.r_norm), std::to_string(s.scoap_max_cc1),
                       fmt_num(attack_score(s, weights))});
    write_csv_file((dir / "library.csv").string(), lib);

    std::vector<CsvRow> var{{"netlist", "front", "assignment", "sum_e", "sum_p", "e_composed", "p_composed",
                             "error_margin", "power_margin"}};
    for (const auto& v : res.variants) {
        var.push_back({v.id, std::to_string(v.front), format_assignment(v.config), fmt_num(v.sum_e), fmt_num(v.sum_p),
                       fmt_num(v.e_composed), fmt_num(v.p_composed), fmt_num(v.check.error_margin),
                       fmt_num(v.check.power_margin)});
    }
    write_csv_file((dir / "variants.csv").string(), var);

    for (const auto& c : res.candidates) write_netlist_file((dir / "netlists" / (c.id + ".net")).string(), c.netlist);

    std::vector<std::pair<std::string, StealthReport>> st;
    for (std::size_t i = 0; i < res.variants.size(); ++i)
        if (res.stealth[i]) st.emplace_back(res.variants[i].id, *res.stealth[i]);
    write_csv_file((dir / "stealth.csv").string(), stealth_rows(st));
    write_csv_file((dir / "ht_ground_truth.csv").string(), ground_truth_rows(res.candidates, res.trojans));
    write_csv_file((dir / "detect_report.csv").string(), detect_report_rows(res.report));
    write_csv_file((dir / "netlists" / "timing.csv").string(), timing_rows(res.candidates));

    auto m = metrics_rows(res.metrics);
    m[0].insert(m[0].end(), {"netlists", "netlist_accuracy"});
    const double n = static_cast<double>(res.candidates.size());
    m[1].insert(m[1].end(), {std::to_string(res.candidates.size()),
                             fmt_num(n > 0 ? static_cast<double>(res.netlists_correct) / n : 0.0)});
    write_csv_file((dir / "metrics.csv").string(), m);

    std::string log = "seed=" + std::to_string(cfg.seed) + "\n";
    for (const auto& line : res.log) log += line + "\n";
    write_text_file((dir / "experiment.log").string(), log);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult res;
    SpecCache cache(StreamConfig{cfg.char_vectors, derive_seed(cfg.seed, "characterize"), StreamMode::Correlated, cfg.rho},
                    cfg.theta);
    res.variants = generate_variants(cfg.design, cfg.library, cfg.budget, cache);
    res.log.push_back("variants=" + std::to_string(res.variants.size()));

    // Timing closure: each variant's delays are scaled so its critical path
    // takes `utilization` of the clock, as synthesis would size its cells.
    std::vector<DelayModel> delays;
    for (const auto& v : res.variants) {
        const DelayModel d = close_timing(v.netlist, cfg.clock, cfg.utilization);
        delays.push_back(d);
        res.delay_scales.push_back(d.scale);
        res.log.push_back("timing " + v.id + " delay_scale=" + fmt_num(d.scale));
    }

    const std::size_t n = res.variants.size();
    res.trojans.assign(n, std::nullopt);
    res.stealth.assign(n, std::nullopt);
    const auto target = static_cast<std::size_t>(std::llround(cfg.infected_fraction * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(cfg.seed, "infect"));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    CostWeights weights;
    std::size_t infected = 0;
    for (std::size_t i : order) {
        if (infected == target) break;
        const Variant& v = res.variants[i];
        TrojanConfig tc;
        tc.q = cfg.q;
        tc.theta = cfg.theta;
        tc.payload = cfg.payload;
        tc.seed = derive_seed(cfg.seed, "witness-" + v.id);
        tc.scoap_ceiling = cfg.scoap_ceiling;
        tc.witness_budget = cfg.witness_budget;
        tc.clock = cfg.clock;
        tc.delay = delays[i];
        tc.instance_scores = slot_scores(v, weights);
        const VectorSet profile = generate_stream(
            v.netlist, {cfg.char_vectors, derive_seed(cfg.seed, "profile-" + v.id), StreamMode::Correlated, cfg.rho});
        try {
            auto inf = insert_trojan(v.netlist, profile, activity_profile(Simulator(v.netlist), profile),
                                     scoap(v.netlist), tc);
            const VectorSet check = generate_stream(
                v.netlist, {cfg.stealth_vectors, derive_seed(cfg.seed, "stealth-" + v.id), StreamMode::Uniform, 0.0});
            const DesignConfig dc = v.config;
            res.stealth[i] = verify_stealth(
                v.netlist, inf.netlist, inf.ht, check,
                [&dc](std::span<const std::uint64_t> row) { return design_reference(dc, row); }, delays[i],
                cfg.clock);
            res.log.push_back("infect " + v.id + " host=" + inf.ht.host_instances.front() +
                              " trigger=" + inf.ht.trigger_net);
            res.trojans[i] = std::move(inf.ht);
            res.candidates.push_back({v.id, std::move(inf.netlist), delays[i]});
            ++infected;
        } catch (const Error& e) {
            res.log.push_back("skip " + v.id + ": " + e.what());
        }
    }
    if (infected < target)
        res.log.push_back("infected " + std::to_string(infected) + " of " + std::to_string(target) + " requested");

    // Candidates in variant order; the defender sees ids and netlists only.
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& id = res.variants[i].id;
        auto it = std::find_if(res.candidates.begin(), res.candidates.end(), [&](const Candidate& c) { return c.id == id; });
        cands.push_back(it != res.candidates.end() ? std::move(*it) : Candidate{id, res.variants[i].netlist, delays[i]});
    }
    res.candidates = std::move(cands);

    for (std::size_t i = 0; i < n; ++i) {
        auto& labels = res.truth[res.candidates[i].id];
        for (const auto& [tag, info] : res.candidates[i].netlist.instances()) labels[tag] = false;
        if (res.trojans[i])
            for (const auto& h : res.trojans[i]->host_instances) labels[h] = true;
    }

    DetectConfig dc = cfg.detect;
    dc.clock = cfg.clock;
    dc.seed = derive_seed(cfg.seed, "detect");
    res.report = classify(res.candidates, dc);
    res.metrics = score(res.report, res.truth);
    for (std::size_t i = 0; i < n; ++i) {
        const bool truth = res.trojans[i].has_value();
        if ((res.report.netlists[i].verdict == Verdict::Infected) == truth) ++res.netlists_correct;
    }

    if (!cfg.out_dir.empty()) {
        const fs::path dir(cfg.out_dir);
        const fs::path stage = dir.string() + ".partial";
        fs::remove_all(stage);
        try {
            write_artifacts(cfg, res, cache, stage);
            fs::remove_all(dir);
            fs::rename(stage, dir);
        } catch (...) {
            std::error_code ec;
            fs::remove_all(stage, ec);
            throw;
        }
    }
    return res;
}

}  // namespace axt
