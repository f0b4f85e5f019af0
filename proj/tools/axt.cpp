// Command-line front end. Every verb reads an optional flat key=value config
// file (--config F, keys are long option names); flags on the command line
// override it.

#include "axt/approx.hpp"
#include "axt/attack.hpp"
#include "axt/csv.hpp"
#include "axt/design.hpp"
#include "axt/detect.hpp"
#include "axt/errors.hpp"
#include "axt/experiment.hpp"
#include "axt/netlist_io.hpp"
#include "axt/profile.hpp"
#include "axt/scoap.hpp"
#include "axt/sim.hpp"
#include "axt/sta.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace axt;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what)
{
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 0);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw BadParams(std::string("bad ") + what + " '" + s + "'");
}

std::vector<double> parse_doubles(const std::string& s, const char* what)
{
    std::vector<double> out;
    for (const auto& f : split(s, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(f, &used));
            if (used != f.size()) throw std::invalid_argument(f);
        } catch (const std::exception&) {
            throw BadParams(std::string("bad ") + what + " '" + s + "'");
        }
    }
    return out;
}

BudgetConstraints parse_budget(const std::string& s)
{
    const auto v = parse_doubles(s, "budget");
    if (v.size() != 4) throw BadParams("budget needs e,p,de,dp");
    BudgetConstraints b{v[0], v[1], v[2], v[3]};
    b.validate();
    return b;
}

StreamMode parse_mode(const std::string& s)
{
    if (s == "uniform") return StreamMode::Uniform;
    if (s == "correlated") return StreamMode::Correlated;
    throw BadParams("mode must be uniform or correlated");
}

// Config file entries become "--key=value" arguments placed right after the
// verb, ahead of the real command line; options keep their last value.
std::vector<std::string> config_args(const std::string& path, const CLI::App& verb)
{
    std::ifstream in(path);
    if (!in) throw BadParams("cannot read config file " + path);
    std::vector<std::string> args;
    for (const auto& item : CLI::ConfigBase().from_config(in)) {
        if (!item.parents.empty() || item.name == "++" || item.name == "--") continue;
        // Keys meant for other verbs are ignored so one file can serve them all.
        if (!verb.get_option_no_throw("--" + item.name)) continue;
        std::string value;
        for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
        args.push_back("--" + item.name + "=" + value);
    }
    return args;
}

struct DesignOpts {
    std::string kind = "fir";
    int taps = 4;
    int width = 8;
    std::string coeffs = "0x81,0x7F,0xFF,0x7E";
    std::string twiddle = "0x81";
    std::string assign;
    int variants = 10;

    void add(CLI::App* app)
    {
        app->add_option("--kind", kind, "fir or fft")->check(CLI::IsMember({"fir", "fft"}));
        app->add_option("--taps", taps, "FIR taps");
        app->add_option("--width", width, "data width");
        app->add_option("--coeffs", coeffs, "FIR coefficients, comma separated");
        app->add_option("--twiddle", twiddle, "FFT twiddle constant");
        app->add_option("--assign", assign, "slot architectures, e.g. mul0=trunc-k2;add0=loa-k4");
        app->add_option("--variants", variants, "netlist variants to generate");
    }

    DesignConfig config() const
    {
        DesignConfig c;
        c.design = kind == "fft" ? DesignKind::FftButterfly : DesignKind::Fir;
        c.taps = taps;
        c.width = width;
        c.coeffs.clear();
        for (const auto& f : split(coeffs, ',')) c.coeffs.push_back(parse_u64(f, "coefficient"));
        c.twiddle = parse_u64(twiddle, "twiddle");
        c.assign = parse_assignment(assign);
        c.n_variants = variants;
        c.validate();
        return c;
    }

    std::string text() const
    {
        return "kind=" + kind + "\ntaps=" + std::to_string(taps) + "\nwidth=" + std::to_string(width) + "\ncoeffs=\"" +
               coeffs + "\"\ntwiddle=" + twiddle + "\nassign=\"" + assign + "\"\nvariants=" + std::to_string(variants) +
               "\n";
    }
};

// Design files use the gen-design keys.
DesignConfig load_design(const std::string& path)
{
    CLI::App app;
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    DesignOpts d;
    d.add(&app);
    auto args = config_args(path, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    return d.config();
}

fs::path out_dir(const std::string& dir)
{
    fs::create_directories(dir);
    return fs::path(dir);
}

// Replaces the rows of `id` in an existing table, or starts a new one.
void merge_rows(const fs::path& path, const std::vector<CsvRow>& fresh, const std::string& id)
{
    std::vector<CsvRow> rows;
    if (fs::exists(path)) {
        rows = read_csv_file(path.string());
        if (rows.empty() || rows.front() != fresh.front()) throw BadParams(path.string() + " has a different header");
        rows.erase(std::remove_if(rows.begin() + 1, rows.end(), [&](const CsvRow& r) { return !r.empty() && r[0] == id; }),
                   rows.end());
    } else {
        rows.push_back(fresh.front());
    }
    rows.insert(rows.end(), fresh.begin() + 1, fresh.end());
    write_csv_file(path.string(), rows);
}

void emit_netlist(const Netlist& nl, const std::string& path)
{
    if (path == "-") {
        std::cout << serialize_netlist(nl);
        return;
    }
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    write_netlist_file(path, nl);
}

// Reference for error metrics: the design file when given, else the exact
// function of a single-operator module.
std::optional<ReferenceFn> reference_for(const Netlist& nl, const std::string& design_file)
{
    if (!design_file.empty()) {
        auto dc = std::make_shared<DesignConfig>(load_design(design_file));
        return ReferenceFn([dc](std::span<const std::uint64_t> row) { return design_reference(*dc, row); });
    }
    const auto words = nl.input_words();
    if (nl.instances().size() != 1 || words.size() != 2 || words[0].bits.size() != words[1].bits.size()) return {};
    const auto op = static_cast<OpType>(nl.instances().begin()->second.op_type);
    if (op == OpType::Const) return {};
    const int w = static_cast<int>(words[0].bits.size());
    return ReferenceFn([op, w](std::span<const std::uint64_t> row) { return exact_oracle(op, row[0], row[1], w); });
}

struct Args {
    std::string out = ".";
    std::string output = "-";
    std::string netlist;
    std::string design_file;
    std::string library;
    std::string candidates;
    std::string report;
    std::string truth;
    std::string id = "infected";
    std::string op = "add", arch = "exact";
    int k = 0;
    bool loa_and_carry = false;
    std::size_t vectors = 1000;
    std::string mode = "correlated";
    double rho = 0.5;
    std::uint64_t seed = 1;
    double theta = 0.01;
    double clock = 10.0;
    double scale = 1.0;
    std::size_t paths = 100;
    double window = 1.0;
    std::string budget = "0.02,1e9,0.01,0.25";
    std::size_t q = 4;
    std::string payload = "leak";
    std::uint64_t scoap_ceiling = 1000;
    std::size_t witness_budget = 1000000;
    std::size_t stealth_vectors = 10000;
    double utilization = 0.92;
    double infected_fraction = 0.4;
    std::string scales = "1.0,1.2";
    std::size_t stress = 64;
    double threshold = 0.5;
    double tol_factor = 2.0;
    double tol_quantile = 0.99;
    std::size_t detect_vectors = 1000;
    std::size_t replay_targets = 4;
    std::size_t replay_budget = 4096;
    std::string save_design;
    DesignOpts design;
};

void add_detect_opts(CLI::App* c, Args& a)
{
    c->add_option("--clock", a.clock, "clock period");
    c->add_option("--scales", a.scales, "delay scales, comma separated");
    c->add_option("--paths", a.paths, "near-critical paths per scale");
    c->add_option("--window", a.window, "slack window");
    c->add_option("--theta", a.theta, "rare-value threshold");
    c->add_option("--stress", a.stress, "directed vectors per instance");
    c->add_option("--threshold", a.threshold, "suspicion threshold");
    c->add_option("--tol-factor", a.tol_factor, "tolerance multiple of the deviation quantile");
    c->add_option("--tol-quantile", a.tol_quantile, "deviation quantile");
    c->add_option("--detect-vectors", a.detect_vectors, "vectors per ranking stream");
    c->add_option("--rho", a.rho, "correlation of the correlated streams");
    c->add_option("--replay-targets", a.replay_targets, "rare values replayed per instance");
    c->add_option("--replay-budget", a.replay_budget, "justification attempts per replay");
}

DetectConfig detect_config(const Args& a)
{
    DetectConfig d;
    d.clock = a.clock;
    d.scales = parse_doubles(a.scales, "scales");
    d.n_paths = a.paths;
    d.window = a.window;
    d.theta = a.theta;
    d.stress = a.stress;
    d.threshold = a.threshold;
    d.tol_factor = a.tol_factor;
    d.tol_quantile = a.tol_quantile;
    d.n_vectors = a.detect_vectors;
    d.rho = a.rho;
    d.replay_targets = a.replay_targets;
    d.replay_budget = a.replay_budget;
    d.seed = a.seed;
    return d;
}

void run_gen_module(const Args& a)
{
    const auto op = parse_op_type(a.op);
    const auto arch = parse_arch_kind(a.arch);
    if (!op || !arch) throw BadParams("unknown op or arch");
    emit_netlist(gen_module({*op, *arch, a.design.width, a.k, a.loa_and_carry}), a.output);
}

void run_gen_design(const Args& a)
{
    const auto dc = a.design.config();
    const Netlist nl = build_design(dc);
    emit_netlist(nl, a.output);
    if (!a.save_design.empty()) write_text_file(a.save_design, a.design.text());
    if (!a.truth.empty()) {
        if (a.output == "-") throw BadParams("--truth needs an output file to name the netlist");
        const std::string id = fs::path(a.output).stem().string();
        merge_rows(a.truth, ground_truth_rows({{id, nl, std::nullopt}}, {std::nullopt}), id);
    }
}

void run_profile(const Args& a)
{
    const Netlist nl = read_netlist_file(a.netlist);
    const VectorSet vs = generate_stream(nl, {a.vectors, a.seed, parse_mode(a.mode), a.rho});
    const Simulator sim(nl);
    const ActivityReport act = activity_profile(sim, vs);
    const auto dir = out_dir(a.out);

    std::vector<RareNet> rare = rare_nets(act, a.theta);
    std::vector<CsvRow> rows{{"net", "name", "p1", "toggles", "rare"}};
    for (NetId n = 0; n < nl.num_nets(); ++n) {
        auto it = std::find_if(rare.begin(), rare.end(), [&](const RareNet& r) { return r.net == n; });
        rows.push_back({std::to_string(n), nl.net_name(n), fmt_num(act.p1(n)), std::to_string(act.toggles[n]),
                        it == rare.end() ? "" : (it->value ? "1" : "0")});
    }
    write_csv_file((dir / "activity.csv").string(), rows);

    if (auto ref = reference_for(nl, a.design_file)) {
        const auto e = error_profile(nl, *ref, vs);
        write_csv_file((dir / "error.csv").string(),
                       {{"er", "med", "mred", "wce"}, {fmt_num(e.er), fmt_num(e.med), fmt_num(e.mred), std::to_string(e.wce)}});
    } else {
        std::cerr << "no reference function: error.csv skipped (pass --design for a design netlist)\n";
    }

    std::vector<CsvRow> pw{{"instance", "power"}, {"total", fmt_num(power_proxy(nl, act).value)}};
    for (const auto& [tag, info] : nl.instances()) pw.push_back({tag, fmt_num(instance_power(nl, act, tag))});
    write_csv_file((dir / "power.csv").string(), pw);
}

void run_scoap(const Args& a)
{
    const Netlist nl = read_netlist_file(a.netlist);
    const auto s = scoap(nl);
    auto cell = [](std::uint64_t v) { return v >= kScoapInf ? std::string("inf") : std::to_string(v); };
    std::vector<CsvRow> rows{{"net", "name", "cc0", "cc1", "co"}};
    for (NetId n = 0; n < nl.num_nets(); ++n)
        rows.push_back({std::to_string(n), nl.net_name(n), cell(s.cc0[n]), cell(s.cc1[n]), cell(s.co[n])});
    write_csv_file((out_dir(a.out) / "scoap.csv").string(), rows);
}

void run_sta(const Args& a)
{
    const Netlist nl = read_netlist_file(a.netlist);
    DelayModel d;
    d.scale = a.scale;
    d.validate();
    const auto rep = sta(nl, d, a.clock);
    const auto dir = out_dir(a.out);
    std::vector<CsvRow> rows{{"net", "arrival", "required", "slack"}};
    for (NetId n = 0; n < nl.num_nets(); ++n)
        rows.push_back({nl.net_name(n), fmt_num(rep.arrival[n]), fmt_num(rep.required[n]), fmt_num(rep.slack[n])});
    write_csv_file((dir / "slack.csv").string(), rows);

    std::vector<CsvRow> pr{{"rank", "slack", "delay", "tags", "net_sequence"}};
    const auto paths = near_critical_paths(nl, d, a.clock, a.paths, a.window);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::string tags, seq;
        for (const auto& t : paths[i].tags) tags += (tags.empty() ? "" : ";") + t;
        for (NetId n : paths[i].nets) seq += (seq.empty() ? "" : " ") + nl.net_name(n);
        pr.push_back({std::to_string(i + 1), fmt_num(paths[i].slack), fmt_num(paths[i].delay), tags, seq});
    }
    write_csv_file((dir / "paths.csv").string(), pr);
    std::cout << "critical_delay=" << fmt_num(rep.critical_delay) << " min_slack=" << fmt_num(rep.min_slack())
              << " paths=" << paths.size() << "\n";
}

void run_attack(const Args& a)
{
    const DesignConfig dc = load_design(a.design_file);
    const auto library = parse_library(read_csv_file((fs::path(a.library) / "library.csv").string()));
    for (const auto& slot : design_slots(dc)) {
        ArchChoice c;
        if (auto it = dc.assign.find(slot.name); it != dc.assign.end()) c = it->second;
        const LibraryEntry want{slot.op, c};
        if (std::find(library.begin(), library.end(), want) == library.end())
            throw BadParams("slot " + slot.name + " uses an architecture missing from the library");
    }
    const auto budget = parse_budget(a.budget);
    SpecCache cache({a.vectors, derive_seed(a.seed, "characterize"), StreamMode::Correlated, a.rho}, a.theta);
    Variant v = evaluate_variant(dc, cache, budget);
    if (!v.within_budget(budget)) throw BudgetInfeasible("design assignment violates the budget");

    const auto payload = parse_payload_kind(a.payload);
    if (!payload) throw BadParams("payload must be leak or corrupt");
    TrojanConfig tc;
    tc.q = a.q;
    tc.theta = a.theta;
    tc.payload = *payload;
    tc.seed = derive_seed(a.seed, "witness-" + a.id);
    tc.scoap_ceiling = a.scoap_ceiling;
    tc.witness_budget = a.witness_budget;
    tc.clock = a.clock;
    tc.delay = close_timing(v.netlist, a.clock, a.utilization);
    tc.instance_scores = slot_scores(v, CostWeights{});
    const VectorSet profile =
        generate_stream(v.netlist, {a.vectors, derive_seed(a.seed, "profile-" + a.id), StreamMode::Correlated, a.rho});
    auto inf = insert_trojan(v.netlist, profile, activity_profile(Simulator(v.netlist), profile), scoap(v.netlist), tc);
    const VectorSet check =
        generate_stream(v.netlist, {a.stealth_vectors, derive_seed(a.seed, "stealth-" + a.id), StreamMode::Uniform, 0.0});
    const auto st = verify_stealth(
        v.netlist, inf.netlist, inf.ht, check, [&dc](std::span<const std::uint64_t> row) { return design_reference(dc, row); },
        tc.delay, a.clock);

    const auto dir = out_dir(a.out);
    write_netlist_file((dir / (a.id + ".net")).string(), inf.netlist);
    const std::vector<Candidate> cand{{a.id, inf.netlist, tc.delay}};
    merge_rows(dir / "timing.csv", timing_rows(cand), a.id);
    merge_rows(dir / "ht_ground_truth.csv", ground_truth_rows(cand, {inf.ht}), a.id);
    merge_rows(dir / "stealth.csv", stealth_rows({{a.id, st}}), a.id);
    std::cout << "host=" << inf.ht.host_instances.front() << " trigger=" << inf.ht.trigger_net
              << " power_delta=" << fmt_num(st.power_delta_fraction) << " min_slack=" << fmt_num(st.min_slack) << "\n";
}

void run_detect(const Args& a)
{
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.candidates))
        if (e.is_regular_file() && e.path().extension() == ".net") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Candidate> cands;
    for (const auto& f : files) cands.push_back({f.stem().string(), read_netlist_file(f.string()), std::nullopt});
    const auto timing = fs::path(a.candidates) / "timing.csv";
    if (fs::exists(timing)) apply_timing(cands, read_csv_file(timing.string()));
    // Without an annotation the netlist is assumed closed at the clock.
    for (auto& c : cands)
        if (!c.delay) c.delay = close_timing(c.netlist, a.clock, a.utilization);
    const auto report = classify(cands, detect_config(a));
    write_csv_file((out_dir(a.out) / "detect_report.csv").string(), detect_report_rows(report));
    std::size_t flagged = 0;
    for (const auto& nv : report.netlists) flagged += nv.verdict == Verdict::Infected;
    std::cout << "candidates=" << cands.size() << " flagged_netlists=" << flagged << "\n";
}

void run_score(const Args& a)
{
    const auto report = parse_detect_report(read_csv_file(a.report));
    const auto truth = parse_ground_truth(read_csv_file(a.truth));
    const auto m = score(report, truth);
    write_csv_file((out_dir(a.out) / "metrics.csv").string(), metrics_rows(m));
    std::cout << "accuracy=" << fmt_num(m.accuracy) << " fpr=" << fmt_num(m.fpr)
              << " fnr=" << (m.fnr ? fmt_num(*m.fnr) : "n/a") << "\n";
}

void run_experiment_verb(const Args& a)
{
    ExperimentConfig c;
    c.seed = a.seed;
    c.design = a.design.config();
    if (!a.library.empty()) c.library = parse_library(read_csv_file(a.library));
    c.char_vectors = a.vectors;
    c.rho = a.rho;
    c.theta = a.theta;
    c.q = a.q;
    c.scoap_ceiling = a.scoap_ceiling;
    c.witness_budget = a.witness_budget;
    const auto payload = parse_payload_kind(a.payload);
    if (!payload) throw BadParams("payload must be leak or corrupt");
    c.payload = *payload;
    c.clock = a.clock;
    c.utilization = a.utilization;
    c.budget = parse_budget(a.budget);
    c.infected_fraction = a.infected_fraction;
    c.stealth_vectors = a.stealth_vectors;
    c.detect = detect_config(a);
    c.out_dir = a.out;
    const auto r = run_experiment(c);
    std::cout << "variants=" << r.variants.size() << " accuracy=" << fmt_num(r.metrics.accuracy)
              << " fpr=" << fmt_num(r.metrics.fpr) << " fnr=" << (r.metrics.fnr ? fmt_num(*r.metrics.fnr) : "n/a")
              << " out=" << a.out << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Approximate-module netlist generation, Trojan insertion and detection"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    std::string config;
    app.add_option("--config", config, "flat key=value file of option defaults");
    Args a;

    auto* gm = app.add_subcommand("gen-module", "emit one arithmetic module netlist");
    gm->add_option("--op", a.op, "add, sub or mul")->check(CLI::IsMember({"add", "sub", "mul"}));
    gm->add_option("--arch", a.arch, "exact, loa, trunc or block22");
    gm->add_option("--width", a.design.width, "operand width");
    gm->add_option("--k", a.k, "approximation parameter");
    gm->add_flag("--loa-and-carry", a.loa_and_carry, "LOA carry-in from the AND of the top approximate bits");
    gm->add_option("-o,--output", a.output, "netlist file, - for stdout");

    auto* gd = app.add_subcommand("gen-design", "emit a FIR or FFT butterfly netlist");
    a.design.add(gd);
    gd->add_option("-o,--output", a.output, "netlist file, - for stdout");
    gd->add_option("--save-design", a.save_design, "also write the design as a key=value file");
    gd->add_option("--truth", a.truth, "record the netlist as clean in this ground-truth csv");

    auto* pr = app.add_subcommand("profile", "activity, error and power profiles");
    pr->add_option("--netlist", a.netlist)->required();
    pr->add_option("--vectors", a.vectors);
    pr->add_option("--mode", a.mode)->check(CLI::IsMember({"uniform", "correlated"}));
    pr->add_option("--rho", a.rho);
    pr->add_option("--seed", a.seed);
    pr->add_option("--theta", a.theta);
    pr->add_option("--design", a.design_file, "design file giving the reference function");
    pr->add_option("--out", a.out, "output directory");

    auto* sc = app.add_subcommand("scoap", "SCOAP testability");
    sc->add_option("--netlist", a.netlist)->required();
    sc->add_option("--out", a.out, "output directory");

    auto* st = app.add_subcommand("sta", "static timing and near-critical paths");
    st->add_option("--netlist", a.netlist)->required();
    st->add_option("--clock", a.clock);
    st->add_option("--scale", a.scale, "delay scale");
    st->add_option("--paths", a.paths);
    st->add_option("--window", a.window);
    st->add_option("--out", a.out, "output directory");

    auto* at = app.add_subcommand("attack", "insert a Trojan into a design");
    at->add_option("--library", a.library, "directory holding library.csv")->required();
    at->add_option("--design", a.design_file, "design file (gen-design --save-design)")->required();
    at->add_option("--budget", a.budget, "e',p',delta_e,delta_p");
    at->add_option("--q", a.q, "trigger literals");
    at->add_option("--theta", a.theta);
    at->add_option("--payload", a.payload)->check(CLI::IsMember({"leak", "corrupt"}));
    at->add_option("--seed", a.seed);
    at->add_option("--clock", a.clock);
    at->add_option("--utilization", a.utilization, "critical delay / clock after timing closure");
    at->add_option("--vectors", a.vectors, "characterization and profiling vectors");
    at->add_option("--rho", a.rho);
    at->add_option("--scoap-ceiling", a.scoap_ceiling);
    at->add_option("--witness-budget", a.witness_budget);
    at->add_option("--stealth-vectors", a.stealth_vectors);
    at->add_option("--id", a.id, "netlist id of the infected design");
    at->add_option("--out", a.out, "candidate directory to write into");

    auto* de = app.add_subcommand("detect", "classify a directory of candidate netlists");
    de->add_option("--candidates", a.candidates, "directory of *.net files")->required();
    add_detect_opts(de, a);
    de->add_option("--seed", a.seed);
    de->add_option("--utilization", a.utilization, "assumed closure for netlists without timing.csv rows");
    de->add_option("--out", a.out, "output directory");

    auto* so = app.add_subcommand("score", "score a detection report against ground truth");
    so->add_option("--report", a.report)->required();
    so->add_option("--truth", a.truth)->required();
    so->add_option("--out", a.out, "output directory");

    auto* ex = app.add_subcommand("experiment", "end-to-end attack and detection run");
    a.design.add(ex);
    ex->add_option("--seed", a.seed);
    ex->add_option("--library", a.library, "library csv (op,arch,k,loa_and_carry)");
    ex->add_option("--vectors", a.vectors, "characterization vectors");
    ex->add_option("--q", a.q);
    ex->add_option("--payload", a.payload)->check(CLI::IsMember({"leak", "corrupt"}));
    ex->add_option("--utilization", a.utilization);
    ex->add_option("--budget", a.budget, "e',p',delta_e,delta_p");
    ex->add_option("--infected-fraction", a.infected_fraction);
    ex->add_option("--scoap-ceiling", a.scoap_ceiling);
    ex->add_option("--witness-budget", a.witness_budget);
    ex->add_option("--stealth-vectors", a.stealth_vectors);
    add_detect_opts(ex, a);
    ex->add_option("--out", a.out, "artifact directory")->required();

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // Pull --config out, then splice its entries in after the verb.
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                config = args[i + 1];
                args.erase(args.begin() + i, args.begin() + i + 2);
                break;
            }
            if (args[i].rfind("--config=", 0) == 0) {
                config = args[i].substr(9);
                args.erase(args.begin() + i);
                break;
            }
        }
        if (!config.empty()) {
            auto verb = std::find_if(args.begin(), args.end(),
                                     [&](const std::string& s) { return app.get_subcommand_no_throw(s) != nullptr; });
            if (verb != args.end()) {
                const auto extra = config_args(config, *app.get_subcommand(*verb));
                args.insert(verb + 1, extra.begin(), extra.end());
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gm->parsed()) run_gen_module(a);
        else if (gd->parsed()) run_gen_design(a);
        else if (pr->parsed()) run_profile(a);
        else if (sc->parsed()) run_scoap(a);
        else if (st->parsed()) run_sta(a);
        else if (at->parsed()) run_attack(a);
        else if (de->parsed()) run_detect(a);
        else if (so->parsed()) run_score(a);
        else if (ex->parsed()) run_experiment_verb(a);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
