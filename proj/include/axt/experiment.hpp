#pragma once

#include "axt/attack.hpp"
#include "axt/csv.hpp"
#include "axt/design.hpp"
#include "axt/detect.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axt {

// Architecture template of the synthesis library; the operand width comes
// from the operator slot it is bound to.
struct LibraryEntry {
    OpType op = OpType::Add;
    ArchChoice choice;

    bool operator==(const LibraryEntry&) const = default;
};

std::vector<LibraryEntry> default_library();
std::vector<CsvRow> library_rows(const std::vector<LibraryEntry>& library);  // header op,arch,k,loa_and_carry
std::vector<LibraryEntry> parse_library(const std::vector<CsvRow>& rows);  // throws BadParams

// Characterizes each (op, arch, k, width) once.
class SpecCache {
public:
    SpecCache(StreamConfig stream, double theta) : stream_(stream), theta_(theta) {}
    const ModuleSpec& get(const ArchParams& params);
    const std::map<ArchParams, ModuleSpec>& entries() const { return specs_; }
    const StreamConfig& stream() const { return stream_; }

private:
    StreamConfig stream_;
    double theta_;
    std::map<ArchParams, ModuleSpec> specs_;
};

// Deterministic child seed for a named purpose.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& label);

struct Variant {
    std::string id;
    DesignConfig config;
    Netlist netlist;
    std::vector<ModuleSpec> specs;  // slot order
    double sum_e = 0.0;
    double sum_p = 0.0;
    double e_composed = 0.0;  // MRED of the composition against the exact design
    double p_composed = 0.0;  // sum over slots of instance power / exact instance power
    std::size_t front = 0;    // non-domination rank over (sum_e, sum_p), 0 = first
    BudgetCheck check;

    bool within_budget(const BudgetConstraints& budget) const;  // check passes and E', P' within the caps
};

// Evaluates the single assignment of `design` (unassigned slots exact).
Variant evaluate_variant(const DesignConfig& design, SpecCache& cache, const BudgetConstraints& budget);

// Delay model whose critical path takes `utilization` of the clock.
DelayModel close_timing(const Netlist& netlist, double clock, double utilization);

// Instance tag -> attack score of the slot's architecture.
std::map<std::string, double> slot_scores(const Variant& variant, const CostWeights& weights);

// Assignments of library architectures to the design's operator slots are
// peeled into non-dominated fronts over (sum_e, sum_p); each front is sampled
// evenly along sum_e, and built variants are kept when they pass check_budget
// and the E'/P' caps. Throws BudgetInfeasible when none passes.
std::vector<Variant> generate_variants(const DesignConfig& design, const std::vector<LibraryEntry>& library,
                                       const BudgetConstraints& budget, SpecCache& cache);

struct ExperimentConfig {
    std::uint64_t seed = 1;
    DesignConfig design;
    std::vector<LibraryEntry> library = default_library();
    std::size_t char_vectors = 1000;  // characterization and composition stream
    double rho = 0.5;                 // correlated streams
    double theta = 0.01;
    std::size_t q = 4;
    std::uint64_t scoap_ceiling = 1000;
    std::size_t witness_budget = 1000000;
    PayloadKind payload = PayloadKind::Leak;
    double clock = 10.0;
    double utilization = 0.92;  // critical delay / clock of every variant after timing closure
    BudgetConstraints budget;
    double infected_fraction = 0.4;
    std::size_t stealth_vectors = 10000;
    DetectConfig detect;  // clock, delay and seed are filled in by the experiment
    std::string out_dir;  // artifacts are written only when set

    void validate() const;  // throws BadParams
};

struct ExperimentResult {
    std::vector<Variant> variants;
    std::vector<std::optional<HTInstance>> trojans;  // per variant
    std::vector<std::optional<StealthReport>> stealth;
    std::vector<Candidate> candidates;
    GroundTruth truth;
    DetectionReport report;
    Metrics metrics;
    std::size_t netlists_correct = 0;  // netlist-level verdicts matching the truth
    std::vector<double> delay_scales;  // per variant
    std::vector<std::string> log;
};

// Library characterization, variant generation, infection, detection and
// scoring. With out_dir set, artifacts are staged in a sibling directory and
// moved into place only when the run succeeds.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Report tables shared by the experiment and the CLI.
std::vector<CsvRow> detect_report_rows(const DetectionReport& report);
std::vector<CsvRow> metrics_rows(const Metrics& m);
std::vector<CsvRow> stealth_rows(const std::vector<std::pair<std::string, StealthReport>>& rows);
std::vector<CsvRow> timing_rows(const std::vector<Candidate>& candidates);  // netlist,delay_scale
void apply_timing(std::vector<Candidate>& candidates, const std::vector<CsvRow>& rows);  // throws BadParams
std::vector<CsvRow> ground_truth_rows(const std::vector<Candidate>& candidates,
                                      const std::vector<std::optional<HTInstance>>& trojans);

// Reads ht_ground_truth.csv / detect_report.csv back. Throws BadParams.
GroundTruth parse_ground_truth(const std::vector<CsvRow>& rows);
DetectionReport parse_detect_report(const std::vector<CsvRow>& rows);

// "mul0=trunc-k2;add0=loa-k4-ac"; unassigned slots print as exact.
std::string format_assignment(const DesignConfig& config);
std::map<std::string, ArchChoice> parse_assignment(const std::string& text);  // throws BadParams

}  // namespace axt
