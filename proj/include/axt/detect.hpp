#pragma once

#include "axt/netlist.hpp"
#include "axt/profile.hpp"
#include "axt/sim.hpp"
#include "axt/sta.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axt {

struct Candidate {
    std::string id;
    Netlist netlist;
    // Timing annotation delivered with the netlist; DetectConfig::delay when absent.
    std::optional<DelayModel> delay = std::nullopt;
};

struct RankEntry {
    std::string id;
    std::size_t index = 0;  // position in the candidate list
    ErrorReport uniform;
    ErrorReport correlated;
    double mred = 0.0;  // mean of the two stream MREDs
};

// No golden model: the reference output of every vector is the majority word
// across candidates, or their lower median when no word has a majority.
struct ErrorRanking {
    std::vector<RankEntry> order;  // ascending mred, ties by id
    VectorSet vectors;             // uniform stream followed by correlated stream
    std::vector<std::uint64_t> reference;
    std::uint64_t max_wce = 0;     // largest deviation from the reference seen on the streams
    // Largest per-candidate `quantile` of the output deviation from the
    // reference (maximum over output words of |word - reference word|); unlike max_wce
    // it ignores a handful of outlier vectors (e.g. a trigger firing once).
    std::uint64_t deviation_quantile = 0;
};

// Throws EmptySet or SignatureMismatch.
ErrorRanking rank_by_error(const std::vector<Candidate>& candidates, const StreamConfig& uniform,
                           const StreamConfig& correlated, double quantile = 0.99);

struct Suspect {
    std::string tag;
    std::vector<std::size_t> hits_per_scale;
    std::size_t hits = 0;
    bool all_scales = false;  // hit at every scale
    bool rare = false;    // holds a rare, non-constant net in the defender's profile
    double score = 0.0;   // hits, doubled when rare
};

// Near-critical paths at every delay scale, localized to instances. Rare-net
// evidence comes from `activity` when given. Sorted by descending score.
std::vector<Suspect> suspect_instances(const Netlist& netlist, const DelayModel& delay, double clock,
                                       const std::vector<double>& scales, std::size_t n_paths, double window,
                                       const ActivityReport* activity = nullptr, double theta = 0.01);

// Population and profiling data shared by resilience tests of one candidate set.
struct ResilienceContext {
    std::vector<const Netlist*> population;
    double tol = 0.0;        // per-word output deviation tolerated as approximation
    const VectorSet* profile = nullptr;  // defender's profiling stream
    double theta = 0.01;
    std::size_t replay_targets = 4;
    std::size_t replay_budget = 4096;
    std::uint64_t seed = 1;
};

struct ResilienceResult {
    double score = 1.0;  // 1 - deviating fraction
    std::size_t vectors = 0;
    std::size_t deviations = 0;
    std::size_t replays = 0;  // rare-value replay vectors found
};

// Directed vectors aimed at the instance's input cone: LSB stress, MSB stress
// and rare-value replay. Throws UnknownInstance, BadParams.
ResilienceResult resilience_test(const Netlist& netlist, const std::string& tag, std::size_t budget_vectors,
                                 const ResilienceContext& context);

struct DetectConfig {
    double clock = 10.0;
    DelayModel delay;
    std::vector<double> scales{1.0, 1.2};
    std::size_t n_paths = 100;
    double window = 1.0;
    double theta = 0.01;
    std::size_t stress = 64;
    double threshold = 0.5;
    double tol_factor = 2.0;     // tolerance = tol_factor * deviation quantile
    double tol_quantile = 0.99;
    std::size_t n_vectors = 1000;
    double rho = 0.5;
    std::size_t replay_targets = 4;
    std::size_t replay_budget = 4096;
    std::uint64_t seed = 1;
};

enum class Verdict { Clean, Infected };

std::string_view to_string(Verdict v);

struct InstanceVerdict {
    std::string tag;
    std::size_t hits = 0;
    bool rare = false;
    double evidence = 0.0;  // 1 - resilience, or rare-net evidence for deterministic instances
    double raw = 0.0;
    double suspicion = 0.0;  // raw / max raw within the netlist
    bool flagged = false;
};

struct NetlistVerdict {
    std::string id;
    std::size_t error_rank = 0;
    double mred = 0.0;
    Verdict verdict = Verdict::Clean;
    std::vector<InstanceVerdict> instances;  // every instance, in tag order
};

struct DetectionReport {
    std::vector<NetlistVerdict> netlists;  // candidate order
};

DetectionReport classify(const std::vector<Candidate>& candidates, const DetectConfig& config);

struct Metrics {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double fpr = 0.0;
    std::optional<double> fnr;  // undefined without infected instances
};

// Ground truth: netlist id -> instance tag -> infected. Throws LabelMismatch
// unless it covers exactly the reported instances.
using GroundTruth = std::map<std::string, std::map<std::string, bool>>;

Metrics score(const DetectionReport& report, const GroundTruth& truth);

}  // namespace axt
