#pragma once

#include "axt/approx.hpp"
#include "axt/netlist.hpp"
#include "axt/profile.hpp"
#include "axt/scoap.hpp"
#include "axt/sim.hpp"
#include "axt/sta.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axt {

struct CostWeights {
    double w_ap = 0.5;  // accuracy + power term
    double w_r = 0.5;   // rare-net term
};

struct ModuleSpec {
    ArchParams params;
    double e_norm = 0.0;  // MRED on the characterization stream
    double p_norm = 1.0;  // power proxy relative to the exact architecture
    std::size_t rare_count = 0;
    double r_norm = 0.0;  // rare_count / nets
    std::uint64_t scoap_max_cc1 = 0;  // largest finite cc1 among rare nets
    StreamConfig stream;
};

// Characterizes one architecture on a module-level stream; the exact
// architecture of the same op and width is simulated on the same stream as
// the power baseline.
ModuleSpec characterize(const ArchParams& params, const StreamConfig& stream, double theta);

// w_ap * (e_norm + (1 - p_norm)) + w_r * r_norm; higher is more attractive.
double attack_score(const ModuleSpec& spec, const CostWeights& weights);

struct BudgetConstraints {
    double e_prime = 0.02;   // cap on composed MRED
    double p_prime = 1e9;    // cap on composed power (sum of per-instance ratios)
    double delta_e = 0.01;
    double delta_p = 0.25;

    void validate() const;  // throws BadParams
};

struct BudgetCheck {
    bool pass = false;
    bool error_ok = false;
    bool power_ok = false;
    double error_margin = 0.0;  // delta_e - (E' - sum e), positive when satisfied
    double power_margin = 0.0;
};

// Literal inequalities E' - sum(e_norm) < delta_e and P' - sum(p_norm) <
// delta_p. When `composition` is given, every spec must have been
// characterized with the same stream settings or UnitMismatch is thrown.
BudgetCheck check_budget(const std::vector<ModuleSpec>& selected, double e_composed, double p_composed,
                         const BudgetConstraints& budget, const std::optional<StreamConfig>& composition = {});

enum class PayloadKind { Leak, Corrupt };

std::string_view to_string(PayloadKind kind);
std::optional<PayloadKind> parse_payload_kind(std::string_view text);

struct TriggerLiteral {
    std::string net;
    bool value = true;
};

struct HTInstance {
    std::vector<TriggerLiteral> trigger;
    std::size_t q = 0;
    PayloadKind payload = PayloadKind::Leak;
    std::string payload_target;  // output word (LEAK) or output bit (CORRUPT)
    std::string trigger_net;     // root of the trigger tree
    std::vector<std::string> witness_words;
    std::vector<std::uint64_t> witness;
    std::vector<std::string> host_instances;
};

struct TrojanConfig {
    std::size_t q = 4;
    double theta = 0.01;
    PayloadKind payload = PayloadKind::Leak;
    std::uint64_t seed = 1;
    std::uint64_t scoap_ceiling = 1000;
    std::size_t witness_budget = 1000000;
    std::size_t screen_vectors = 65536;  // uniform vectors ranking overlapping trigger literals
    std::map<std::string, double> instance_scores;  // tag -> attack score; unscored tags rank last
    std::vector<std::string> secret_nets;           // LEAK source bits; default: deterministic instance outputs
    std::optional<std::string> corrupt_output;      // CORRUPT target; default: most significant output
    double clock = 10.0;
    DelayModel delay;
};

struct InfectedDesign {
    Netlist netlist;
    HTInstance ht;
};

// Inserts a rare-net-triggered combinational Trojan. `profile` is the stream
// the activity report was computed on; its traces seed the witness search.
// Throws BadThreshold, NoRareNets, NoWitness or WouldViolateTiming.
InfectedDesign insert_trojan(const Netlist& netlist, const VectorSet& profile, const ActivityReport& activity,
                             const ScoapReport& testability, const TrojanConfig& config);

struct StealthReport {
    double error_delta = 0.0;
    double power_delta_fraction = 0.0;
    double trigger_rate = 0.0;
    std::size_t trigger_count = 0;
    double min_slack = 0.0;
};

StealthReport verify_stealth(const Netlist& clean, const Netlist& infected, const HTInstance& ht,
                             const VectorSet& stream, const ReferenceFn& reference, const DelayModel& delay,
                             double clock);

// Packs the witness row of `ht` into a one-vector stream for `netlist`.
VectorSet witness_stream(const Netlist& netlist, const HTInstance& ht);

}  // namespace axt
