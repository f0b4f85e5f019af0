#pragma once

#include "axt/netlist.hpp"

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace axt {

struct DelayModel {
    // Indexed by GateKind. Unit delay per gate; constants are free.
    std::array<double, 11> delay{1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0};
    double scale = 1.0;  // voltage-mode multiplier

    double of(GateKind kind) const { return delay[static_cast<std::size_t>(kind)] * scale; }
    void set(GateKind kind, double d) { delay[static_cast<std::size_t>(kind)] = d; }
    void validate() const;  // throws BadParams
};

inline constexpr double kNoRequirement = std::numeric_limits<double>::infinity();

struct TimingReport {
    double clock = 0.0;
    double critical_delay = 0.0;  // max arrival at a primary output
    std::vector<double> arrival;
    std::vector<double> required;  // kNoRequirement for nets reaching no output
    std::vector<double> slack;

    double min_slack() const;
    bool meets_timing() const { return min_slack() >= -1e-9; }
};

TimingReport sta(const Netlist& netlist, const DelayModel& model, double clock);

struct TimingPath {
    std::vector<NetId> nets;    // primary input first, primary output last
    std::vector<GateId> gates;  // gates[i] drives nets[i + 1]
    double delay = 0.0;
    double slack = 0.0;
    std::vector<std::string> tags;  // distinct instance tags in path order
};

// Up to n complete input-to-output paths with 0 <= slack <= window in
// ascending slack order, ties broken by lexicographic net ids. Best-first
// search guided by the exact set of achievable remaining delays per net.
std::vector<TimingPath> near_critical_paths(const Netlist& netlist, const DelayModel& model, double clock,
                                            std::size_t n, double window);

// Instance tags touched by at least one path with their hit counts, sorted by
// descending hits then tag.
std::vector<std::pair<std::string, std::size_t>> paths_to_instances(const std::vector<TimingPath>& paths,
                                                                    const Netlist& netlist);

}  // namespace axt
