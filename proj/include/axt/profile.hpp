#pragma once

#include "axt/approx.hpp"
#include "axt/netlist.hpp"
#include "axt/sim.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace axt {

struct ErrorReport {
    double er = 0.0;    // fraction of vectors with a wrong output
    double med = 0.0;   // mean |actual - exact|
    double mred = 0.0;  // mean |actual - exact| / max(1, exact)
    std::uint64_t wce = 0;
    std::size_t n_vectors = 0;
};

ErrorReport error_metrics(std::span<const std::uint64_t> actual, std::span<const std::uint64_t> reference);

// Exact reference value for one input row.
using ReferenceFn = std::function<std::uint64_t(std::span<const std::uint64_t>)>;

// Output word = all primary outputs, bit i = output i. The ArchParams overload
// uses exact_oracle on the first two input words.
ErrorReport error_profile(const Netlist& netlist, const ArchParams& params, const VectorSet& stream);
ErrorReport error_profile(const Netlist& netlist, const ReferenceFn& reference, const VectorSet& stream);

struct ActivityReport {
    std::vector<std::uint64_t> ones;
    std::vector<std::uint64_t> toggles;
    std::size_t total_cycles = 0;

    double p1(NetId net) const
    {
        return total_cycles == 0 ? 0.0 : static_cast<double>(ones[net]) / static_cast<double>(total_cycles);
    }
    std::size_t size() const { return ones.size(); }
};

ActivityReport activity_profile(const Traces& traces);
// Streams the vectors through the simulator block by block without keeping
// traces; identical to activity_profile(sim.run(vectors)).
ActivityReport activity_profile(const Simulator& sim, const VectorSet& vectors);

struct RareNet {
    NetId net = 0;
    bool value = true;  // the rarely held logic value

    bool operator==(const RareNet&) const = default;
};

// (net,1) iff p1 < theta, (net,0) iff 1 - p1 < theta, in net-id order.
// Throws BadThreshold unless 0 < theta < 0.5.
std::vector<RareNet> rare_nets(const ActivityReport& report, double theta);

struct PowerProxy {
    double value = 0.0;
    std::optional<double> ratio;  // value / baseline when a baseline was given
};

// Sum over gate-driven nets of toggles * (1 + fanout). Primary inputs are
// driven off-chip and do not count.
PowerProxy power_proxy(const Netlist& netlist, const ActivityReport& report,
                       std::optional<PowerProxy> baseline = std::nullopt);

// Same sum restricted to nets driven by gates tagged `tag`.
double instance_power(const Netlist& netlist, const ActivityReport& report, const std::string& tag);

}  // namespace axt
