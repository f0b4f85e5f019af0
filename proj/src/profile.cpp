#include "axt/profile.hpp"

#include "axt/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace axt {

ErrorReport error_metrics(std::span<const std::uint64_t> actual, std::span<const std::uint64_t> reference)
{
    if (actual.size() != reference.size()) throw StreamMismatch("actual and reference lengths differ");
    ErrorReport r;
    r.n_vectors = actual.size();
    if (actual.empty()) return r;
    std::size_t wrong = 0;
    double sum_ed = 0.0, sum_red = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const std::uint64_t a = actual[t], e = reference[t];
        const std::uint64_t ed = a > e ? a - e : e - a;
        if (ed == 0) continue;
        ++wrong;
        sum_ed += static_cast<double>(ed);
        sum_red += static_cast<double>(ed) / static_cast<double>(std::max<std::uint64_t>(1, e));
        r.wce = std::max(r.wce, ed);
    }
    const auto n = static_cast<double>(actual.size());
    r.er = static_cast<double>(wrong) / n;
    r.med = sum_ed / n;
    r.mred = sum_red / n;
    return r;
}

ErrorReport error_profile(const Netlist& netlist, const ReferenceFn& reference, const VectorSet& stream)
{
    auto actual = Simulator(netlist).outputs(stream);
    std::vector<std::uint64_t> ref(stream.size());
    for (std::size_t t = 0; t < stream.size(); ++t) ref[t] = reference(stream.row(t));
    return error_metrics(actual, ref);
}

ErrorReport error_profile(const Netlist& netlist, const ArchParams& params, const VectorSet& stream)
{
    if (stream.num_words() < 2) throw StreamMismatch("arithmetic reference needs two operand words");
    return error_profile(
        netlist,
        [&](std::span<const std::uint64_t> row) { return exact_oracle(params.op, row[0], row[1], params.width); },
        stream);
}

ActivityReport activity_profile(const Traces& traces)
{
    ActivityReport r;
    r.total_cycles = traces.n_vectors();
    r.ones.assign(traces.n_nets(), 0);
    r.toggles.assign(traces.n_nets(), 0);
    for (NetId n = 0; n < traces.n_nets(); ++n) {
        std::uint64_t prev_last = 0;
        for (std::size_t b = 0; b < traces.n_blocks(); ++b) {
            const std::uint64_t mask = traces.lane_mask(b);
            const std::uint64_t v = traces.block(n, b) & mask;
            r.ones[n] += static_cast<std::uint64_t>(std::popcount(v));
            std::uint64_t diff = (v ^ ((v << 1) | prev_last)) & mask;
            if (b == 0) diff &= ~std::uint64_t{1};  // vector 0 has no predecessor
            r.toggles[n] += static_cast<std::uint64_t>(std::popcount(diff));
            prev_last = v >> 63;
        }
    }
    return r;
}

ActivityReport activity_profile(const Simulator& sim, const VectorSet& vectors)
{
    sim.check_signature(vectors);
    const std::size_t nn = sim.netlist().num_nets();
    ActivityReport r;
    r.total_cycles = vectors.size();
    r.ones.assign(nn, 0);
    r.toggles.assign(nn, 0);
    std::vector<std::uint64_t> values(nn), prev_last(nn, 0);
    const std::size_t n_blocks = (vectors.size() + 63) / 64;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        sim.eval_block(vectors, b, values);
        const std::size_t lanes = std::min<std::size_t>(64, vectors.size() - b * 64);
        const std::uint64_t mask = lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
        for (NetId n = 0; n < nn; ++n) {
            const std::uint64_t v = values[n] & mask;
            r.ones[n] += static_cast<std::uint64_t>(std::popcount(v));
            std::uint64_t diff = (v ^ ((v << 1) | prev_last[n])) & mask;
            if (b == 0) diff &= ~std::uint64_t{1};
            r.toggles[n] += static_cast<std::uint64_t>(std::popcount(diff));
            prev_last[n] = (v >> (lanes - 1)) & 1U;
        }
    }
    return r;
}

std::vector<RareNet> rare_nets(const ActivityReport& report, double theta)
{
    if (!(theta > 0.0 && theta < 0.5)) throw BadThreshold("theta must satisfy 0 < theta < 0.5");
    std::vector<RareNet> out;
    for (NetId n = 0; n < report.size(); ++n) {
        const double p1 = report.p1(n);
        if (p1 < theta) out.push_back({n, true});
        if (1.0 - p1 < theta) out.push_back({n, false});
    }
    return out;
}

namespace {

double net_power(const Netlist& netlist, const ActivityReport& report, NetId n)
{
    return static_cast<double>(report.toggles[n]) * static_cast<double>(1 + netlist.fanout(n));
}

}  // namespace

PowerProxy power_proxy(const Netlist& netlist, const ActivityReport& report, std::optional<PowerProxy> baseline)
{
    if (report.size() != netlist.num_nets()) throw StreamMismatch("activity report is for a different netlist");
    PowerProxy p;
    for (const auto& g : netlist.gates()) p.value += net_power(netlist, report, g.output);
    if (baseline) p.ratio = baseline->value > 0.0 ? p.value / baseline->value : (p.value > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    return p;
}

double instance_power(const Netlist& netlist, const ActivityReport& report, const std::string& tag)
{
    if (report.size() != netlist.num_nets()) throw StreamMismatch("activity report is for a different netlist");
    double v = 0.0;
    for (GateId id : netlist.gates_with_tag(tag)) v += net_power(netlist, report, netlist.gate(id).output);
    return v;
}

}  // namespace axt
