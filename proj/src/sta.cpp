#include "axt/sta.hpp"

#include "axt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace axt {

namespace {

constexpr double kEps = 1e-9;

// Slack as an integer key so that floating sums with equal values compare equal.
std::int64_t quantize(double x) { return std::llround(x * 1e6); }

}  // namespace

void DelayModel::validate() const
{
    if (!(scale > 0.0)) throw BadParams("delay scale must be positive");
    for (double d : delay)
        if (d < 0.0) throw BadParams("gate delays must be non-negative");
}

double TimingReport::min_slack() const
{
    double m = kNoRequirement;
    for (double s : slack) m = std::min(m, s);
    return m;
}

TimingReport sta(const Netlist& netlist, const DelayModel& model, double clock)
{
    model.validate();
    if (!(clock > 0.0)) throw BadParams("clock must be positive");
    const auto order = topo_order(netlist);
    const std::size_t nn = netlist.num_nets();
    TimingReport r;
    r.clock = clock;
    r.arrival.assign(nn, 0.0);
    r.required.assign(nn, kNoRequirement);
    r.slack.assign(nn, kNoRequirement);

    for (GateId id : order) {
        const auto& g = netlist.gate(id);
        double a = 0.0;
        for (NetId n : g.inputs) a = std::max(a, r.arrival[n]);
        r.arrival[g.output] = a + model.of(g.kind);
    }
    for (NetId n : netlist.primary_outputs()) {
        r.required[n] = clock;
        r.critical_delay = std::max(r.critical_delay, r.arrival[n]);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& g = netlist.gate(*it);
        const double req = r.required[g.output] - model.of(g.kind);
        for (NetId n : g.inputs) r.required[n] = std::min(r.required[n], req);
    }
    for (NetId n = 0; n < nn; ++n) r.slack[n] = r.required[n] - r.arrival[n];
    return r;
}

namespace {

// Sorted, de-duplicated set of delays from a net to any primary output.
using DelaySet = std::vector<double>;

void insert_sorted(DelaySet& set, const DelaySet& add, double offset)
{
    DelaySet merged;
    merged.reserve(set.size() + add.size());
    std::size_t i = 0, j = 0;
    auto push = [&](double v) {
        if (merged.empty() || v - merged.back() > kEps) merged.push_back(v);
    };
    while (i < set.size() || j < add.size()) {
        if (j == add.size() || (i < set.size() && set[i] <= add[j] + offset))
            push(set[i++]);
        else
            push(add[j++] + offset);
    }
    set = std::move(merged);
}

struct State {
    std::int64_t key;  // quantized best achievable slack
    bool terminal;
    double delay;
    std::vector<NetId> nets;
    std::vector<GateId> gates;
};

struct Later {
    bool operator()(const State& a, const State& b) const
    {
        if (a.key != b.key) return a.key > b.key;
        if (a.nets != b.nets) return a.nets > b.nets;
        return a.terminal && !b.terminal;  // expand before emitting the same prefix
    }
};

}  // namespace

std::vector<TimingPath> near_critical_paths(const Netlist& netlist, const DelayModel& model, double clock,
                                            std::size_t n, double window)
{
    if (n == 0) throw BadParams("path count N must be positive");
    if (window < 0.0) throw BadParams("slack window must be non-negative");
    model.validate();
    if (!(clock > 0.0)) throw BadParams("clock must be positive");

    const auto order = topo_order(netlist);
    std::vector<DelaySet> remain(netlist.num_nets());
    for (NetId o : netlist.primary_outputs()) remain[o] = {0.0};
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& g = netlist.gate(*it);
        if (remain[g.output].empty()) continue;
        for (NetId in : g.inputs) insert_sorted(remain[in], remain[g.output], model.of(g.kind));
    }

    // Largest completion from `net` keeping total delay <= clock, as a slack.
    auto best_slack = [&](NetId net, double delay, double& out) {
        const auto& set = remain[net];
        const double budget = clock - delay + kEps;
        auto it = std::upper_bound(set.begin(), set.end(), budget);
        if (it == set.begin()) return false;
        out = clock - delay - *(it - 1);
        return out <= window + kEps;
    };

    std::priority_queue<State, std::vector<State>, Later> open;
    for (NetId pi : netlist.primary_inputs()) {
        double s = 0.0;
        if (best_slack(pi, 0.0, s)) open.push(State{quantize(s), false, 0.0, {pi}, {}});
    }

    std::vector<TimingPath> result;
    while (!open.empty() && result.size() < n) {
        State st = open.top();
        open.pop();
        if (st.terminal) {
            TimingPath p;
            p.delay = st.delay;
            p.slack = clock - st.delay;
            p.nets = std::move(st.nets);
            p.gates = std::move(st.gates);
            for (GateId gid : p.gates) {
                const auto& tag = netlist.gate(gid).tag;
                if (!tag.empty() && std::find(p.tags.begin(), p.tags.end(), tag) == p.tags.end())
                    p.tags.push_back(tag);
            }
            result.push_back(std::move(p));
            continue;
        }
        const NetId last = st.nets.back();
        if (netlist.is_output(last)) {
            const double s = clock - st.delay;
            if (s >= -kEps && s <= window + kEps) open.push(State{quantize(s), true, st.delay, st.nets, st.gates});
        }
        std::vector<GateId> readers = netlist.readers(last);
        std::sort(readers.begin(), readers.end());
        readers.erase(std::unique(readers.begin(), readers.end()), readers.end());
        for (GateId gid : readers) {
            const auto& g = netlist.gate(gid);
            const double d = st.delay + model.of(g.kind);
            double s = 0.0;
            if (!best_slack(g.output, d, s)) continue;
            State next{quantize(s), false, d, st.nets, st.gates};
            next.nets.push_back(g.output);
            next.gates.push_back(gid);
            open.push(std::move(next));
        }
    }
    return result;
}

std::vector<std::pair<std::string, std::size_t>> paths_to_instances(const std::vector<TimingPath>& paths,
                                                                    const Netlist& netlist)
{
    std::map<std::string, std::size_t> hits;
    for (const auto& p : paths) {
        std::vector<std::string> seen;
        for (GateId gid : p.gates) {
            const auto& tag = netlist.gate(gid).tag;
            if (tag.empty() || std::find(seen.begin(), seen.end(), tag) != seen.end()) continue;
            seen.push_back(tag);
            ++hits[tag];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> out(hits.begin(), hits.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace axt
