#include "axt/sim.hpp"

#include "axt/errors.hpp"
#include "axt/rng.hpp"

#include <algorithm>

namespace axt {

// ---------------------------------------------------------------- VectorSet

VectorSet::VectorSet(std::vector<std::string> names, std::vector<int> widths)
    : names_(std::move(names)), widths_(std::move(widths))
{
    if (names_.size() != widths_.size()) throw StreamMismatch("word names and widths differ in length");
    for (int w : widths_)
        if (w < 1 || w > 64) throw StreamMismatch("word widths must be in [1, 64]");
}

VectorSet VectorSet::for_netlist(const Netlist& netlist)
{
    std::vector<std::string> names;
    std::vector<int> widths;
    for (const auto& w : netlist.input_words()) {
        names.push_back(w.name);
        widths.push_back(static_cast<int>(w.width()));
    }
    return VectorSet(std::move(names), std::move(widths));
}

void VectorSet::push_back(std::span<const std::uint64_t> row)
{
    if (row.size() != num_words()) throw StreamMismatch("row has the wrong number of words");
    for (std::size_t w = 0; w < row.size(); ++w) {
        if (widths_[w] < 64 && (row[w] >> widths_[w]) != 0)
            throw StreamMismatch("value of word '" + names_[w] + "' exceeds its width");
    }
    values_.insert(values_.end(), row.begin(), row.end());
    ++count_;
}

void VectorSet::append(const VectorSet& other)
{
    if (!same_signature(other)) throw StreamMismatch("cannot append vectors with a different signature");
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    count_ += other.count_;
}

VectorSet VectorSet::slice(std::size_t begin, std::size_t end) const
{
    VectorSet out(names_, widths_);
    for (std::size_t t = begin; t < end && t < size(); ++t) out.push_back(row(t));
    return out;
}

VectorSet generate_stream(std::vector<std::string> names, std::vector<int> widths, const StreamConfig& config)
{
    if (config.mode == StreamMode::Correlated && (config.rho < 0.0 || config.rho > 1.0))
        throw BadParams("rho must lie in [0, 1]");
    VectorSet out(std::move(names), std::move(widths));
    Rng rng(config.seed);
    const auto& ws = out.widths();
    std::vector<std::uint64_t> row(ws.size());
    for (std::size_t t = 0; t < config.n_vectors; ++t) {
        for (std::size_t w = 0; w < ws.size(); ++w) {
            if (t == 0 || config.mode == StreamMode::Uniform) {
                row[w] = rng.bits(ws[w]);
                continue;
            }
            std::uint64_t v = row[w];
            for (int bit = 0; bit < ws[w]; ++bit) {
                if (rng.chance(config.rho)) continue;
                std::uint64_t mask = std::uint64_t{1} << bit;
                v = (rng.next() & 1U) ? (v | mask) : (v & ~mask);
            }
            row[w] = v;
        }
        out.push_back(row);
    }
    return out;
}

VectorSet generate_stream(const Netlist& netlist, const StreamConfig& config)
{
    auto proto = VectorSet::for_netlist(netlist);
    return generate_stream(proto.names(), proto.widths(), config);
}

VectorSet exhaustive_stream(const Netlist& netlist)
{
    auto out = VectorSet::for_netlist(netlist);
    int total = 0;
    for (int w : out.widths()) total += w;
    if (total > 26) throw BadParams("exhaustive stream limited to 26 input bits");
    std::vector<std::uint64_t> row(out.num_words());
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << total); ++t) {
        int shift = 0;
        for (std::size_t w = 0; w < row.size(); ++w) {
            row[w] = (t >> shift) & ((std::uint64_t{1} << out.widths()[w]) - 1);
            shift += out.widths()[w];
        }
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------- Traces

Traces::Traces(std::size_t n_nets, std::size_t n_vectors)
    : n_nets_(n_nets), n_vectors_(n_vectors), n_blocks_((n_vectors + 63) / 64), bits_(n_nets * n_blocks_, 0)
{
}

std::uint64_t Traces::lane_mask(std::size_t b) const
{
    if (b + 1 < n_blocks_ || n_vectors_ % 64 == 0) return ~std::uint64_t{0};
    return (std::uint64_t{1} << (n_vectors_ % 64)) - 1;
}

// ---------------------------------------------------------------- Simulator

Simulator::Simulator(const Netlist& netlist) : netlist_(&netlist), in_words_(netlist.input_words())
{
    for (GateId id : topo_order(netlist)) {
        const auto& g = netlist.gate(id);
        ops_.push_back(Op{g.kind, g.output, static_cast<std::uint32_t>(inputs_.size()),
                          static_cast<std::uint32_t>(g.inputs.size())});
        inputs_.insert(inputs_.end(), g.inputs.begin(), g.inputs.end());
    }
}

void Simulator::check_signature(const VectorSet& vectors) const
{
    if (vectors.num_words() != in_words_.size())
        throw StreamMismatch("stream has " + std::to_string(vectors.num_words()) + " words, netlist expects " +
                             std::to_string(in_words_.size()));
    for (std::size_t w = 0; w < in_words_.size(); ++w) {
        if (vectors.names()[w] != in_words_[w].name ||
            static_cast<std::size_t>(vectors.widths()[w]) != in_words_[w].width())
            throw StreamMismatch("stream word '" + vectors.names()[w] + "' does not match netlist word '" +
                                 in_words_[w].name + "'");
    }
}

void Simulator::eval(std::span<std::uint64_t> v) const
{
    for (const auto& op : ops_) {
        const NetId* in = inputs_.data() + op.first;
        std::uint64_t r = 0;
        switch (op.kind) {
        case GateKind::And:
        case GateKind::Nand:
            r = v[in[0]];
            for (std::uint32_t i = 1; i < op.count; ++i) r &= v[in[i]];
            if (op.kind == GateKind::Nand) r = ~r;
            break;
        case GateKind::Or:
        case GateKind::Nor:
            r = v[in[0]];
            for (std::uint32_t i = 1; i < op.count; ++i) r |= v[in[i]];
            if (op.kind == GateKind::Nor) r = ~r;
            break;
        case GateKind::Xor:
        case GateKind::Xnor:
            r = v[in[0]];
            for (std::uint32_t i = 1; i < op.count; ++i) r ^= v[in[i]];
            if (op.kind == GateKind::Xnor) r = ~r;
            break;
        case GateKind::Not: r = ~v[in[0]]; break;
        case GateKind::Buf: r = v[in[0]]; break;
        case GateKind::Mux2: r = (v[in[0]] & v[in[2]]) | (~v[in[0]] & v[in[1]]); break;
        case GateKind::Const0: r = 0; break;
        case GateKind::Const1: r = ~std::uint64_t{0}; break;
        }
        v[op.out] = r;
    }
}

void Simulator::eval_block(const VectorSet& vectors, std::size_t b, std::span<std::uint64_t> values) const
{
    const std::size_t begin = b * 64;
    const std::size_t end = std::min(vectors.size(), begin + 64);
    for (std::size_t w = 0; w < in_words_.size(); ++w) {
        const auto& bits = in_words_[w].bits;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            std::uint64_t lane = 0;
            for (std::size_t t = begin; t < end; ++t) lane |= ((vectors.value(t, w) >> i) & 1U) << (t - begin);
            values[bits[i]] = lane;
        }
    }
    eval(values);
}

Traces Simulator::run(const VectorSet& vectors) const
{
    check_signature(vectors);
    const std::size_t nn = netlist_->num_nets();
    Traces tr(nn, vectors.size());
    std::vector<std::uint64_t> values(nn, 0);
    for (std::size_t b = 0; b < tr.n_blocks(); ++b) {
        eval_block(vectors, b, values);
        const std::uint64_t mask = tr.lane_mask(b);
        for (NetId n = 0; n < nn; ++n) tr.block(n, b) = values[n] & mask;
    }
    return tr;
}

std::vector<std::uint64_t> Simulator::outputs(const VectorSet& vectors) const
{
    check_signature(vectors);
    const auto& pos = netlist_->primary_outputs();
    if (pos.size() > 64) throw BadParams("output packing supports at most 64 primary outputs");
    std::vector<std::uint64_t> out(vectors.size(), 0);
    std::vector<std::uint64_t> values(netlist_->num_nets(), 0);
    const std::size_t n_blocks = (vectors.size() + 63) / 64;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        eval_block(vectors, b, values);
        const std::size_t begin = b * 64;
        const std::size_t end = std::min(vectors.size(), begin + 64);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            std::uint64_t lane = values[pos[i]];
            for (std::size_t t = begin; t < end; ++t) out[t] |= ((lane >> (t - begin)) & 1U) << i;
        }
    }
    return out;
}

Traces simulate(const Netlist& netlist, const VectorSet& vectors) { return Simulator(netlist).run(vectors); }

std::uint64_t output_value(const Netlist& netlist, const Traces& traces, std::size_t t)
{
    const auto& pos = netlist.primary_outputs();
    if (pos.size() > 64) throw BadParams("output packing supports at most 64 primary outputs");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) v |= static_cast<std::uint64_t>(traces.value(pos[i], t)) << i;
    return v;
}

}  // namespace axt
