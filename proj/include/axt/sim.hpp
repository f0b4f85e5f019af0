#pragma once

#include "axt/netlist.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace axt {

enum class StreamMode { Uniform, Correlated };

struct StreamConfig {
    std::size_t n_vectors = 1000;
    std::uint64_t seed = 1;
    StreamMode mode = StreamMode::Uniform;
    double rho = 0.0;  // CORRELATED: probability a bit repeats its previous value
};

// Word-level input vectors matching a netlist's input signature. Row t holds
// one value per input word.
class VectorSet {
public:
    VectorSet() = default;
    VectorSet(std::vector<std::string> names, std::vector<int> widths);
    static VectorSet for_netlist(const Netlist& netlist);

    std::size_t size() const { return num_words() == 0 ? count_ : values_.size() / num_words(); }
    std::size_t num_words() const { return widths_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& widths() const { return widths_; }

    std::uint64_t value(std::size_t t, std::size_t word) const { return values_[t * num_words() + word]; }
    std::span<const std::uint64_t> row(std::size_t t) const
    {
        return {values_.data() + t * num_words(), num_words()};
    }
    void push_back(std::span<const std::uint64_t> row);
    void append(const VectorSet& other);
    VectorSet slice(std::size_t begin, std::size_t end) const;

    bool same_signature(const VectorSet& other) const
    {
        return names_ == other.names_ && widths_ == other.widths_;
    }

private:
    std::vector<std::string> names_;
    std::vector<int> widths_;
    std::vector<std::uint64_t> values_;
    std::size_t count_ = 0;  // rows of a zero-word signature
};

// Deterministic given (seed, mode, rho, n_vectors, word widths). CORRELATED:
// each bit repeats its previous value with probability rho, else is redrawn.
VectorSet generate_stream(const Netlist& netlist, const StreamConfig& config);
VectorSet generate_stream(std::vector<std::string> names, std::vector<int> widths, const StreamConfig& config);

// Every input combination; word 0 occupies the lowest bits of the counter.
VectorSet exhaustive_stream(const Netlist& netlist);

// Bit-parallel per-net value traces: 64 vectors per machine word.
class Traces {
public:
    Traces() = default;
    Traces(std::size_t n_nets, std::size_t n_vectors);

    std::size_t n_vectors() const { return n_vectors_; }
    std::size_t n_blocks() const { return n_blocks_; }
    std::size_t n_nets() const { return n_nets_; }

    bool value(NetId net, std::size_t t) const { return (block(net, t / 64) >> (t % 64)) & 1U; }
    std::uint64_t block(NetId net, std::size_t b) const { return bits_[net * n_blocks_ + b]; }
    std::uint64_t& block(NetId net, std::size_t b) { return bits_[net * n_blocks_ + b]; }
    // Valid-lane mask of block b.
    std::uint64_t lane_mask(std::size_t b) const;

private:
    std::size_t n_nets_ = 0;
    std::size_t n_vectors_ = 0;
    std::size_t n_blocks_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Compiled evaluator: gates in topological order over a flat value array.
class Simulator {
public:
    explicit Simulator(const Netlist& netlist);  // throws CycleError

    const Netlist& netlist() const { return *netlist_; }

    // Full per-net traces. Throws StreamMismatch on signature mismatch.
    Traces run(const VectorSet& vectors) const;

    // Primary-output values per vector, bit i = primary output i.
    std::vector<std::uint64_t> outputs(const VectorSet& vectors) const;

    // Loads block `b` (vectors 64b..64b+63) into `values` and evaluates all
    // gates. `values` must have num_nets() entries.
    void eval_block(const VectorSet& vectors, std::size_t b, std::span<std::uint64_t> values) const;

    void check_signature(const VectorSet& vectors) const;

private:
    struct Op {
        GateKind kind;
        NetId out;
        std::uint32_t first;  // offset into inputs_
        std::uint32_t count;
    };

    void eval(std::span<std::uint64_t> values) const;

    const Netlist* netlist_;
    std::vector<Op> ops_;
    std::vector<NetId> inputs_;
    std::vector<Word> in_words_;
};

Traces simulate(const Netlist& netlist, const VectorSet& vectors);

// Packs primary outputs of vector t from traces (bit i = output i).
std::uint64_t output_value(const Netlist& netlist, const Traces& traces, std::size_t t);

}  // namespace axt
