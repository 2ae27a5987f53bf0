#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dirate/distribution.hpp"
#include "dirate/sequences.hpp"

namespace dirate {

// A (k+1)-block over the pair process is the tuple
// ((x_{i-k},y_{i-k}), ..., (x_i,y_i)). Pair symbols s = x*ell + y are
// the digits of a base-(m*ell) integer, oldest digit most significant,
// which coincides with the mixed-radix index of the interleaved slot
// layout (x_0, y_0, x_1, y_1, ..., x_k, y_k).

/// Counts of (k+1)-blocks — the sufficient statistic for every
/// estimator. Stored sparse; densifiable while (m*ell)^(k+1) <= 2^22.
class ContextCounts {
public:
    ContextCounts(int k, Alphabet a, Alphabet b);

    int order() const noexcept { return k_; }
    int m() const noexcept { return a_.size; }
    int ell() const noexcept { return b_.size; }
    std::int64_t n() const noexcept { return n_; }
    std::int64_t num_cells() const noexcept { return num_cells_; }

    const std::unordered_map<std::int64_t, std::int64_t>& counts() const noexcept {
        return counts_;
    }

    void add(std::int64_t block_index, std::int64_t count = 1);

    /// Associative merge with a shard counted over the same (k, m, ell).
    void merge(const ContextCounts& other);

private:
    int k_;
    Alphabet a_, b_;
    std::int64_t num_cells_;
    std::unordered_map<std::int64_t, std::int64_t> counts_;
    std::int64_t n_ = 0;
};

/// Single left-to-right pass with O(1) incremental block-index update.
ContextCounts count_blocks(const SymbolSequencePair& pair);

/// counts / n as a block law with interleaved slots; no smoothing,
/// zero-count blocks carry zero mass.
DiscreteDistribution empirical_law(const ContextCounts& counts);

/// Slot masks into a (k+1)-block law (2(k+1) slots, interleaved).
namespace block_slots {
std::vector<bool> all(int k);
std::vector<bool> context(int k);          ///< both streams, steps 0..k-1
std::vector<bool> x_full(int k);           ///< x_0..x_k
std::vector<bool> y_full(int k);           ///< y_0..y_k
std::vector<bool> y_context(int k);        ///< y_0..y_{k-1}
std::vector<bool> x_full_y_context(int k); ///< x_0..x_k, y_0..y_{k-1}
} // namespace block_slots

/// Reproducibility export: {k, m, ell, n, entries: [[index, count]...]},
/// entries sorted by index.
void save_counts(const std::string& path, const ContextCounts& counts);
ContextCounts load_counts(const std::string& path);

/// Bivariate counts of consecutive pairs (X_{i-1}, X_i) of a single
/// stream — the sufficient statistic of the mutual-information
/// estimator and both of its likelihood closed forms.
class PairCounts {
public:
    explicit PairCounts(Alphabet a);

    int m() const noexcept { return a_.size; }
    std::int64_t n() const noexcept { return n_; }
    std::int64_t at(int from, int to) const noexcept {
        return counts_[static_cast<std::size_t>(from) * static_cast<std::size_t>(a_.size) +
                       static_cast<std::size_t>(to)];
    }

    void add(int from, int to, std::int64_t count = 1);

private:
    Alphabet a_;
    std::vector<std::int64_t> counts_;
    std::int64_t n_ = 0;
};

PairCounts count_pairs(const SymbolSequence& seq);

/// counts / n as a two-slot law over (X_0, X_1).
DiscreteDistribution pair_law(const PairCounts& counts);

} // namespace dirate
