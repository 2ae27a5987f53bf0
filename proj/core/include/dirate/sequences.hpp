#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dirate/errors.hpp"

namespace dirate {

/// Finite alphabet {0, 1, ..., size-1}.
struct Alphabet {
    int size = 0;

    bool contains(long long symbol) const noexcept {
        return symbol >= 0 && symbol < size;
    }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

/// Integer-coded sequence over one alphabet.
class SymbolSequence {
public:
    SymbolSequence(std::vector<int> symbols, Alphabet alphabet);

    const std::vector<int>& symbols() const noexcept { return symbols_; }
    Alphabet alphabet() const noexcept { return alphabet_; }
    std::int64_t length() const noexcept { return static_cast<std::int64_t>(symbols_.size()); }

private:
    std::vector<int> symbols_;
    Alphabet alphabet_;
};

/// Aligned pair of integer-coded sample paths, including the length-k
/// initial context. With L rows, the usable sample size is n = L - k:
/// the first k rows seed the context, the remaining n rows are the
/// transitions every estimator counts.
class SymbolSequencePair {
public:
    SymbolSequencePair(std::vector<int> x, std::vector<int> y,
                       Alphabet a, Alphabet b, int order_k);

    const std::vector<int>& x() const noexcept { return x_; }
    const std::vector<int>& y() const noexcept { return y_; }
    Alphabet alphabet_x() const noexcept { return a_; }
    Alphabet alphabet_y() const noexcept { return b_; }
    int order() const noexcept { return k_; }
    std::int64_t length() const noexcept { return static_cast<std::int64_t>(x_.size()); }
    std::int64_t sample_size() const noexcept { return length() - k_; }

private:
    std::vector<int> x_, y_;
    Alphabet a_, b_;
    int k_;
};

enum class Column { x, y };

/// One coordinate stream of the pair, with its alphabet.
SymbolSequence univariate_view(const SymbolSequencePair& pair, Column column);

} // namespace dirate
