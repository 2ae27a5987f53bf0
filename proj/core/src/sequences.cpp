#include "dirate/sequences.hpp"

#include <string>

namespace dirate {

namespace {

void check_alphabet(const Alphabet& alphabet, const char* which) {
    if (alphabet.size < 1) {
        throw ValidationError(std::string("alphabet ") + which + " must have size >= 1");
    }
}

void check_symbols(const std::vector<int>& symbols, const Alphabet& alphabet, const char* which) {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (!alphabet.contains(symbols[i])) {
            throw ValidationError(std::string("symbol ") + std::to_string(symbols[i]) +
                                  " at position " + std::to_string(i) + " of " + which +
                                  " is outside alphabet of size " + std::to_string(alphabet.size));
        }
    }
}

} // namespace

SymbolSequence::SymbolSequence(std::vector<int> symbols, Alphabet alphabet)
    : symbols_(std::move(symbols)), alphabet_(alphabet) {
    check_alphabet(alphabet_, "A");
    check_symbols(symbols_, alphabet_, "sequence");
}

SymbolSequencePair::SymbolSequencePair(std::vector<int> x, std::vector<int> y,
                                       Alphabet a, Alphabet b, int order_k)
    : x_(std::move(x)), y_(std::move(y)), a_(a), b_(b), k_(order_k) {
    check_alphabet(a_, "A");
    check_alphabet(b_, "B");
    if (k_ < 1) {
        throw ValidationError("order k must be >= 1");
    }
    if (x_.size() != y_.size()) {
        throw ValidationError("x and y streams differ in length (" + std::to_string(x_.size()) +
                              " vs " + std::to_string(y_.size()) + ")");
    }
    if (length() - k_ < 1) {
        throw ValidationError("need at least k+1 = " + std::to_string(k_ + 1) +
                              " rows, got " + std::to_string(length()));
    }
    check_symbols(x_, a_, "x");
    check_symbols(y_, b_, "y");
}

SymbolSequence univariate_view(const SymbolSequencePair& pair, Column column) {
    if (column == Column::x) {
        return SymbolSequence(pair.x(), pair.alphabet_x());
    }
    return SymbolSequence(pair.y(), pair.alphabet_y());
}

} // namespace dirate
