#pragma once

#include <string>

#include "dirate/sequences.hpp"

namespace dirate {

/// Accepted line layouts for paired sequence files. One (x, y) pair per
/// line, '#' starts a comment, blank lines are skipped.
enum class SequenceFormat {
    auto_detect, ///< comma if the line contains one, whitespace otherwise
    csv,         ///< "x,y"
    whitespace,  ///< "x y" (any run of spaces/tabs)
};

/// Reads and validates a paired sequence file. The first k data rows
/// become the initial context; sample size is rows - k.
SymbolSequencePair load_sequences(const std::string& path, SequenceFormat format,
                                  Alphabet a, Alphabet b, int k);

/// Writes the pair in the ingestion format ("x,y" lines). Loading the
/// result with the same alphabets and k reproduces the pair exactly.
void save_sequences(const std::string& path, const SymbolSequencePair& pair);

} // namespace dirate
