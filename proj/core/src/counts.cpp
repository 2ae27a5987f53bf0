#include "dirate/counts.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace dirate {

namespace {

constexpr std::int64_t kMaxDenseCells = std::int64_t{1} << 22;

std::int64_t checked_cells(int k, int m, int ell) {
    std::int64_t cells = 1;
    for (int j = 0; j <= k; ++j) {
        if (cells > (std::int64_t{1} << 56) / (m * ell)) {
            throw ValidationError("block space (m*ell)^(k+1) overflows the index type");
        }
        cells *= static_cast<std::int64_t>(m) * ell;
    }
    return cells;
}

} // namespace

ContextCounts::ContextCounts(int k, Alphabet a, Alphabet b)
    : k_(k), a_(a), b_(b), num_cells_(0) {
    if (k < 1) throw ValidationError("order k must be >= 1");
    if (a.size < 1 || b.size < 1) throw ValidationError("alphabet sizes must be >= 1");
    num_cells_ = checked_cells(k_, a_.size, b_.size);
}

void ContextCounts::add(std::int64_t block_index, std::int64_t count) {
    if (block_index < 0 || block_index >= num_cells_) {
        throw ValidationError("block index out of range");
    }
    if (count < 0) throw ValidationError("negative count");
    counts_[block_index] += count;
    n_ += count;
}

void ContextCounts::merge(const ContextCounts& other) {
    if (other.k_ != k_ || !(other.a_ == a_) || !(other.b_ == b_)) {
        throw ValidationError("merge: shards counted over different (k, m, ell)");
    }
    for (const auto& [index, count] : other.counts_) {
        counts_[index] += count;
    }
    n_ += other.n_;
}

ContextCounts count_blocks(const SymbolSequencePair& pair) {
    const int k = pair.order();
    const int ell = pair.alphabet_y().size;
    const std::int64_t arity = static_cast<std::int64_t>(pair.alphabet_x().size) * ell;

    ContextCounts counts(k, pair.alphabet_x(), pair.alphabet_y());
    std::int64_t context_span = 1;
    for (int j = 0; j < k; ++j) context_span *= arity;

    const auto& x = pair.x();
    const auto& y = pair.y();
    std::int64_t block = 0;
    for (int j = 0; j <= k; ++j) {
        block = block * arity + (static_cast<std::int64_t>(x[static_cast<std::size_t>(j)]) * ell +
                                 y[static_cast<std::size_t>(j)]);
    }
    counts.add(block);
    for (std::int64_t i = k + 1; i < pair.length(); ++i) {
        std::int64_t s = static_cast<std::int64_t>(x[static_cast<std::size_t>(i)]) * ell +
                         y[static_cast<std::size_t>(i)];
        block = (block % context_span) * arity + s;
        counts.add(block);
    }
    return counts;
}

DiscreteDistribution empirical_law(const ContextCounts& counts) {
    if (counts.n() < 1) throw ValidationError("empirical_law: no observations");
    const std::int64_t cells = counts.num_cells();
    if (cells > kMaxDenseCells) {
        throw ValidationError("block space too large to densify (" + std::to_string(cells) +
                              " cells > 2^22)");
    }
    std::vector<double> pmf(static_cast<std::size_t>(cells), 0.0);
    const double n = static_cast<double>(counts.n());
    for (const auto& [index, count] : counts.counts()) {
        pmf[static_cast<std::size_t>(index)] = static_cast<double>(count) / n;
    }
    std::vector<int> radices;
    radices.reserve(2 * static_cast<std::size_t>(counts.order() + 1));
    for (int j = 0; j <= counts.order(); ++j) {
        radices.push_back(counts.m());
        radices.push_back(counts.ell());
    }
    return DiscreteDistribution(std::move(pmf), std::move(radices));
}

namespace block_slots {

namespace {
std::vector<bool> make(int k, bool x_old, bool y_old, bool x_new, bool y_new) {
    std::vector<bool> mask(2 * static_cast<std::size_t>(k + 1), false);
    for (int j = 0; j < k; ++j) {
        mask[2 * static_cast<std::size_t>(j)] = x_old;
        mask[2 * static_cast<std::size_t>(j) + 1] = y_old;
    }
    mask[2 * static_cast<std::size_t>(k)] = x_new;
    mask[2 * static_cast<std::size_t>(k) + 1] = y_new;
    return mask;
}
} // namespace

std::vector<bool> all(int k) { return make(k, true, true, true, true); }
std::vector<bool> context(int k) { return make(k, true, true, false, false); }
std::vector<bool> x_full(int k) { return make(k, true, false, true, false); }
std::vector<bool> y_full(int k) { return make(k, false, true, false, true); }
std::vector<bool> y_context(int k) { return make(k, false, true, false, false); }
std::vector<bool> x_full_y_context(int k) { return make(k, true, true, true, false); }

} // namespace block_slots

void save_counts(const std::string& path, const ContextCounts& counts) {
    std::vector<std::pair<std::int64_t, std::int64_t>> entries(counts.counts().begin(),
                                                               counts.counts().end());
    std::sort(entries.begin(), entries.end());

    nlohmann::json doc;
    doc["k"] = counts.order();
    doc["m"] = counts.m();
    doc["ell"] = counts.ell();
    doc["n"] = counts.n();
    auto& list = doc["entries"] = nlohmann::json::array();
    for (const auto& [index, count] : entries) {
        list.push_back({index, count});
    }

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

ContextCounts load_counts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open counts file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("counts file " + path + ": " + e.what());
    }
    ContextCounts counts(doc.at("k").get<int>(), Alphabet{doc.at("m").get<int>()},
                         Alphabet{doc.at("ell").get<int>()});
    for (const auto& entry : doc.at("entries")) {
        counts.add(entry.at(0).get<std::int64_t>(), entry.at(1).get<std::int64_t>());
    }
    if (counts.n() != doc.at("n").get<std::int64_t>()) {
        throw ValidationError("counts file " + path + ": entries do not sum to n");
    }
    return counts;
}

PairCounts::PairCounts(Alphabet a) : a_(a) {
    if (a.size < 1) throw ValidationError("alphabet size must be >= 1");
    counts_.assign(static_cast<std::size_t>(a.size) * static_cast<std::size_t>(a.size), 0);
}

void PairCounts::add(int from, int to, std::int64_t count) {
    if (!a_.contains(from) || !a_.contains(to)) throw ValidationError("symbol out of range");
    counts_[static_cast<std::size_t>(from) * static_cast<std::size_t>(a_.size) +
            static_cast<std::size_t>(to)] += count;
    n_ += count;
}

PairCounts count_pairs(const SymbolSequence& seq) {
    if (seq.length() < 2) {
        throw ValidationError("need at least two symbols to count transitions");
    }
    PairCounts counts(seq.alphabet());
    const auto& s = seq.symbols();
    for (std::size_t i = 1; i < s.size(); ++i) {
        counts.add(s[i - 1], s[i]);
    }
    return counts;
}

DiscreteDistribution pair_law(const PairCounts& counts) {
    if (counts.n() < 1) throw ValidationError("pair_law: no observations");
    const int m = counts.m();
    std::vector<double> pmf(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    const double n = static_cast<double>(counts.n());
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            pmf[static_cast<std::size_t>(a) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(b)] = static_cast<double>(counts.at(a, b)) / n;
        }
    }
    return DiscreteDistribution(std::move(pmf), {m, m});
}

} // namespace dirate
