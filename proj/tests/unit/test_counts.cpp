#include <doctest.h>

#include <map>

#include "dirate/counts.hpp"
#include "dirate/model_zoo.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace dirate;

namespace {

// Decode a flat block index into the literal symbol tuple
// (x_0..x_k, y_0..y_k) using plain div/mod arithmetic.
std::vector<int> decode_block(std::int64_t index, int k, int m, int ell) {
    const std::int64_t arity = static_cast<std::int64_t>(m) * ell;
    std::vector<int> xs(static_cast<std::size_t>(k + 1)), ys(static_cast<std::size_t>(k + 1));
    for (int j = k; j >= 0; --j) {
        std::int64_t s = index % arity;
        index /= arity;
        xs[static_cast<std::size_t>(j)] = static_cast<int>(s) / ell;
        ys[static_cast<std::size_t>(j)] = static_cast<int>(s) % ell;
    }
    std::vector<int> key = xs;
    key.insert(key.end(), ys.begin(), ys.end());
    return key;
}

std::map<std::vector<int>, std::int64_t> as_tuple_map(const ContextCounts& counts) {
    std::map<std::vector<int>, std::int64_t> out;
    for (const auto& [index, count] : counts.counts()) {
        out[decode_block(index, counts.order(), counts.m(), counts.ell())] = count;
    }
    return out;
}

} // namespace

TEST_CASE("count_blocks on a hand-checked pair") {
    SymbolSequencePair pair({0, 1, 0}, {0, 0, 1}, Alphabet{2}, Alphabet{2}, 1);
    auto counts = count_blocks(pair);
    CHECK(counts.n() == 2);
    auto tuples = as_tuple_map(counts);
    // blocks ((x_{i-1},x_i),(y_{i-1},y_i)): ((0,1),(0,0)) and ((1,0),(0,1))
    CHECK(tuples.at({0, 1, 0, 0}) == 1);
    CHECK(tuples.at({1, 0, 0, 1}) == 1);
    CHECK(tuples.size() == 2);
}

TEST_CASE("count_blocks on constant sequences") {
    SymbolSequencePair pair({0, 0, 0, 0}, {0, 0, 0, 0}, Alphabet{2}, Alphabet{2}, 1);
    auto counts = count_blocks(pair);
    CHECK(counts.n() == 3);
    CHECK(counts.counts().size() == 1);
    CHECK(counts.counts().begin()->second == 3);
}

TEST_CASE("count_blocks matches the naive re-scan oracle") {
    auto model = random_positive_joint_model(2, 2, 3, 42);
    auto pair = simulate(model, 10000, 7);
    auto counts = count_blocks(pair);
    CHECK(counts.n() == 10000);
    auto got = as_tuple_map(counts);
    auto want = oracle::naive_block_recount(pair);
    CHECK(got == want);
}

TEST_CASE("sharded counting with k-overlap merges to the single-pass result") {
    auto model = random_positive_joint_model(2, 2, 2, 5);
    auto pair = simulate(model, 3000, 9);
    const int k = pair.order();

    auto whole = count_blocks(pair);

    // Shards split at an arbitrary cut; the second shard re-reads the
    // k symbols before the cut as its initial context.
    const std::int64_t cut = 1234;
    auto slice = [&](std::int64_t from, std::int64_t to) {
        std::vector<int> x(pair.x().begin() + from, pair.x().begin() + to);
        std::vector<int> y(pair.y().begin() + from, pair.y().begin() + to);
        return SymbolSequencePair(x, y, pair.alphabet_x(), pair.alphabet_y(), k);
    };
    auto left = count_blocks(slice(0, cut));
    auto right = count_blocks(slice(cut - k, pair.length()));
    left.merge(right);

    CHECK(left.n() == whole.n());
    CHECK(as_tuple_map(left) == as_tuple_map(whole));
}

TEST_CASE("merge rejects mismatched dimensions") {
    ContextCounts a(1, Alphabet{2}, Alphabet{2});
    ContextCounts b(2, Alphabet{2}, Alphabet{2});
    CHECK_THROWS_AS(a.merge(b), ValidationError);
}

TEST_CASE("counts export and reload round trip") {
    auto model = random_positive_joint_model(1, 2, 2, 3);
    auto counts = count_blocks(simulate(model, 500, 1));

    testutil::TempFile file("counts");
    save_counts(file.path(), counts);
    auto loaded = load_counts(file.path());
    CHECK(loaded.n() == counts.n());
    CHECK(loaded.order() == counts.order());
    CHECK(as_tuple_map(loaded) == as_tuple_map(counts));
}

TEST_CASE("count_pairs and pair_law") {
    SymbolSequence seq({0, 1, 0, 1, 0}, Alphabet{2});
    auto counts = count_pairs(seq);
    CHECK(counts.n() == 4);
    CHECK(counts.at(0, 1) == 2);
    CHECK(counts.at(1, 0) == 2);
    CHECK(counts.at(0, 0) == 0);

    auto law = pair_law(counts);
    CHECK(law[1] == 0.5); // (0,1)
    CHECK(law[2] == 0.5); // (1,0)

    CHECK_THROWS_AS(count_pairs(SymbolSequence({0}, Alphabet{2})), ValidationError);
}
