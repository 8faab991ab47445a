#include "disclab/setsplit.hpp"

#include <random>

#include "disclab/rng.hpp"
#include "doctest.h"

using namespace disclab;

namespace {

SetSplitInstance make_instance(int n, std::vector<std::array<int, 4>> sets,
                               int b = 3) {
  SetSplitInstance instance;
  instance.n = n;
  instance.b = b;
  instance.sets = std::move(sets);
  return instance;
}

Assignment make_assignment(std::vector<int> values) {
  Assignment a;
  a.values = std::move(values);
  return a;
}

// Independent check for the exhaustive search: a second enumeration that
// walks masks in reverse and recomputes every set sum from scratch.
double reverse_enumeration_min_fraction(const SetSplitInstance& instance) {
  const int n = instance.n;
  const int m = instance.m();
  int best = m + 1;
  for (long long mask = (1LL << n) - 1; mask >= 0; --mask) {
    int unsplit = 0;
    for (const auto& set : instance.sets) {
      int sum = 0;
      for (int e : set)
        sum += ((mask >> (n - 1 - (e - 1))) & 1) ? -1 : 1;
      if (sum != 0) ++unsplit;
    }
    best = std::min(best, unsplit);
  }
  return static_cast<double>(best) / m;
}

}  // namespace

TEST_SUITE("setsplit") {

TEST_CASE("evaluate splits a balanced set") {
  const auto instance = make_instance(4, {{{1, 2, 3, 4}}});
  const auto report = evaluate(instance, make_assignment({1, 1, -1, -1}));
  CHECK(report.split_count == 1);
  CHECK(report.unsplit_count == 0);
  CHECK(report.per_set_sums == std::vector<int>{0});
}

TEST_CASE("evaluate flags an all-equal set as unsplit") {
  const auto instance = make_instance(4, {{{1, 2, 3, 4}}});
  const auto report = evaluate(instance, make_assignment({1, 1, 1, 1}));
  CHECK(report.unsplit_count == 1);
  CHECK(report.per_set_sums == std::vector<int>{4});
  CHECK(report.unsplit_fraction == doctest::Approx(1.0));
}

TEST_CASE("evaluate handles overlapping sets") {
  const auto instance = make_instance(5, {{{1, 2, 3, 4}, {1, 2, 3, 5}}});
  const auto report = evaluate(instance, make_assignment({1, -1, 1, -1, -1}));
  CHECK(report.split_count == 2);
}

TEST_CASE("evaluate rejects length mismatch") {
  const auto instance = make_instance(4, {{{1, 2, 3, 4}}});
  CHECK_THROWS_AS(evaluate(instance, make_assignment({1, 1, -1})), Error);
  try {
    evaluate(instance, make_assignment({1, 1, -1}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension);
  }
}

TEST_CASE("per-set sums negate with the assignment") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto instance = generate_random(10, 6, 3, 100 + trial);
    Assignment a;
    for (int i = 0; i < 10; ++i) a.values.push_back(uniform_sign(rng));
    Assignment neg;
    for (int v : a.values) neg.values.push_back(-v);
    const auto r1 = evaluate(instance, a);
    const auto r2 = evaluate(instance, neg);
    CHECK(r1.split_count == r2.split_count);
    for (int j = 0; j < instance.m(); ++j)
      CHECK(r1.per_set_sums[j] == -r2.per_set_sums[j]);
  }
}

TEST_CASE("exhaustive search finds the splitting assignment") {
  const auto instance = make_instance(4, {{{1, 2, 3, 4}}});
  const auto result = exhaustive_min_unsplit(instance);
  CHECK(result.min_unsplit_fraction == 0.0);
  CHECK(evaluate(instance, result.best).split_count == 1);
}

TEST_CASE("exhaustive search on an empty family is zero by convention") {
  const auto instance = make_instance(4, {});
  const auto result = exhaustive_min_unsplit(instance);
  CHECK(result.min_unsplit_fraction == 0.0);
  CHECK(result.min_unsplit_count == 0);
}

TEST_CASE("exhaustive search matches a reversed re-enumeration") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const auto instance = generate_random(12, 8, 3, seed);
    const auto result = exhaustive_min_unsplit(instance);
    CHECK(result.min_unsplit_fraction ==
          doctest::Approx(reverse_enumeration_min_fraction(instance)));
    CHECK(evaluate(instance, result.best).unsplit_count ==
          result.min_unsplit_count);
  }
}

TEST_CASE("exhaustive search is identical across thread counts") {
  const auto instance = generate_random(14, 9, 3, 5);
  ExhaustiveOptions one;
  one.threads = 1;
  ExhaustiveOptions four;
  four.threads = 4;
  const auto r1 = exhaustive_min_unsplit(instance, one);
  const auto r4 = exhaustive_min_unsplit(instance, four);
  CHECK(r1.min_unsplit_count == r4.min_unsplit_count);
  CHECK(r1.best.values == r4.best.values);
}

TEST_CASE("exhaustive search respects the cap") {
  const auto instance = generate_random(12, 8, 3, 1);
  ExhaustiveOptions options;
  options.cap = 10;
  CHECK_THROWS_AS(exhaustive_min_unsplit(instance, options), Error);
}

TEST_CASE("tie-break picks the lexicographically smallest assignment") {
  // A single set: many assignments split it; all-plus-on-the-rest with the
  // first balanced labeling (+,+,-,-) is lexicographically first.
  const auto instance = make_instance(4, {{{1, 2, 3, 4}}});
  const auto result = exhaustive_min_unsplit(instance);
  CHECK(result.best.values == std::vector<int>{1, 1, -1, -1});
}

TEST_CASE("generate_random obeys its invariants") {
  const auto instance = generate_random(8, 6, 3, 1);
  instance.validate();
  CHECK(instance.n == 8);
  CHECK(instance.m() == 6);
}

TEST_CASE("generate_random rejects infeasible parameters") {
  CHECK_THROWS_AS(generate_random(4, 4, 3, 7), Error);
  try {
    generate_random(4, 4, 3, 7);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
  }
}

TEST_CASE("generate_random keeps occurrence bounds at scale") {
  const auto instance = generate_random(100, 75, 3, 42);
  for (int deg : instance.occurrences()) CHECK(deg <= 3);
}

TEST_CASE("generate_random is deterministic") {
  const auto a = generate_random(10, 7, 3, 99);
  const auto b = generate_random(10, 7, 3, 99);
  CHECK(a.sets == b.sets);
}

TEST_CASE("planted instances are split by their witness") {
  for (std::uint64_t seed : {3u, 9u}) {
    const auto planted = generate_satisfiable(8, 4, 3, seed);
    const auto report = evaluate(planted.instance, planted.witness);
    CHECK(report.unsplit_count == 0);
  }
  const auto big = generate_satisfiable(40, 30, 3, 9);
  CHECK(evaluate(big.instance, big.witness).unsplit_count == 0);
}

TEST_CASE("planted instances are exhaustively satisfiable") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto planted = generate_satisfiable(10, 6, 3, seed);
    CHECK(exhaustive_min_unsplit(planted.instance).min_unsplit_fraction == 0.0);
  }
}

TEST_CASE("planted generation is deterministic") {
  const auto a = generate_satisfiable(8, 4, 3, 3);
  const auto b = generate_satisfiable(8, 4, 3, 3);
  CHECK(a.instance.sets == b.instance.sets);
  CHECK(a.witness.values == b.witness.values);
}

TEST_CASE("validate catches duplicate elements and bound violations") {
  auto bad = make_instance(4, {{{1, 1, 3, 4}}});
  CHECK_THROWS_AS(bad.validate(), Error);
  auto over = make_instance(8, {{{1, 2, 3, 4}},
                                {{1, 2, 3, 5}},
                                {{1, 2, 4, 5}},
                                {{1, 3, 4, 5}}},
                            3);
  // element 1 occurs 4 times with b = 3
  CHECK_THROWS_AS(over.validate(), Error);
}

}  // TEST_SUITE
