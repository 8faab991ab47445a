#include "disclab/reduce_zero.hpp"

#include <random>

#include "disclab/covariance.hpp"
#include "disclab/rng.hpp"
#include "doctest.h"

using namespace disclab;

namespace {

SetSplitInstance single_set_instance() {
  SetSplitInstance instance;
  instance.n = 4;
  instance.b = 3;
  instance.sets = {{1, 2, 3, 4}};
  return instance;
}

Assignment random_assignment(int n, std::mt19937_64& rng) {
  Assignment a;
  for (int i = 0; i < n; ++i) a.values.push_back(uniform_sign(rng));
  return a;
}

// Gadget subvector restricted to a block, unscaled, in block-coordinate order.
std::vector<int> restrict_to_block(const VectorFamily& family, int column,
                                   const VectorFamily::GadgetBlock& block) {
  std::vector<int> out(static_cast<std::size_t>(block.width), 0);
  for (const auto& e : family.columns[static_cast<std::size_t>(column)]) {
    const int offset = e.coord - block.first_coord;
    if (offset >= 0 && offset < block.width)
      out[static_cast<std::size_t>(offset)] = e.value;
  }
  return out;
}

}  // namespace

TEST_SUITE("reduce_zero") {

TEST_CASE("dimensions for the all-degree-one instance") {
  const auto family = build_vector_family(single_set_instance());
  CHECK(family.d == 17);  // 1 set + 4 blocks of width 4
  CHECK(family.N == 12);  // 4 elements + 2 gadgets each
  CHECK(family.n1 == 4);
  CHECK(family.n2 == 0);
}

TEST_CASE("columns have exactly three unit entries") {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto instance = generate_random(10, 7, 3, seed);
    if ([&] {
          for (int deg : instance.occurrences())
            if (deg == 0) return true;
          return false;
        }())
      continue;
    const auto family = build_vector_family(instance);
    for (const auto& column : family.columns) {
      REQUIRE(column.size() == 3);
      for (const auto& e : column) CHECK(std::abs(e.value) == 1);
    }
    const Eigen::MatrixXd dense = family.dense_columns();
    for (int j = 0; j < family.N; ++j)
      CHECK(dense.col(j).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("degree-1 gadget matches the displayed block pattern") {
  const auto family = build_vector_family(single_set_instance());
  REQUIRE(family.blocks.size() == 4);
  const auto& block = family.blocks[0];  // element 1
  CHECK(block.width == 4);
  // columns: 0 = v_1, and roles identify u_{1,1}, u_{1,2}
  int u1 = -1, u2 = -1;
  for (int j = 0; j < family.N; ++j) {
    if (family.roles[j].element == 1 && family.roles[j].gadget == 1) u1 = j;
    if (family.roles[j].element == 1 && family.roles[j].gadget == 2) u2 = j;
  }
  REQUIRE(u1 >= 0);
  REQUIRE(u2 >= 0);
  CHECK(restrict_to_block(family, 0, block) == std::vector<int>{1, 1, 0, 0});
  CHECK(restrict_to_block(family, u1, block) == std::vector<int>{1, 0, 1, 1});
  CHECK(restrict_to_block(family, u2, block) == std::vector<int>{0, -1, 1, 1});
}

TEST_CASE("degree-2 gadget matches the displayed block pattern") {
  // Element 1 occurs twice, the rest once.
  SetSplitInstance instance;
  instance.n = 7;
  instance.b = 3;
  instance.sets = {{1, 2, 3, 4}, {1, 5, 6, 7}};
  const auto family = build_vector_family(instance);
  CHECK(family.n1 == 6);
  CHECK(family.n2 == 1);
  CHECK(family.d == 2 + 4 * 6 + 5);
  CHECK(family.N == 7 + 2 * 6 + 3);

  const VectorFamily::GadgetBlock* block = nullptr;
  for (const auto& candidate : family.blocks)
    if (candidate.element == 1) block = &candidate;
  REQUIRE(block != nullptr);
  CHECK(block->width == 5);
  int u1 = -1, u2 = -1, u3 = -1;
  for (int j = 0; j < family.N; ++j) {
    if (family.roles[j].element != 1) continue;
    if (family.roles[j].gadget == 1) u1 = j;
    if (family.roles[j].gadget == 2) u2 = j;
    if (family.roles[j].gadget == 3) u3 = j;
  }
  CHECK(restrict_to_block(family, 0, *block) == std::vector<int>{1, 0, 0, 0, 0});
  CHECK(restrict_to_block(family, u1, *block) == std::vector<int>{1, 1, 1, 0, 0});
  CHECK(restrict_to_block(family, u2, *block) == std::vector<int>{0, 1, 0, 1, 1});
  CHECK(restrict_to_block(family, u3, *block) == std::vector<int>{0, 0, -1, 1, 1});
}

TEST_CASE("construction rejects uncovered or overloaded elements") {
  SetSplitInstance uncovered;
  uncovered.n = 5;  // element 5 occurs nowhere
  uncovered.b = 3;
  uncovered.sets = {{1, 2, 3, 4}};
  CHECK_THROWS_AS(build_vector_family(uncovered), Error);

  SetSplitInstance overloaded;
  overloaded.n = 8;
  overloaded.b = 4;
  overloaded.sets = {{1, 2, 3, 4}, {1, 2, 5, 6}, {1, 3, 7, 8}, {1, 4, 5, 7}};
  CHECK_THROWS_AS(build_vector_family(overloaded), Error);
  try {
    build_vector_family(overloaded);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::construction);
  }
}

TEST_CASE("gadget signs follow the assignment") {
  const auto family = build_vector_family(single_set_instance());
  Assignment z;
  z.values = {1, -1, 1, -1};
  const Eigen::VectorXi y = complete_signing(family, z);
  for (int j = family.n; j < family.N; ++j) {
    const auto& role = family.roles[j];
    const int zi = z.values[role.element - 1];
    CHECK(y(j) == (role.gadget % 2 == 1 ? -zi : zi));
  }
}

TEST_CASE("completed signings zero every gadget coordinate exactly") {
  std::mt19937_64 rng(2024);
  int built = 0;
  for (std::uint64_t seed = 0; built < 12 && seed < 200; ++seed) {
    const auto instance = generate_random(12, 8, 3, seed);
    bool covered = true;
    for (int deg : instance.occurrences()) covered &= deg >= 1;
    if (!covered) continue;
    ++built;
    const auto family = build_vector_family(instance);
    for (int trial = 0; trial < 16; ++trial) {
      const Assignment z = random_assignment(instance.n, rng);
      const Eigen::VectorXi y = complete_signing(family, z);
      const Eigen::VectorXi w = signed_sum_unscaled(family, y);
      for (int coord = family.m; coord < family.d; ++coord)
        REQUIRE(w(coord) == 0);
      // Set coordinates reproduce the set sums.
      const auto report = evaluate(instance, z);
      for (int j = 0; j < family.m; ++j)
        REQUIRE(w(j) == report.per_set_sums[j]);
    }
  }
  CHECK(built == 12);
}

TEST_CASE("zero covariance distribution from a splitting assignment") {
  const auto family = build_vector_family(single_set_instance());
  Assignment z;
  z.values = {1, 1, -1, -1};
  const auto dist = zero_cov_distribution(family, z);
  dist.validate();
  CHECK(dist.mean().isZero(0.0));
  const auto report = covariance_of(family.dense_columns(), dist);
  CHECK(report.op_norm <= 1e-12);
}

TEST_CASE("zero covariance distribution rejects non-splitting assignments") {
  const auto family = build_vector_family(single_set_instance());
  Assignment z;
  z.values = {1, 1, 1, 1};
  CHECK_THROWS_AS(zero_cov_distribution(family, z), Error);
  try {
    zero_cov_distribution(family, z);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
}

TEST_CASE("trace gap bound") {
  const auto family = build_vector_family(single_set_instance());
  CHECK(trace_gap_bound(family, 1.0) == doctest::Approx(12.0 / 17.0));
  CHECK(trace_gap_bound(family, 0.0) == 0.0);
  CHECK_THROWS_AS(trace_gap_bound(family, 1.5), Error);

  // Any family built from a (3,2-2) instance clears 4 gamma / 23.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto instance = generate_random(12, 8, 3, seed);
    bool covered = true;
    for (int deg : instance.occurrences()) covered &= deg >= 1;
    if (!covered) continue;
    const auto fam = build_vector_family(instance);
    CHECK(trace_gap_bound(fam, 1.0) >= 4.0 / 23.0 - 1e-12);
  }
}

}  // TEST_SUITE
