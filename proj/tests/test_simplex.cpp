#include "disclab/simplex.hpp"

#include <random>

#include "disclab/rng.hpp"
#include "doctest.h"

using namespace disclab;

namespace {

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, const std::vector<char>& types,
                  int reserve = 0) {
  SimplexSolver solver(a, b, c, types, reserve);
  return solver.solve();
}

}  // namespace

TEST_SUITE("simplex") {

TEST_CASE("a textbook two-variable program") {
  // min -x - 2y  s.t. x + y <= 4, x <= 2, y <= 3  ->  x=1, y=3, obj -7
  Eigen::MatrixXd a(3, 2);
  a << 1, 1, 1, 0, 0, 1;
  Eigen::VectorXd b(3);
  b << 4, 2, 3;
  Eigen::VectorXd c(2);
  c << -1, -2;
  const auto result = solve_lp(a, b, c, {'<', '<', '<'});
  REQUIRE(result.status == LpStatus::optimal);
  CHECK(result.objective == doctest::Approx(-7.0));
  CHECK(result.x(0) == doctest::Approx(1.0));
  CHECK(result.x(1) == doctest::Approx(3.0));
}

TEST_CASE("equality constraints route through phase one") {
  // min x + y  s.t. x + 2y = 3, x - y = 0  ->  x = y = 1
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 1, -1;
  Eigen::VectorXd b(2);
  b << 3, 0;
  Eigen::VectorXd c = Eigen::VectorXd::Ones(2);
  const auto result = solve_lp(a, b, c, {'=', '='});
  REQUIRE(result.status == LpStatus::optimal);
  CHECK(result.x(0) == doctest::Approx(1.0));
  CHECK(result.x(1) == doctest::Approx(1.0));
}

TEST_CASE("negative equality right-hand sides are handled") {
  // mean-style row with negative target: x - y = -0.5, x + y = 1
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, 1, 1;
  Eigen::VectorXd b(2);
  b << -0.5, 1.0;
  const auto result = solve_lp(a, b, Eigen::VectorXd::Zero(2), {'=', '='});
  REQUIRE(result.status == LpStatus::optimal);
  CHECK(result.x(0) == doctest::Approx(0.25));
  CHECK(result.x(1) == doctest::Approx(0.75));
}

TEST_CASE("infeasible systems are detected") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;  // x = 1 and x = 2
  const auto result = solve_lp(a, b, Eigen::VectorXd::Zero(1), {'=', '='});
  CHECK(result.status == LpStatus::infeasible);
}

TEST_CASE("unbounded detection") {
  // min -x with only x >= 0
  Eigen::MatrixXd a(1, 1);
  a << 0;
  Eigen::VectorXd b(1);
  b << 0;
  Eigen::VectorXd c(1);
  c << -1;
  const auto result = solve_lp(a, b, c, {'<'});
  CHECK(result.status == LpStatus::unbounded);
}

TEST_CASE("appending rows re-optimizes with the dual simplex") {
  // Start: min -x - y s.t. x <= 3, y <= 3 -> obj -6 at (3,3).
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 0, 1;
  Eigen::VectorXd b(2);
  b << 3, 3;
  Eigen::VectorXd c(2);
  c << -1, -1;
  SimplexSolver solver(a, b, c, {'<', '<'}, 4);
  auto result = solver.solve();
  REQUIRE(result.status == LpStatus::optimal);
  CHECK(result.objective == doctest::Approx(-6.0));

  Eigen::VectorXd cut(2);
  cut << 1, 1;  // x + y <= 4
  result = solver.add_row_and_resolve(cut, 4.0);
  REQUIRE(result.status == LpStatus::optimal);
  CHECK(result.objective == doctest::Approx(-4.0));
  CHECK(result.x(0) + result.x(1) == doctest::Approx(4.0));

  Eigen::VectorXd tighter(2);
  tighter << 2, 1;  // 2x + y <= 4: optimum moves to (1/2, 3)
  result = solver.add_row_and_resolve(tighter, 4.0);
  REQUIRE(result.status == LpStatus::optimal);
  CHECK(result.objective == doctest::Approx(-3.5));
  CHECK(result.x(0) == doctest::Approx(0.5));
  CHECK(result.x(1) == doctest::Approx(3.0));
}

TEST_CASE("random feasibility problems agree with a direct construction") {
  // Mean-matching problems of the oracle's shape: columns are +-1 vectors,
  // the target is a convex combination of them, so feasibility must hold.
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 4));   // signs
    const int k = 2 + static_cast<int>(uniform_below(rng, 5));   // atoms
    Eigen::MatrixXd a(n + 1, k);
    for (int col = 0; col < k; ++col) {
      for (int row = 0; row < n; ++row) a(row, col) = uniform_sign(rng);
      a(n, col) = 1.0;
    }
    Eigen::VectorXd weights(k);
    double total = 0.0;
    for (int col = 0; col < k; ++col) {
      weights(col) = uniform_unit(rng) + 1e-3;
      total += weights(col);
    }
    weights /= total;
    Eigen::VectorXd b = a * weights;
    const auto result = solve_lp(a, b, Eigen::VectorXd::Zero(k),
                                 std::vector<char>(n + 1, '='));
    REQUIRE(result.status == LpStatus::optimal);
    CHECK((a * result.x - b).lpNorm<Eigen::Infinity>() <= 1e-9);
    for (int col = 0; col < k; ++col) CHECK(result.x(col) >= -1e-9);
  }
}

TEST_CASE("random bounded programs match brute-force vertex enumeration") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    // min c^T x s.t. x_i <= u_i, sum x <= s: optimum is raising the most
    // negative costs to their bounds until the budget binds. Verify against a
    // greedy reference.
    const int n = 4;
    Eigen::MatrixXd a(n + 1, n);
    a.setZero();
    Eigen::VectorXd b(n + 1);
    for (int i = 0; i < n; ++i) {
      a(i, i) = 1.0;
      b(i) = 1.0 + uniform_unit(rng);
    }
    a.row(n).setOnes();
    b(n) = 2.0;
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = uniform_unit(rng) - 0.7;

    const auto result = solve_lp(a, b, c, std::vector<char>(n + 1, '<'));
    REQUIRE(result.status == LpStatus::optimal);

    // Greedy reference.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int l, int r) { return c(l) < c(r); });
    double budget = 2.0, objective = 0.0;
    for (int i : order) {
      if (c(i) >= 0.0 || budget <= 0.0) continue;
      const double amount = std::min(budget, b(i));
      objective += c(i) * amount;
      budget -= amount;
    }
    CHECK(result.objective == doctest::Approx(objective).epsilon(1e-9));
  }
}

TEST_CASE("deterministic across repeated solves") {
  Eigen::MatrixXd a(3, 5);
  a << 1, 1, 0, 2, -1, 0, 1, 1, -1, 2, 1, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 2, 1, 3;
  Eigen::VectorXd c(5);
  c << 1, -1, 0.5, -2, 0;
  const auto first = solve_lp(a, b, c, {'<', '<', '<'});
  const auto second = solve_lp(a, b, c, {'<', '<', '<'});
  REQUIRE(first.status == second.status);
  CHECK(first.objective == second.objective);
  CHECK((first.x - second.x).lpNorm<Eigen::Infinity>() == 0.0);
}

}  // TEST_SUITE
