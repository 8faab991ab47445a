#include "disclab/reduce_biased.hpp"

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

Assignment splitting_assignment() {
  Assignment z;
  z.values = {1, 1, -1, -1};
  return z;
}

}  // namespace

TEST_SUITE("reduce_biased") {

TEST_CASE("single-set family with p=0, q=1") {
  const auto family =
      build_biased_family(single_set_instance(), Rational(0), Rational(1));
  CHECK(family.D() == 3);
  CHECK(family.N() == 6);
  CHECK(family.beta == Rational(1));
  const Eigen::VectorXd x0 = family.x0();
  Eigen::VectorXd expected(6);
  expected << 0, 0, 0, 0, 1, -1;
  CHECK((x0 - expected).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("incidence rows sum to 4 and the projector behaves") {
  const auto planted = generate_satisfiable(10, 5, 3, 21);
  const auto family =
      build_biased_family(planted.instance, Rational(3, 10), Rational(1, 2));
  CHECK((family.A.rowwise().sum().array() == 4).all());

  const int m = family.m;
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(m, m) -
                               Eigen::MatrixXd::Constant(m, m, 1.0 / m);
  CHECK((proj * Eigen::VectorXd::Ones(m)).isZero(1e-12));
  CHECK((proj * proj - proj).lpNorm<Eigen::Infinity>() <= 1e-12);

  // The dense matrix embeds the projector blocks.
  const Eigen::MatrixXd mat = family.M();
  CHECK((mat.block(m, family.n, m, m) - proj).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("target mean is exactly in the kernel") {
  for (const auto& [p, q] : std::vector<std::pair<Rational, Rational>>{
           {Rational(0), Rational(0)},
           {Rational(3, 10), Rational(1, 2)},
           {Rational(9, 10), Rational(1)},
           {Rational(-1, 2), Rational(1, 3)}}) {
    const auto planted = generate_satisfiable(8, 5, 3, 4);
    const auto family = build_biased_family(planted.instance, p, q);
    CHECK(family.mean_in_kernel_exact());
    CHECK((family.M() * family.x0()).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("middle block column norm for m=4") {
  const auto planted = generate_satisfiable(8, 4, 3, 3);
  REQUIRE(planted.instance.m() == 4);
  const auto family =
      build_biased_family(planted.instance, Rational(0), Rational(1, 2));
  const Eigen::MatrixXd mat = family.M();
  // -2 e_j stacked over a projector column: 4 + (3/4)^2 + 3/16.
  CHECK(mat.col(family.n).squaredNorm() == doctest::Approx(4.75).epsilon(1e-12));
  CHECK(family.scale() <= std::sqrt(6.0));
  for (int j = 0; j < family.N(); ++j)
    CHECK(family.scaled_columns().col(j).norm() <= 1.0 + 1e-12);
}

TEST_CASE("build rejects out-of-range parameters") {
  CHECK_THROWS_AS(
      build_biased_family(single_set_instance(), Rational(2), Rational(0)),
      Error);
  CHECK_THROWS_AS(
      build_biased_family(single_set_instance(), Rational(0), Rational(-3, 2)),
      Error);
  SetSplitInstance empty;
  empty.n = 4;
  empty.b = 3;
  CHECK_THROWS_AS(build_biased_family(empty, Rational(0), Rational(1)), Error);
}

TEST_CASE("five-point distribution at p=0, q=1") {
  const auto family =
      build_biased_family(single_set_instance(), Rational(0), Rational(1));
  const auto dist = five_point_distribution(family, splitting_assignment());
  REQUIRE(dist.support.size() == 5);
  CHECK(dist.support[0].prob == 0.0);
  CHECK(dist.support[1].prob == doctest::Approx(0.5));
  CHECK(dist.support[2].prob == doctest::Approx(0.5));
  CHECK(dist.support[3].prob == 0.0);
  CHECK(dist.support[4].prob == 0.0);
  dist.validate();
}

TEST_CASE("five-point support lies in the kernel and has zero covariance") {
  for (const auto& [p, q] : std::vector<std::pair<Rational, Rational>>{
           {Rational(0), Rational(1)},
           {Rational(3, 10), Rational(1, 2)},
           {Rational(-2, 5), Rational(4, 5)}}) {
    const auto planted = generate_satisfiable(8, 5, 3, 17);
    const auto family = build_biased_family(planted.instance, p, q);
    const auto dist = five_point_distribution(family, planted.witness);
    dist.validate();
    CHECK((dist.mean() - family.x0()).lpNorm<Eigen::Infinity>() <= 1e-12);

    const auto rows = family.int_rows();
    for (const auto& atom : dist.support)
      CHECK((rows * atom.x.cast<std::int64_t>()).isZero(0));
    const auto report = covariance_of(family.M(), dist);
    CHECK(report.op_norm <= 1e-12);
  }
}

TEST_CASE("five-point distribution rejects non-splitting assignments") {
  const auto family =
      build_biased_family(single_set_instance(), Rational(0), Rational(1));
  Assignment z;
  z.values = {1, 1, 1, -1};
  CHECK_THROWS_AS(five_point_distribution(family, z), Error);
}

TEST_CASE("three-term split vanishes on the five-point distribution") {
  const auto planted = generate_satisfiable(8, 4, 3, 3);
  const auto family =
      build_biased_family(planted.instance, Rational(1, 5), Rational(1, 2));
  const auto dist = five_point_distribution(family, planted.witness);
  const auto terms = three_term_decomposition(family, dist);
  CHECK(terms.discrepancy <= 1e-20);
  CHECK(terms.proj_second <= 1e-20);
  CHECK(terms.proj_third <= 1e-20);
}

TEST_CASE("three-term split on a point mass with aligned blocks") {
  const auto planted = generate_satisfiable(8, 4, 3, 3);
  REQUIRE(planted.instance.m() == 4);
  const auto family =
      build_biased_family(planted.instance, Rational(0), Rational(0));
  // Deterministic signing (z, 1, 1): A z = 0, so the first block contributes
  // ||-4 * ones||^2 = 64; both projector blocks vanish on constants.
  SigningDistribution dist;
  dist.target_mean = Eigen::VectorXd::Zero(family.N());
  Eigen::VectorXi x(family.N());
  for (int i = 0; i < family.n; ++i) x(i) = planted.witness.values[i];
  for (int i = 0; i < 2 * family.m; ++i) x(family.n + i) = 1;
  dist.support.push_back({x, 1.0});
  dist.target_mean = dist.mean();

  // target mean must equal x0 for the decomposition; here it does not, so the
  // helper refuses. Validate the refusal, then check the raw block values.
  CHECK_THROWS_AS(three_term_decomposition(family, dist), Error);
  const Eigen::VectorXd xd = x.cast<double>();
  const Eigen::MatrixXd a = family.A.cast<double>();
  const double t1 =
      (a * xd.head(family.n) -
       2.0 * (xd.segment(family.n, family.m) + xd.tail(family.m)))
          .squaredNorm();
  CHECK(t1 == doctest::Approx(64.0));
}

TEST_CASE("covariance dominates each block term") {
  const auto planted = generate_satisfiable(8, 4, 3, 5);
  const auto family =
      build_biased_family(planted.instance, Rational(0), Rational(1, 2));
  // Push some mass off the kernel while keeping the mean: take the pair
  // {(z', 1, -1), (-z', 1, -1)} for a non-splitting z' and draw the same mass
  // from the matching five-point pair. All first-block terms cancel and the
  // biased blocks are untouched.
  SigningDistribution dist = five_point_distribution(family, planted.witness);
  Assignment off = planted.witness;
  off.values[0] = -off.values[0];
  REQUIRE(evaluate(planted.instance, off).unsplit_count > 0);
  Eigen::VectorXi plus(family.N()), minus(family.N());
  for (int i = 0; i < family.n; ++i) {
    plus(i) = off.values[i];
    minus(i) = -off.values[i];
  }
  for (int i = 0; i < family.m; ++i) {
    plus(family.n + i) = minus(family.n + i) = 1;
    plus(family.n + family.m + i) = minus(family.n + family.m + i) = -1;
  }
  const double eps = 0.05;
  REQUIRE(dist.support[1].prob >= eps);
  REQUIRE(dist.support[2].prob >= eps);
  dist.support[1].prob -= eps;
  dist.support[2].prob -= eps;
  dist.support.push_back({plus, eps});
  dist.support.push_back({minus, eps});
  dist.validate();

  const auto terms = three_term_decomposition(family, dist);
  CHECK(terms.discrepancy > 0.0);
  const auto report = covariance_of(family.M(), dist);
  CHECK(report.op_norm >= terms.max() / family.D() - 1e-9);
}

TEST_CASE("alpha statistics and the projector identity") {
  Eigen::VectorXi ones = Eigen::VectorXi::Constant(4, 1);
  CHECK(alpha_mean(ones) == 1.0);
  Eigen::VectorXi balanced(4);
  balanced << 1, 1, -1, -1;
  CHECK(alpha_mean(balanced) == 0.0);
  Eigen::VectorXi tilted(4);
  tilted << 1, 1, 1, -1;
  CHECK(alpha_mean(tilted) == doctest::Approx(0.5));

  // ||P y||^2 = (1 - alpha^2) m, exhaustively for m <= 12.
  for (int m : {1, 2, 3, 4, 6, 9, 12}) {
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(m, m) -
                                 Eigen::MatrixXd::Constant(m, m, 1.0 / m);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      Eigen::VectorXi y(m);
      for (int i = 0; i < m; ++i) y(i) = (mask >> i) & 1 ? -1 : 1;
      const double alpha = alpha_mean(y);
      const double lhs = (proj * y.cast<double>()).squaredNorm();
      REQUIRE(lhs == doctest::Approx((1.0 - alpha * alpha) * m).epsilon(1e-10));
    }
  }
  Eigen::VectorXi bad(2);
  bad << 1, 0;
  CHECK_THROWS_AS(alpha_mean(bad), Error);
}

TEST_CASE("negative p uses the all-minus deterministic atom") {
  const auto family = build_biased_family(single_set_instance(), Rational(-1, 2),
                                          Rational(1, 2));
  CHECK(family.beta == Rational(1, 4));
  const auto dist = five_point_distribution(family, splitting_assignment());
  CHECK(dist.support[0].x(0) == -1);
  CHECK(dist.support[0].prob == doctest::Approx(0.5));
  dist.validate();
  CHECK((dist.mean() - family.x0()).lpNorm<Eigen::Infinity>() <= 1e-12);
  const auto report = covariance_of(family.M(), dist);
  CHECK(report.op_norm <= 1e-12);
}

}  // TEST_SUITE
