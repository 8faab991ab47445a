#include "disclab/reduce_biased.hpp"

#include <cmath>
#include <string>

namespace disclab {

Eigen::MatrixXd BiasedFamily::M() const {
  const int d = D(), cols = N();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, cols);
  out.topLeftCorner(m, n) = A.cast<double>();
  out.block(0, n, m, m) = -2.0 * Eigen::MatrixXd::Identity(m, m);
  out.block(0, n + m, m, m) = -2.0 * Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(m, m) -
                               Eigen::MatrixXd::Constant(m, m, 1.0 / m);
  out.block(m, n, m, m) = proj;
  out.block(2 * m, n + m, m, m) = proj;
  return out;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>
BiasedFamily::int_rows() const {
  using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
  IntMat out = IntMat::Zero(D(), N());
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) out(j, i) = A(j, i);
    out(j, n + j) = -2;
    out(j, n + m + j) = -2;
  }
  // Projector rows scaled by m: m I - J.
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      out(m + j, n + k) = (j == k) ? m - 1 : -1;
      out(2 * m + j, n + m + k) = (j == k) ? m - 1 : -1;
    }
  return out;
}

double BiasedFamily::scale() const {
  const Eigen::MatrixXd mat = M();
  double best = 0.0;
  for (int j = 0; j < mat.cols(); ++j) best = std::max(best, mat.col(j).norm());
  return best;
}

Eigen::MatrixXd BiasedFamily::scaled_columns() const { return M() / scale(); }

Rational BiasedFamily::x0_entry(int i) const {
  if (i < 0 || i >= N()) fail(ErrorKind::dimension, "x0 index out of range");
  if (i < n) return p;
  if (i < n + m) return p + beta;
  return p - beta;
}

Eigen::VectorXd BiasedFamily::x0() const {
  Eigen::VectorXd out(N());
  const double pv = to_double(p);
  const double hi = to_double(p + beta);
  const double lo = to_double(p - beta);
  for (int i = 0; i < n; ++i) out(i) = pv;
  for (int i = 0; i < m; ++i) out(n + i) = hi;
  for (int i = 0; i < m; ++i) out(n + m + i) = lo;
  return out;
}

bool BiasedFamily::mean_in_kernel_exact() const {
  // Top rows: (row sum of A) p - 2 (p + beta) - 2 (p - beta).
  const Rational minus_two(-2, 1);
  for (int j = 0; j < m; ++j) {
    long long row_sum = 0;
    for (int i = 0; i < n; ++i) row_sum += A(j, i);
    const Rational value = Rational(row_sum, 1) * p + minus_two * (p + beta) +
                           minus_two * (p - beta);
    if (value != Rational(0, 1)) return false;
  }
  // Projector rows: constant blocks are annihilated since (m I - J) 1 = 0.
  // Verify literally on the scaled integer rows.
  const auto rows = int_rows();
  for (int j = m; j < 3 * m; ++j) {
    Rational acc(0, 1);
    for (int i = 0; i < N(); ++i)
      acc += Rational(rows(j, i), 1) * x0_entry(i);
    if (acc != Rational(0, 1)) return false;
  }
  return true;
}

BiasedFamily build_biased_family(const SetSplitInstance& instance,
                                 const Rational& p, const Rational& q) {
  instance.validate();
  if (instance.m() == 0) fail(ErrorKind::parameter, "instance has no sets");
  if (boost::abs(p) > Rational(1, 1))
    fail(ErrorKind::parameter, "p must lie in [-1, 1]");
  if (boost::abs(q) > Rational(1, 1))
    fail(ErrorKind::parameter, "q must lie in [-1, 1]");

  BiasedFamily fam;
  fam.m = instance.m();
  fam.n = instance.n;
  fam.p = p;
  fam.q = q;
  fam.beta = (Rational(1, 1) - boost::abs(p)) * q;
  fam.A = Eigen::MatrixXi::Zero(fam.m, fam.n);
  for (int j = 0; j < fam.m; ++j)
    for (int e : instance.sets[static_cast<std::size_t>(j)])
      fam.A(j, e - 1) = 1;

  if (!fam.mean_in_kernel_exact())
    fail(ErrorKind::construction, "target mean escaped the kernel");
  return fam;
}

SigningDistribution five_point_distribution(const BiasedFamily& family,
                                            const Assignment& z) {
  if (z.size() != family.n)
    fail(ErrorKind::dimension, "assignment length does not match universe size");
  z.validate();
  for (int j = 0; j < family.m; ++j) {
    long long sum = 0;
    for (int i = 0; i < family.n; ++i)
      sum += static_cast<long long>(family.A(j, i)) *
             z.values[static_cast<std::size_t>(i)];
    if (sum != 0)
      fail(ErrorKind::precondition,
           "assignment does not split set " + std::to_string(j + 1));
  }

  const int n = family.n, m = family.m, N = family.N();
  const Rational abs_p = boost::abs(family.p);
  const Rational one(1, 1);
  const Rational rest = one - abs_p;
  const Rational prob_hi = rest * (one + family.q) / Rational(4, 1);
  const Rational prob_lo = rest * (one - family.q) / Rational(4, 1);

  auto atom = [&](int first_sign, int second_sign) {
    Eigen::VectorXi x(N);
    for (int i = 0; i < n; ++i)
      x(i) = first_sign * z.values[static_cast<std::size_t>(i)];
    for (int i = 0; i < m; ++i) x(n + i) = second_sign;
    for (int i = 0; i < m; ++i) x(n + m + i) = -second_sign;
    return x;
  };

  SigningDistribution dist;
  dist.target_mean = family.x0();
  // Deterministic atom: all ones for p >= 0, all minus ones for p < 0, which
  // realizes the negative-p case without relabeling blocks.
  const int det_sign = family.p >= Rational(0, 1) ? 1 : -1;
  dist.support.push_back(
      {Eigen::VectorXi::Constant(N, det_sign), to_double(abs_p)});
  dist.support.push_back({atom(+1, +1), to_double(prob_hi)});
  dist.support.push_back({atom(-1, +1), to_double(prob_hi)});
  dist.support.push_back({atom(-1, -1), to_double(prob_lo)});
  dist.support.push_back({atom(+1, -1), to_double(prob_lo)});
  return dist;
}

double ThreeTerms::max() const {
  return std::max(discrepancy, std::max(proj_second, proj_third));
}

namespace {

Eigen::VectorXd project_center(const Eigen::VectorXd& y) {
  return y - Eigen::VectorXd::Constant(y.size(), y.mean());
}

}  // namespace

ThreeTerms three_term_decomposition(const BiasedFamily& family,
                                    const SigningDistribution& dist) {
  const Eigen::VectorXd x0 = family.x0();
  if (dist.dim() != family.N())
    fail(ErrorKind::dimension, "distribution dimension does not match family");
  if ((dist.target_mean - x0).lpNorm<Eigen::Infinity>() > 1e-10)
    fail(ErrorKind::precondition, "distribution mean does not match x0");
  dist.validate();

  const int n = family.n, m = family.m;
  const Eigen::MatrixXd a = family.A.cast<double>();
  ThreeTerms terms;
  for (const auto& atom : dist.support) {
    const Eigen::VectorXd x = atom.x.cast<double>();
    const Eigen::VectorXd x1 = x.head(n);
    const Eigen::VectorXd x2 = x.segment(n, m);
    const Eigen::VectorXd x3 = x.tail(m);
    terms.discrepancy += atom.prob * (a * x1 - 2.0 * (x2 + x3)).squaredNorm();
    terms.proj_second += atom.prob * project_center(x2).squaredNorm();
    terms.proj_third += atom.prob * project_center(x3).squaredNorm();
  }
  return terms;
}

double alpha_mean(const Eigen::VectorXi& y) {
  if (y.size() == 0) fail(ErrorKind::dimension, "empty vector");
  long long sum = 0;
  for (int i = 0; i < y.size(); ++i) {
    if (y(i) != 1 && y(i) != -1)
      fail(ErrorKind::validation, "entries must be +1 or -1");
    sum += y(i);
  }
  return static_cast<double>(sum) / static_cast<double>(y.size());
}

}  // namespace disclab
