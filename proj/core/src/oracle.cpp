#include "disclab/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "disclab/covariance.hpp"
#include "disclab/simplex.hpp"

namespace disclab {

namespace {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// Coordinate i maps to mask bit N-1-i, so increasing masks enumerate signings
// in lexicographic order with +1 before -1.
Eigen::VectorXi signing_from_mask(std::uint32_t mask, int n) {
  Eigen::VectorXi x(n);
  for (int i = 0; i < n; ++i)
    x(i) = ((mask >> (n - 1 - i)) & 1u) ? -1 : 1;
  return x;
}

bool exact_mode_valid(const FamilyColumns& family, const Eigen::VectorXd& x0) {
  if (!family.exact_rows) return false;
  if (x0.isZero(0.0)) return true;
  return family.certified_kernel_x0 && x0 == *family.certified_kernel_x0;
}

// Gray-code scan of all 2^N signings calling visit(mask) with the integer or
// floating signed sum kept incrementally up to date.
template <typename Visit>
void scan_signings_exact(const IntMat& rows, Visit&& visit) {
  const int n = static_cast<int>(rows.cols());
  Eigen::VectorXi x = Eigen::VectorXi::Constant(n, 1);
  IntVec w = rows.rowwise().sum();
  std::uint32_t mask = 0;
  visit(mask, w);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    const int i = n - 1 - bit;
    x(i) = -x(i);
    mask ^= (std::uint32_t{1} << bit);
    w += (2 * x(i)) * rows.col(i).cast<std::int64_t>();
    visit(mask, w);
  }
}

template <typename Visit>
void scan_signings_numeric(const Eigen::MatrixXd& cols, Visit&& visit) {
  const int n = static_cast<int>(cols.cols());
  Eigen::VectorXi x = Eigen::VectorXi::Constant(n, 1);
  Eigen::VectorXd w = cols.rowwise().sum();
  std::uint32_t mask = 0;
  visit(mask, w);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    const int i = n - 1 - bit;
    x(i) = -x(i);
    mask ^= (std::uint32_t{1} << bit);
    w += (2.0 * x(i)) * cols.col(i);
    visit(mask, w);
  }
}

}  // namespace

FamilyColumns columns_of(const VectorFamily& family) {
  FamilyColumns out;
  out.cols = family.dense_columns();
  out.exact_rows = family.int_columns();
  return out;
}

FamilyColumns columns_of(const BiasedFamily& family) {
  FamilyColumns out;
  out.cols = family.scaled_columns();
  out.exact_rows = family.int_rows();
  out.certified_kernel_x0 = family.x0();  // M x0 = 0 proved at build time
  return out;
}

CertifyResult certify_zero(const FamilyColumns& family, const Eigen::VectorXd& x0,
                           const OracleOptions& options) {
  const int n = family.count();
  if (x0.size() != n)
    fail(ErrorKind::dimension, "x0 length does not match column count");
  if (n > options.certify_cap)
    fail(ErrorKind::capacity, "N = " + std::to_string(n) +
                                  " exceeds certification cap " +
                                  std::to_string(options.certify_cap));

  std::vector<std::uint32_t> kernel;
  constexpr std::size_t kKernelCap = 1u << 17;
  if (exact_mode_valid(family, x0)) {
    scan_signings_exact(*family.exact_rows,
                        [&](std::uint32_t mask, const IntVec& w) {
                          if (w.isZero(0)) kernel.push_back(mask);
                        });
  } else {
    const Eigen::VectorXd offset = family.cols * x0;
    scan_signings_numeric(
        family.cols, [&](std::uint32_t mask, const Eigen::VectorXd& w) {
          if ((w - offset).lpNorm<Eigen::Infinity>() <= options.kernel_tol)
            kernel.push_back(mask);
        });
  }
  if (kernel.empty()) return {};

  if (x0.isZero(0.0)) {
    const std::uint32_t lex_min = *std::min_element(kernel.begin(), kernel.end());
    const Eigen::VectorXi y = signing_from_mask(lex_min, n);
    CertifyResult result;
    result.is_zero = true;
    SigningDistribution witness;
    witness.target_mean = Eigen::VectorXd::Zero(n);
    witness.support.push_back({y, 0.5});
    witness.support.push_back({-y, 0.5});
    result.witness = std::move(witness);
    return result;
  }

  if (kernel.size() > kKernelCap)
    fail(ErrorKind::capacity, "kernel too large for the feasibility program");

  // Probabilities over kernel signings whose mean is x0.
  const int cols = static_cast<int>(kernel.size());
  Eigen::MatrixXd a(n + 1, cols);
  for (int k = 0; k < cols; ++k) {
    a.col(k).head(n) = signing_from_mask(kernel[static_cast<std::size_t>(k)], n)
                           .cast<double>();
    a(n, k) = 1.0;
  }
  Eigen::VectorXd b(n + 1);
  b.head(n) = x0;
  b(n) = 1.0;
  SimplexSolver solver(a, b, Eigen::VectorXd::Zero(cols),
                       std::vector<char>(static_cast<std::size_t>(n) + 1, '='),
                       0, options.lp_tol);
  const LpResult lp = solver.solve();
  if (lp.status != LpStatus::optimal) return {};

  CertifyResult result;
  result.is_zero = true;
  SigningDistribution witness;
  witness.target_mean = x0;
  for (int k = 0; k < cols; ++k)
    if (lp.x(k) > 0.0)
      witness.support.push_back(
          {signing_from_mask(kernel[static_cast<std::size_t>(k)], n), lp.x(k)});
  witness.validate();
  result.witness = std::move(witness);
  return result;
}

namespace {

// Shared enumeration state for the cutting-plane solver and the trace LP.
// For x0 = 0 only one representative of every {x, -x} pair is kept: both have
// the same outer product w w^T and splitting a pair evenly restores the mean,
// so nothing is lost and mean constraints vanish.
struct Enumeration {
  bool symmetric = false;
  int n = 0;                             // signing length
  std::vector<std::uint32_t> masks;      // column order
  Eigen::MatrixXd w;                     // d x K signed sums V (x - x0)
  std::vector<int> class_of;             // identical-w class per column
  std::vector<Eigen::VectorXd> class_w;  // representative w per class
};

Enumeration enumerate_signings(const FamilyColumns& family,
                               const Eigen::VectorXd& x0) {
  Enumeration e;
  e.n = family.count();
  e.symmetric = x0.isZero(0.0);
  const std::uint64_t total = std::uint64_t{1} << e.n;
  const std::uint64_t count = e.symmetric ? total / 2 : total;
  // Representatives of pairs are the masks with coordinate 0 fixed to +1,
  // i.e. the lower half of mask space.
  e.masks.resize(count);
  for (std::uint64_t k = 0; k < count; ++k)
    e.masks[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(k);

  Eigen::MatrixXd signs(e.n, static_cast<int>(count));
  for (std::uint64_t k = 0; k < count; ++k)
    signs.col(static_cast<int>(k)) =
        signing_from_mask(static_cast<std::uint32_t>(k), e.n).cast<double>();
  e.w = family.cols * (signs.colwise() - x0);

  // Group identical signed sums; exact rows give exact classes, otherwise the
  // double bit patterns are compared. Grouping only accelerates covariance
  // assembly and cut evaluation, the LP keeps one variable per signing.
  if (family.exact_rows && exact_mode_valid(family, x0)) {
    const IntMat& rows = *family.exact_rows;
    std::map<std::vector<std::int64_t>, int> ids;
    for (std::size_t k = 0; k < e.masks.size(); ++k) {
      const Eigen::VectorXi x = signing_from_mask(e.masks[k], e.n);
      IntVec wi = rows * x.cast<std::int64_t>();
      std::vector<std::int64_t> key(wi.data(), wi.data() + wi.size());
      auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
      e.class_of.push_back(it->second);
      if (inserted) e.class_w.push_back(e.w.col(static_cast<int>(k)));
    }
  } else {
    std::map<std::vector<double>, int> ids;
    for (std::size_t k = 0; k < e.masks.size(); ++k) {
      const auto col = e.w.col(static_cast<int>(k));
      std::vector<double> key(col.data(), col.data() + col.size());
      auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
      e.class_of.push_back(it->second);
      if (inserted) e.class_w.push_back(col);
    }
  }
  return e;
}

Eigen::MatrixXd assemble_covariance(const Enumeration& e,
                                    const Eigen::VectorXd& p) {
  std::vector<double> class_mass(e.class_w.size(), 0.0);
  for (std::size_t k = 0; k < e.class_of.size(); ++k)
    class_mass[static_cast<std::size_t>(e.class_of[k])] += p(static_cast<int>(k));
  const int d = static_cast<int>(e.w.rows());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t c = 0; c < e.class_w.size(); ++c)
    if (class_mass[c] > 0.0)
      cov.noalias() += class_mass[c] * e.class_w[c] * e.class_w[c].transpose();
  return 0.5 * (cov + cov.transpose());
}

// Largest eigenvalue and its eigenvector, sign-fixed so the first coordinate
// above 1e-12 in magnitude is positive.
std::pair<double, Eigen::VectorXd> top_eigenpair(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  const int last = static_cast<int>(sym.rows()) - 1;
  double value = solver.eigenvalues()(last);
  Eigen::VectorXd vec = solver.eigenvectors().col(last);
  for (int i = 0; i < vec.size(); ++i) {
    if (std::abs(vec(i)) > 1e-12) {
      if (vec(i) < 0) vec = -vec;
      break;
    }
  }
  return {value, vec};
}

Eigen::VectorXd cut_coefficients(const Enumeration& e, const Eigen::VectorXd& u) {
  std::vector<double> per_class(e.class_w.size());
  for (std::size_t c = 0; c < e.class_w.size(); ++c) {
    const double s = u.dot(e.class_w[c]);
    per_class[c] = s * s;
  }
  Eigen::VectorXd coeffs(static_cast<int>(e.class_of.size()) + 1);
  for (std::size_t k = 0; k < e.class_of.size(); ++k)
    coeffs(static_cast<int>(k)) = per_class[static_cast<std::size_t>(e.class_of[k])];
  coeffs(static_cast<int>(e.class_of.size())) = -1.0;  // the epigraph variable
  return coeffs;
}

SigningDistribution expand_distribution(const Enumeration& e,
                                        const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& x0) {
  SigningDistribution dist;
  dist.target_mean = x0;
  for (std::size_t k = 0; k < e.masks.size(); ++k) {
    const double mass = p(static_cast<int>(k));
    if (mass <= 0.0) continue;  // vertex solutions carry exact zeros
    const Eigen::VectorXi x = signing_from_mask(e.masks[k], e.n);
    if (e.symmetric) {
      dist.support.push_back({x, mass / 2.0});
      dist.support.push_back({-x, mass / 2.0});
    } else {
      dist.support.push_back({x, mass});
    }
  }
  return dist;
}

double convex_mix_search(const Enumeration& e, const Eigen::VectorXd& pa,
                         const Eigen::VectorXd& pb, double* theta_out) {
  // lambda_max along the segment is convex in theta; golden-section suffices.
  const Eigen::MatrixXd ca = assemble_covariance(e, pa);
  const Eigen::MatrixXd cb = assemble_covariance(e, pb);
  auto value = [&](double theta) {
    return top_eigenpair((1.0 - theta) * ca + theta * cb).first;
  };
  double lo = 0.0, hi = 1.0;
  constexpr double kGold = 0.61803398874989484820;
  double x1 = hi - kGold * (hi - lo), x2 = lo + kGold * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGold * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGold * (hi - lo);
      f2 = value(x2);
    }
  }
  const double theta = 0.5 * (lo + hi);
  *theta_out = theta;
  return value(theta);
}

double trace_lp_value(const Enumeration& e, const Eigen::VectorXd& x0,
                      const OracleOptions& options) {
  const int d = static_cast<int>(e.w.rows());
  const int count = static_cast<int>(e.masks.size());
  Eigen::VectorXd costs(count);
  for (int k = 0; k < count; ++k)
    costs(k) = e.w.col(k).squaredNorm() / d;
  if (e.symmetric) {
    // Any single pair {x, -x} is feasible, so the LP value is the minimum.
    return costs.minCoeff();
  }
  const int n = e.n;
  Eigen::MatrixXd a(n + 1, count);
  for (int k = 0; k < count; ++k) {
    a.col(k).head(n) = signing_from_mask(e.masks[static_cast<std::size_t>(k)], n)
                           .cast<double>();
    a(n, k) = 1.0;
  }
  Eigen::VectorXd b(n + 1);
  b.head(n) = x0;
  b(n) = 1.0;
  SimplexSolver solver(a, b, costs,
                       std::vector<char>(static_cast<std::size_t>(n) + 1, '='),
                       0, options.lp_tol);
  const LpResult lp = solver.solve();
  if (lp.status != LpStatus::optimal)
    fail(ErrorKind::validation, "trace program did not reach optimality");
  return lp.objective;
}

}  // namespace

double trace_lp_bound(const FamilyColumns& family, const Eigen::VectorXd& x0,
                      const OracleOptions& options) {
  const int n = family.count();
  if (x0.size() != n)
    fail(ErrorKind::dimension, "x0 length does not match column count");
  const int cap = x0.isZero(0.0) ? options.certify_cap : options.minimize_cap;
  if (n > cap)
    fail(ErrorKind::capacity,
         "N = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (x0.isZero(0.0)) {
    // Closed scan; the pairing argument makes the LP value the pointwise min.
    const int d = family.dim();
    double best = std::numeric_limits<double>::infinity();
    scan_signings_numeric(family.cols,
                          [&](std::uint32_t, const Eigen::VectorXd& w) {
                            best = std::min(best, w.squaredNorm() / d);
                          });
    return best;
  }
  const Enumeration e = enumerate_signings(family, x0);
  return trace_lp_value(e, x0, options);
}

OracleResult minimize_covariance(const FamilyColumns& family,
                                 const Eigen::VectorXd& x0, double tol,
                                 const OracleOptions& options) {
  const int n = family.count();
  if (x0.size() != n)
    fail(ErrorKind::dimension, "x0 length does not match column count");
  if (n > options.minimize_cap)
    fail(ErrorKind::capacity, "N = " + std::to_string(n) +
                                  " exceeds minimization cap " +
                                  std::to_string(options.minimize_cap));
  for (int i = 0; i < n; ++i)
    if (std::abs(x0(i)) > 1.0)
      fail(ErrorKind::parameter, "x0 entries must lie in [-1, 1]");
  if (tol <= 0.0) fail(ErrorKind::parameter, "tolerance must be positive");

  if (n <= options.certify_cap) {
    CertifyResult certified = certify_zero(family, x0, options);
    if (certified.is_zero) {
      OracleResult result;
      result.status = OracleStatus::exact_zero;
      result.value = result.lower_bound = result.upper_bound = 0.0;
      result.witness = std::move(*certified.witness);
      return result;
    }
  }

  const Enumeration e = enumerate_signings(family, x0);
  const int count = static_cast<int>(e.masks.size());
  const int d = family.dim();

  // Entrywise-independent distribution with mean x0: always feasible, and its
  // covariance is the closed-form baseline.
  Eigen::VectorXd p_best(count);
  if (e.symmetric) {
    p_best.setConstant(1.0 / count);
  } else {
    for (int k = 0; k < count; ++k) {
      const Eigen::VectorXi x = signing_from_mask(e.masks[static_cast<std::size_t>(k)], n);
      double mass = 1.0;
      for (int i = 0; i < n; ++i) mass *= 0.5 * (1.0 + x(i) * x0(i));
      p_best(k) = mass;
    }
  }
  Eigen::MatrixXd cov_best = assemble_covariance(e, p_best);
  auto [ub, u0] = top_eigenpair(cov_best);
  double upper = ub;
  double lower = 0.0;

  // LP over the support simplex: mean rows (skipped when symmetric), the
  // total-mass row, and one epigraph row per accumulated direction.
  const int mean_rows = e.symmetric ? 0 : n;
  std::vector<Eigen::VectorXd> initial_cuts;
  for (int k = 0; k < d; ++k)
    initial_cuts.push_back(Eigen::VectorXd::Unit(d, k));
  initial_cuts.push_back(u0);

  const int base_rows = mean_rows + 1 + static_cast<int>(initial_cuts.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(base_rows, count + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(base_rows);
  std::vector<char> row_type(static_cast<std::size_t>(base_rows), '<');
  int row = 0;
  if (!e.symmetric) {
    for (int i = 0; i < n; ++i, ++row) {
      for (int k = 0; k < count; ++k)
        a(row, k) = static_cast<double>(
            signing_from_mask(e.masks[static_cast<std::size_t>(k)], n)(i));
      b(row) = x0(i);
      row_type[static_cast<std::size_t>(row)] = '=';
    }
  }
  a.row(row).head(count).setOnes();
  b(row) = 1.0;
  row_type[static_cast<std::size_t>(row)] = '=';
  ++row;
  for (const auto& u : initial_cuts) {
    a.row(row) = cut_coefficients(e, u).transpose();
    b(row) = 0.0;
    ++row;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(count + 1);
  c(count) = 1.0;

  SimplexSolver solver(a, b, c, row_type, options.max_cuts + 4, options.lp_tol);
  OracleResult result;
  result.status = OracleStatus::iteration_cap;
  LpResult lp = solver.solve();
  for (int round = 0; round < options.max_cuts; ++round) {
    if (lp.status != LpStatus::optimal)
      fail(ErrorKind::validation, "cutting-plane subproblem did not solve");
    lower = std::max(lower, lp.objective);

    const Eigen::VectorXd p = lp.x.head(count).cwiseMax(0.0);
    const Eigen::MatrixXd cov = assemble_covariance(e, p);
    auto [lambda, u] = top_eigenpair(cov);
    if (lambda < upper) {
      upper = lambda;
      p_best = p;
      cov_best = cov;
    }
    double theta = 0.0;
    const double mixed = convex_mix_search(e, p_best, p, &theta);
    if (mixed < upper) {
      upper = mixed;
      p_best = ((1.0 - theta) * p_best + theta * p).eval();
      cov_best = assemble_covariance(e, p_best);
    }

    result.bound_history.emplace_back(lower, upper);
    if (upper - lower <= tol) {
      result.status = OracleStatus::converged;
      break;
    }
    if (round + 1 == options.max_cuts) break;
    lp = solver.add_row_and_resolve(cut_coefficients(e, u), 0.0);
  }

  result.witness = expand_distribution(e, p_best, x0);
  result.witness.validate();
  // Report the bound actually achieved by the expanded witness.
  const CovarianceReport achieved = covariance_of(family.cols, result.witness);
  result.upper_bound = achieved.op_norm;
  result.value = achieved.op_norm;
  result.lower_bound =
      std::min(std::max(lower, trace_lp_value(e, x0, options)), result.upper_bound);
  return result;
}

}  // namespace disclab
