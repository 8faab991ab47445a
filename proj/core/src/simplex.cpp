#include "disclab/simplex.hpp"

#include <cmath>
#include <string>

#include "disclab/error.hpp"

namespace disclab {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr double kRatioSlack = 1e-9;
constexpr long long kPrimalIterCap = 200000;
constexpr long long kDualIterCap = 20000;
constexpr long long kRefactorEvery = 96;
constexpr int kBlandAfterDegenerate = 200;

// Loop exit codes shared by the primal and dual drivers.
constexpr int kOptimal = 0;
constexpr int kUnboundedOrInfeasible = 1;
constexpr int kIterationLimit = 2;
constexpr int kNumericalTrouble = 3;
}  // namespace

SimplexSolver::SimplexSolver(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c,
                             const std::vector<char>& row_type, int reserve_rows,
                             double tol)
    : tol_(tol) {
  if (A.rows() != b.size() || A.cols() != c.size() ||
      static_cast<int>(row_type.size()) != A.rows())
    fail(ErrorKind::dimension, "inconsistent LP shapes");

  nstruct_ = static_cast<int>(A.cols());
  const int rows0 = static_cast<int>(A.rows());
  const int row_capacity = rows0 + reserve_rows;
  int l_rows = 0;
  for (char t : row_type) {
    if (t != '=' && t != '<') fail(ErrorKind::parameter, "row type must be '=' or '<'");
    if (t == '<') ++l_rows;
  }
  const int col_capacity = nstruct_ + l_rows + reserve_rows;

  cols_ = Eigen::MatrixXd::Zero(row_capacity, col_capacity);
  rhs_ = Eigen::VectorXd::Zero(row_capacity);
  cost_ = Eigen::VectorXd::Zero(col_capacity);
  cost_.head(nstruct_) = c;
  ncols_ = nstruct_;
  in_basis_.assign(static_cast<std::size_t>(col_capacity), 0);

  cols_.topLeftCorner(rows0, nstruct_) = A;
  rhs_.head(rows0) = b;
  nrows_ = 0;
  row_type_.reserve(static_cast<std::size_t>(row_capacity));
  slack_of_row_.reserve(static_cast<std::size_t>(row_capacity));
  for (int r = 0; r < rows0; ++r) {
    row_type_.push_back(row_type[static_cast<std::size_t>(r)]);
    if (row_type[static_cast<std::size_t>(r)] == '<') {
      cols_(r, ncols_) = 1.0;
      slack_of_row_.push_back(ncols_);
      ++ncols_;
    } else {
      slack_of_row_.push_back(-1);
    }
    ++nrows_;
  }
}

void SimplexSolver::append_internal_row(const Eigen::VectorXd& coeffs, double rhs,
                                        char type) {
  if (nrows_ >= cols_.rows())
    fail(ErrorKind::capacity, "row capacity exhausted; raise reserve_rows");
  if (coeffs.size() != nstruct_)
    fail(ErrorKind::dimension, "row coefficients must cover structural columns");
  const int r = nrows_++;
  cols_.row(r).setZero();
  cols_.row(r).head(nstruct_) = coeffs.transpose();
  rhs_(r) = rhs;
  row_type_.push_back(type);
  if (type == '<') {
    cols_(r, ncols_) = 1.0;
    slack_of_row_.push_back(ncols_);
    ++ncols_;
  } else {
    slack_of_row_.push_back(-1);
  }
}

Eigen::VectorXd SimplexSolver::column(int j) const {
  if (j >= 0) return cols_.col(j).head(nrows_);
  const int r = -1 - j;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(nrows_);
  e(r) = rhs_(r) >= 0.0 ? 1.0 : -1.0;
  return e;
}

Eigen::VectorXd SimplexSolver::basic_costs(const Eigen::VectorXd& cost_vec,
                                           bool phase_one) const {
  Eigen::VectorXd cb(nrows_);
  for (int r = 0; r < nrows_; ++r) {
    const int j = basis_[static_cast<std::size_t>(r)];
    if (j >= 0)
      cb(r) = phase_one ? 0.0 : cost_vec(j);
    else
      cb(r) = phase_one ? 1.0 : 0.0;
  }
  return cb;
}

bool SimplexSolver::refactorize() {
  Eigen::MatrixXd basis_matrix(nrows_, nrows_);
  for (int r = 0; r < nrows_; ++r)
    basis_matrix.col(r) = column(basis_[static_cast<std::size_t>(r)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
  if (!lu.isInvertible()) return false;
  binv_ = lu.inverse();
  xb_ = binv_ * rhs_.head(nrows_);
  pivots_since_refactor_ = 0;
  return true;
}

bool SimplexSolver::pivot(int row, int col_entering, const Eigen::VectorXd& u) {
  binv_.row(row) /= u(row);
  Eigen::VectorXd scaled = u;
  scaled(row) = 0.0;
  binv_.noalias() -= scaled * binv_.row(row);

  const int old = basis_[static_cast<std::size_t>(row)];
  if (old >= 0) in_basis_[static_cast<std::size_t>(old)] = 0;
  basis_[static_cast<std::size_t>(row)] = col_entering;
  if (col_entering >= 0) in_basis_[static_cast<std::size_t>(col_entering)] = 1;

  if (++pivots_since_refactor_ >= kRefactorEvery) return refactorize();
  return true;
}

int SimplexSolver::primal_loop(const Eigen::VectorXd& cost_vec, bool phase_one) {
  int degenerate_streak = 0;
  for (long long iter = 0; iter < kPrimalIterCap; ++iter) {
    const Eigen::VectorXd cb = basic_costs(cost_vec, phase_one);
    const Eigen::VectorXd y = binv_.transpose() * cb;
    const Eigen::VectorXd price =
        cols_.topLeftCorner(nrows_, ncols_).transpose() * y;

    const bool bland = force_bland_ || degenerate_streak > kBlandAfterDegenerate;
    int entering = -1;
    double best = -tol_;
    for (int j = 0; j < ncols_; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)]) continue;
      const double base_cost = phase_one ? 0.0 : cost_vec(j);
      const double reduced = base_cost - price(j);
      if (reduced < -tol_) {
        if (bland) {
          entering = j;
          break;
        }
        if (reduced < best) {
          best = reduced;
          entering = j;
        }
      }
    }
    if (entering < 0) return kOptimal;

    const Eigen::VectorXd u = binv_ * cols_.col(entering).head(nrows_);
    // Two-pass ratio test: find the tightest ratio, then take the largest
    // pivot element among near-ties for numerical stability.
    double theta = std::numeric_limits<double>::infinity();
    for (int r = 0; r < nrows_; ++r)
      if (u(r) > kPivotTol)
        theta = std::min(theta, std::max(xb_(r), 0.0) / u(r));
    if (!std::isfinite(theta)) return kUnboundedOrInfeasible;
    int leaving = -1;
    double best_pivot = 0.0;
    const double window = theta + kRatioSlack * (1.0 + std::abs(theta));
    for (int r = 0; r < nrows_; ++r) {
      if (u(r) <= kPivotTol) continue;
      const double ratio = std::max(xb_(r), 0.0) / u(r);
      if (ratio <= window && u(r) > best_pivot) {
        best_pivot = u(r);
        leaving = r;
      }
    }
    if (leaving < 0) return kNumericalTrouble;

    xb_ -= theta * u;
    xb_(leaving) = theta;
    if (!pivot(leaving, entering, u)) return kNumericalTrouble;
    degenerate_streak = theta < 1e-11 ? degenerate_streak + 1 : 0;
  }
  return kIterationLimit;
}

int SimplexSolver::dual_loop() {
  for (long long iter = 0; iter < kDualIterCap; ++iter) {
    int leaving = -1;
    double most_negative = -tol_;
    for (int r = 0; r < nrows_; ++r) {
      if (xb_(r) < most_negative) {
        most_negative = xb_(r);
        leaving = r;
      }
    }
    if (leaving < 0) return kOptimal;

    const Eigen::VectorXd cb = basic_costs(cost_, false);
    const Eigen::VectorXd y = binv_.transpose() * cb;
    const Eigen::VectorXd price =
        cols_.topLeftCorner(nrows_, ncols_).transpose() * y;
    const Eigen::VectorXd alpha =
        cols_.topLeftCorner(nrows_, ncols_).transpose() *
        binv_.row(leaving).transpose();

    double best_ratio = std::numeric_limits<double>::infinity();
    for (int j = 0; j < ncols_; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)]) continue;
      if (alpha(j) < -kPivotTol) {
        const double reduced = std::max(cost_(j) - price(j), 0.0);
        best_ratio = std::min(best_ratio, reduced / (-alpha(j)));
      }
    }
    if (!std::isfinite(best_ratio)) return kUnboundedOrInfeasible;
    int entering = -1;
    double best_pivot = 0.0;
    const double window = best_ratio + kRatioSlack * (1.0 + best_ratio);
    for (int j = 0; j < ncols_; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)]) continue;
      if (alpha(j) < -kPivotTol) {
        const double reduced = std::max(cost_(j) - price(j), 0.0);
        if (reduced / (-alpha(j)) <= window && -alpha(j) > best_pivot) {
          best_pivot = -alpha(j);
          entering = j;
        }
      }
    }
    if (entering < 0) return kNumericalTrouble;

    const Eigen::VectorXd u = binv_ * cols_.col(entering).head(nrows_);
    if (std::abs(u(leaving)) <= kPivotTol) return kNumericalTrouble;
    if (!pivot(leaving, entering, u)) return kNumericalTrouble;
    xb_ = binv_ * rhs_.head(nrows_);
  }
  return kIterationLimit;
}

LpResult SimplexSolver::extract(LpStatus status) {
  LpResult result;
  result.status = status;
  result.x = Eigen::VectorXd::Zero(nstruct_);
  if (status == LpStatus::optimal || status == LpStatus::iteration_limit) {
    refactorize();  // tighten basic values before reading them off
    for (int r = 0; r < nrows_; ++r) {
      const int j = basis_[static_cast<std::size_t>(r)];
      if (j >= 0 && j < nstruct_) result.x(j) = xb_(r);
    }
    result.objective = cost_.head(nstruct_).dot(result.x);
  }
  return result;
}

LpResult SimplexSolver::solve() {
  for (int attempt = 0; attempt < 2; ++attempt) {
    force_bland_ = attempt > 0;  // retry deterministically with Bland's rule
    const LpResult result = solve_once();
    if (result.status != LpStatus::iteration_limit || attempt > 0) return result;
  }
  fail(ErrorKind::validation, "linear program did not converge");
}

LpResult SimplexSolver::solve_once() {
  // Initial basis: slacks where feasible, signed artificials elsewhere.
  basis_.assign(static_cast<std::size_t>(nrows_), 0);
  std::fill(in_basis_.begin(), in_basis_.end(), 0);
  bool any_artificial = false;
  for (int r = 0; r < nrows_; ++r) {
    if (row_type_[static_cast<std::size_t>(r)] == '<' && rhs_(r) >= 0.0) {
      const int s = slack_of_row_[static_cast<std::size_t>(r)];
      basis_[static_cast<std::size_t>(r)] = s;
      in_basis_[static_cast<std::size_t>(s)] = 1;
    } else {
      basis_[static_cast<std::size_t>(r)] = kArtificial - r;
      any_artificial = true;
    }
  }
  if (!refactorize())
    fail(ErrorKind::validation, "initial basis is singular");
  has_basis_ = true;

  if (any_artificial) {
    const int code = primal_loop(cost_, true);
    if (code == kIterationLimit || code == kNumericalTrouble)
      return extract(LpStatus::iteration_limit);
    double infeasibility = 0.0;
    for (int r = 0; r < nrows_; ++r)
      if (basis_[static_cast<std::size_t>(r)] < 0)
        infeasibility += std::max(xb_(r), 0.0);
    if (infeasibility > 1e-7) {
      LpResult result;
      result.status = LpStatus::infeasible;
      result.objective = infeasibility;
      result.x = Eigen::VectorXd::Zero(nstruct_);
      return result;
    }
    // Swap still-basic artificials for any real column with a usable pivot;
    // rows admitting none are redundant and keep their artificial at zero.
    for (int r = 0; r < nrows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] >= 0) continue;
      const Eigen::VectorXd alpha =
          cols_.topLeftCorner(nrows_, ncols_).transpose() *
          binv_.row(r).transpose();
      for (int j = 0; j < ncols_; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)]) continue;
        if (std::abs(alpha(j)) > 1e-7) {
          const Eigen::VectorXd u = binv_ * cols_.col(j).head(nrows_);
          if (!pivot(r, j, u)) return extract(LpStatus::iteration_limit);
          xb_ = binv_ * rhs_.head(nrows_);
          break;
        }
      }
    }
  }

  const int code = primal_loop(cost_, false);
  if (code == kUnboundedOrInfeasible) return extract(LpStatus::unbounded);
  if (code == kIterationLimit || code == kNumericalTrouble)
    return extract(LpStatus::iteration_limit);
  return extract(LpStatus::optimal);
}

LpResult SimplexSolver::add_row_and_resolve(const Eigen::VectorXd& coeffs,
                                            double rhs) {
  append_internal_row(coeffs, rhs, '<');
  if (!has_basis_) return solve();

  // The previous basis plus the new slack is dual feasible; restore primal
  // feasibility with the dual simplex.
  const int r = nrows_ - 1;
  const int s = slack_of_row_[static_cast<std::size_t>(r)];
  basis_.push_back(s);
  in_basis_[static_cast<std::size_t>(s)] = 1;
  if (refactorize()) {
    const int code = dual_loop();
    if (code == kOptimal) return extract(LpStatus::optimal);
    if (code == kUnboundedOrInfeasible) {
      LpResult result;
      result.status = LpStatus::infeasible;
      result.x = Eigen::VectorXd::Zero(nstruct_);
      return result;
    }
  }
  return solve();  // dual stalled or basis went bad; clean two-phase restart
}

}  // namespace disclab
