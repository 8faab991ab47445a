#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "disclab/distribution.hpp"
#include "disclab/reduce_biased.hpp"
#include "disclab/reduce_zero.hpp"

namespace disclab {

// Column view consumed by the oracle: dense columns of norm <= 1, plus an
// optional integer matrix with the same null space for exact kernel tests.
// When certified_kernel_x0 is set, the exact matrix also certifies that this
// x0 satisfies (columns) x0 = 0, so {x : V(x - x0) = 0} = {x : int rows x = 0}.
struct FamilyColumns {
  Eigen::MatrixXd cols;  // d x N
  std::optional<Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>>
      exact_rows;
  std::optional<Eigen::VectorXd> certified_kernel_x0;

  int dim() const { return static_cast<int>(cols.rows()); }
  int count() const { return static_cast<int>(cols.cols()); }
};

FamilyColumns columns_of(const VectorFamily& family);
FamilyColumns columns_of(const BiasedFamily& family);

struct OracleOptions {
  int certify_cap = 20;    // max N for kernel enumeration
  int minimize_cap = 14;   // max N for the cutting-plane solver
  int max_cuts = 200;
  double kernel_tol = 1e-9;  // numeric kernel membership without exact rows
  double lp_tol = 1e-9;
  int threads = 0;  // reserved; enumeration is cheap at these caps
};

struct CertifyResult {
  bool is_zero = false;
  std::optional<SigningDistribution> witness;
};

// Decides whether some signing distribution with mean x0 has exactly zero
// covariance: enumerates the kernel signings K = {x : V(x - x0) = 0} and, for
// nonzero x0, solves the linear feasibility problem placing mean x0 inside
// conv(K). Error{capacity} when N exceeds certify_cap.
CertifyResult certify_zero(const FamilyColumns& family, const Eigen::VectorXd& x0,
                           const OracleOptions& options = {});

enum class OracleStatus { exact_zero, converged, iteration_cap };

struct OracleResult {
  double value = 0.0;        // estimate of the optimal covariance norm
  double lower_bound = 0.0;  // certified
  double upper_bound = 0.0;  // achieved by `witness`
  SigningDistribution witness;
  OracleStatus status = OracleStatus::iteration_cap;
  std::vector<std::pair<double, double>> bound_history;  // (lower, upper)
};

// Minimizes the covariance operator norm over all distributions on {+-1}^N
// with mean x0 by cutting planes: an LP over the full support simplex keeps
// the accumulated directions' variances below t, and the top eigenvector of
// each LP solution's covariance becomes the next direction. Terminates when
// upper - lower <= tol or after options.max_cuts rounds.
OracleResult minimize_covariance(const FamilyColumns& family,
                                 const Eigen::VectorXd& x0, double tol,
                                 const OracleOptions& options = {});

// Exact LP value of min E||w||^2 / d over mean-x0 distributions; a certified
// lower bound for the optimal covariance norm.
double trace_lp_bound(const FamilyColumns& family, const Eigen::VectorXd& x0,
                      const OracleOptions& options = {});

}  // namespace disclab
