#pragma once

#include <Eigen/Dense>
#include <vector>

#include "disclab/distribution.hpp"

namespace disclab {

struct CovarianceReport {
  Eigen::MatrixXd cov;                       // d x d, symmetric PSD
  double op_norm = 0.0;                      // largest eigenvalue magnitude
  double trace = 0.0;
  double trace_lower_bound = 0.0;            // trace / d
  std::vector<Eigen::VectorXd> signed_sums;  // w per support atom
};

// Covariance of sum_i (x(i) - x0(i)) v_i under the distribution, with v_i the
// columns of `columns`. Support atoms are accumulated in order, then the
// matrix is symmetrized to (C + C^T)/2.
CovarianceReport covariance_of(const Eigen::MatrixXd& columns,
                               const SigningDistribution& dist);

// Largest eigenvalue magnitude of a symmetric matrix. Inputs asymmetric
// beyond 1e-9 are rejected with Error{validation}.
double operator_norm(const Eigen::MatrixXd& symmetric);

// Closed-form covariance sum_i (1 - x0(i)^2) v_i v_i^T of the entrywise
// independent signing with mean x0.
CovarianceReport independent_baseline(const Eigen::MatrixXd& columns,
                                      const Eigen::VectorXd& x0);

}  // namespace disclab
