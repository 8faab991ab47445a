#include "disclab/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "disclab/error.hpp"

namespace disclab {

double operator_norm(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols())
    fail(ErrorKind::validation, "operator norm input must be square");
  const double asym = (symmetric - symmetric.transpose()).lpNorm<Eigen::Infinity>();
  if (asym > 1e-9)
    fail(ErrorKind::validation,
         "matrix is asymmetric by " + std::to_string(asym));
  if (symmetric.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (symmetric + symmetric.transpose()), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

CovarianceReport covariance_of(const Eigen::MatrixXd& columns,
                               const SigningDistribution& dist) {
  if (dist.dim() != columns.cols())
    fail(ErrorKind::dimension,
         "distribution is over " + std::to_string(dist.dim()) +
             " signs but the family has " + std::to_string(columns.cols()) +
             " columns");
  dist.validate();

  const int d = static_cast<int>(columns.rows());
  CovarianceReport report;
  report.cov = Eigen::MatrixXd::Zero(d, d);
  report.signed_sums.reserve(dist.support.size());
  for (const auto& atom : dist.support) {
    const Eigen::VectorXd w =
        columns * (atom.x.cast<double>() - dist.target_mean);
    report.cov.noalias() += atom.prob * w * w.transpose();
    report.signed_sums.push_back(w);
  }
  report.cov = 0.5 * (report.cov + report.cov.transpose()).eval();
  report.trace = report.cov.trace();
  report.trace_lower_bound = d > 0 ? report.trace / d : 0.0;
  report.op_norm = operator_norm(report.cov);
  return report;
}

CovarianceReport independent_baseline(const Eigen::MatrixXd& columns,
                                      const Eigen::VectorXd& x0) {
  if (x0.size() != columns.cols())
    fail(ErrorKind::dimension, "x0 length does not match column count");
  for (int i = 0; i < x0.size(); ++i)
    if (std::abs(x0(i)) > 1.0)
      fail(ErrorKind::parameter, "x0 entries must lie in [-1, 1]");

  const int d = static_cast<int>(columns.rows());
  CovarianceReport report;
  report.cov = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < columns.cols(); ++i) {
    const double variance = 1.0 - x0(i) * x0(i);
    report.cov.noalias() += variance * columns.col(i) * columns.col(i).transpose();
  }
  report.cov = 0.5 * (report.cov + report.cov.transpose()).eval();
  report.trace = report.cov.trace();
  report.trace_lower_bound = d > 0 ? report.trace / d : 0.0;
  report.op_norm = operator_norm(report.cov);
  return report;
}

}  // namespace disclab
