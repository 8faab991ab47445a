#pragma once

#include <Eigen/Dense>
#include <vector>

namespace disclab {

// A finite-support distribution over signings x in {+-1}^N together with the
// mean it is required to realize.
struct SigningDistribution {
  struct Atom {
    Eigen::VectorXi x;  // entries +-1
    double prob = 0.0;
  };

  std::vector<Atom> support;
  Eigen::VectorXd target_mean;

  int dim() const { return static_cast<int>(target_mean.size()); }

  Eigen::VectorXd mean() const;

  // Probabilities sum to 1 (prob_tol), entries are +-1, the weighted mean
  // matches target_mean (mean_tol). Throws Error{validation} otherwise.
  void validate(double prob_tol = 1e-12, double mean_tol = 1e-10) const;
};

}  // namespace disclab
