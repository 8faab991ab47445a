#include "disclab/distribution.hpp"

#include <cmath>
#include <string>

#include "disclab/error.hpp"

namespace disclab {

Eigen::VectorXd SigningDistribution::mean() const {
  const int n =
      support.empty() ? dim() : static_cast<int>(support.front().x.size());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  for (const Atom& atom : support) m += atom.prob * atom.x.cast<double>();
  return m;
}

void SigningDistribution::validate(double prob_tol, double mean_tol) const {
  double total = 0.0;
  for (const Atom& atom : support) {
    if (atom.x.size() != dim())
      fail(ErrorKind::validation, "support atom dimension mismatch");
    for (int i = 0; i < atom.x.size(); ++i)
      if (atom.x(i) != 1 && atom.x(i) != -1)
        fail(ErrorKind::validation, "signing entries must be +1 or -1");
    if (atom.prob < 0.0)
      fail(ErrorKind::validation, "negative probability");
    total += atom.prob;
  }
  if (std::abs(total - 1.0) > prob_tol)
    fail(ErrorKind::validation,
         "probabilities sum to " + std::to_string(total) + ", not 1");
  const double err = (mean() - target_mean).lpNorm<Eigen::Infinity>();
  if (err > mean_tol)
    fail(ErrorKind::validation,
         "distribution mean misses target by " + std::to_string(err));
}

}  // namespace disclab
