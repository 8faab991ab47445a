#pragma once

#include <string>
#include <vector>

#include "disclab/distribution.hpp"
#include "disclab/reduce_biased.hpp"

namespace disclab {

// Which +-1 block of a signing (x1; x2; x3) the statistic is taken over.
enum class Block { second, third };

// Exact moments and tail masses of the block mean alpha under a finite
// distribution, at threshold delta.
struct AlphaStats {
  double mean_alpha = 0.0;
  double mean_alpha_sq = 0.0;
  double delta = 0.0;
  double pi_mid = 0.0;    // Pr(|alpha| <= delta)
  double pi_plus = 0.0;   // Pr(alpha > delta)
  double pi_minus = 0.0;  // Pr(alpha < -delta)
};

AlphaStats alpha_stats(const SigningDistribution& dist, int n, int m,
                       Block block, double delta);
AlphaStats alpha_stats(const SigningDistribution& dist, const BiasedFamily& family,
                       Block block, double delta);

// For fuzzing and synthetic checks: stats of an arbitrary finite distribution
// over alpha values in [-1, 1].
AlphaStats alpha_stats_from_values(const std::vector<double>& values,
                                   const std::vector<double>& probs,
                                   double delta);

// Pr(|alpha| <= delta) <= (1 - E[alpha^2]) / (1 - delta^2). Holds for every
// distribution on [-1,1]; comparisons carry a small slack for roundoff.
bool check_markov_alpha(const AlphaStats& stats, double slack = 1e-12);

// Pr(alpha > delta)  >= ( E[alpha] + delta (1 - 2 Pr(|alpha| <= delta)) ) / (1 + delta)
// Pr(alpha < -delta) >= (-E[alpha] + delta (1 - 2 Pr(|alpha| <= delta)) ) / (1 + delta)
struct TailCheck {
  bool plus_ok = false;
  bool minus_ok = false;
};
TailCheck check_tail_bounds(const AlphaStats& stats, double slack = 1e-12);

// Joint tail of the event {alpha(x2) > delta and alpha(x3) < -delta} with
// delta = 1 - gamma beta / 10, against the floor (beta/2)(1 - gamma/10).
// The floor is certified only when both block second moments are at least
// 1 - gamma beta^2 / 24; otherwise the projector term is already large and
// assumption_branch is false.
struct EventEResult {
  bool assumption_branch = false;
  double delta = 0.0;
  double prob_event = 0.0;
  double floor = 0.0;  // (beta/2)(1 - gamma/10)
  double mean_sq_second = 0.0;
  double mean_sq_third = 0.0;
};
EventEResult event_joint_tail(const SigningDistribution& dist,
                              const BiasedFamily& family, double gamma);

// One verified inequality: lhs >= rhs - slack.
struct CheckLine {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Evaluates the whole lower-bound chain for a concrete distribution with mean
// x0 on a gamma-unsatisfiable family: alpha concentration and tail floors,
// the joint-tail floor, per-atom cancellation structure under the event, and
// the final covariance floors. All probabilities are exact over the support.
std::vector<CheckLine> verify_tail_chain(const SigningDistribution& dist,
                                         const BiasedFamily& family,
                                         double gamma);

bool all_pass(const std::vector<CheckLine>& lines);

}  // namespace disclab
