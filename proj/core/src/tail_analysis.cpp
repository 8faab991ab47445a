#include "disclab/tail_analysis.hpp"

#include <cmath>
#include <string>

#include "disclab/covariance.hpp"

namespace disclab {

namespace {

double block_alpha(const SigningDistribution::Atom& atom, int n, int m,
                   Block block) {
  const int offset = block == Block::second ? n : n + m;
  long long sum = 0;
  for (int i = 0; i < m; ++i) sum += atom.x(offset + i);
  return static_cast<double>(sum) / static_cast<double>(m);
}

}  // namespace

AlphaStats alpha_stats_from_values(const std::vector<double>& values,
                                   const std::vector<double>& probs,
                                   double delta) {
  if (values.size() != probs.size())
    fail(ErrorKind::dimension, "values and probabilities differ in length");
  if (values.empty()) fail(ErrorKind::dimension, "empty distribution");
  if (!(delta > 0.0 && delta < 1.0))
    fail(ErrorKind::parameter, "delta must lie in (0, 1)");
  AlphaStats stats;
  stats.delta = delta;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double a = values[k];
    const double p = probs[k];
    if (std::abs(a) > 1.0 + 1e-12)
      fail(ErrorKind::parameter, "alpha values must lie in [-1, 1]");
    if (p < 0.0) fail(ErrorKind::parameter, "negative probability");
    stats.mean_alpha += p * a;
    stats.mean_alpha_sq += p * a * a;
    if (a > delta)
      stats.pi_plus += p;
    else if (a < -delta)
      stats.pi_minus += p;
    else
      stats.pi_mid += p;
  }
  return stats;
}

AlphaStats alpha_stats(const SigningDistribution& dist, int n, int m,
                       Block block, double delta) {
  if (dist.dim() != n + 2 * m)
    fail(ErrorKind::dimension, "distribution is not over n + 2m signs");
  dist.validate();
  std::vector<double> values, probs;
  values.reserve(dist.support.size());
  probs.reserve(dist.support.size());
  for (const auto& atom : dist.support) {
    values.push_back(block_alpha(atom, n, m, block));
    probs.push_back(atom.prob);
  }
  return alpha_stats_from_values(values, probs, delta);
}

AlphaStats alpha_stats(const SigningDistribution& dist,
                       const BiasedFamily& family, Block block, double delta) {
  return alpha_stats(dist, family.n, family.m, block, delta);
}

bool check_markov_alpha(const AlphaStats& stats, double slack) {
  const double rhs =
      (1.0 - stats.mean_alpha_sq) / (1.0 - stats.delta * stats.delta);
  return stats.pi_mid <= rhs + slack;
}

TailCheck check_tail_bounds(const AlphaStats& stats, double slack) {
  const double shift = stats.delta * (1.0 - 2.0 * stats.pi_mid);
  const double denom = 1.0 + stats.delta;
  TailCheck check;
  check.plus_ok = stats.pi_plus >= (stats.mean_alpha + shift) / denom - slack;
  check.minus_ok = stats.pi_minus >= (-stats.mean_alpha + shift) / denom - slack;
  return check;
}

EventEResult event_joint_tail(const SigningDistribution& dist,
                              const BiasedFamily& family, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    fail(ErrorKind::parameter, "gamma must lie in (0, 1]");
  if ((dist.target_mean - family.x0()).lpNorm<Eigen::Infinity>() > 1e-10)
    fail(ErrorKind::precondition, "distribution mean does not match x0");
  dist.validate();

  const double beta = to_double(family.beta);
  EventEResult result;
  result.delta = 1.0 - gamma * beta / 10.0;
  result.floor = 0.5 * beta * (1.0 - gamma / 10.0);

  const int n = family.n, m = family.m;
  for (const auto& atom : dist.support) {
    const double a2 = block_alpha(atom, n, m, Block::second);
    const double a3 = block_alpha(atom, n, m, Block::third);
    result.mean_sq_second += atom.prob * a2 * a2;
    result.mean_sq_third += atom.prob * a3 * a3;
    if (a2 > result.delta && a3 < -result.delta) result.prob_event += atom.prob;
  }
  const double threshold = 1.0 - gamma * beta * beta / 24.0;
  result.assumption_branch = result.mean_sq_second >= threshold - 1e-12 &&
                             result.mean_sq_third >= threshold - 1e-12;
  return result;
}

namespace {

constexpr double kSlack = 1e-9;

void push(std::vector<CheckLine>& lines, const std::string& id, double lhs,
          double rhs) {
  lines.push_back({id, lhs, rhs, lhs >= rhs - kSlack});
}

}  // namespace

std::vector<CheckLine> verify_tail_chain(const SigningDistribution& dist,
                                         const BiasedFamily& family,
                                         double gamma) {
  const EventEResult event = event_joint_tail(dist, family, gamma);
  const double beta = to_double(family.beta);
  const double delta = event.delta;
  const int m = family.m, n = family.n, D = family.D();

  std::vector<CheckLine> lines;

  // Covariance of the unscaled family and its three-way trace split.
  const CovarianceReport cov = covariance_of(family.M(), dist);
  const ThreeTerms terms = three_term_decomposition(family, dist);
  push(lines, "cov_trace_split", cov.op_norm, terms.max() / D);

  // Projector mass floors hold regardless of which branch applies.
  push(lines, "projector_floor_second", cov.op_norm,
       (1.0 - event.mean_sq_second) * m / D);
  push(lines, "projector_floor_third", cov.op_norm,
       (1.0 - event.mean_sq_third) * m / D);

  if (!event.assumption_branch) {
    // One of the block means already wanders: the projector term is large.
    const double worst = std::max(1.0 - event.mean_sq_second,
                                  1.0 - event.mean_sq_third);
    push(lines, "projector_floor_fires", cov.op_norm,
         gamma * beta * beta / 24.0 * m / D);
    push(lines, "projector_mass_large", worst * m / D,
         gamma * beta * beta / 24.0 * m / D);
    return lines;
  }

  const bool delta_valid = delta > 0.0 && delta < 1.0;
  double pi2 = 0.0, pi3 = 0.0;
  if (delta_valid) {
    const AlphaStats s2 = alpha_stats(dist, family, Block::second, delta);
    const AlphaStats s3 = alpha_stats(dist, family, Block::third, delta);
    pi2 = s2.pi_mid;
    pi3 = s3.pi_mid;

    // Concentration and one-sided tail floors for both blocks.
    push(lines, "alpha_concentration_second",
         (1.0 - s2.mean_alpha_sq) / (1.0 - delta * delta), s2.pi_mid);
    push(lines, "alpha_concentration_third",
         (1.0 - s3.mean_alpha_sq) / (1.0 - delta * delta), s3.pi_mid);
    const double shift2 = delta * (1.0 - 2.0 * s2.pi_mid);
    const double shift3 = delta * (1.0 - 2.0 * s3.pi_mid);
    push(lines, "alpha_tail_plus_second", s2.pi_plus,
         (s2.mean_alpha + shift2) / (1.0 + delta));
    push(lines, "alpha_tail_minus_third", s3.pi_minus,
         (-s3.mean_alpha + shift3) / (1.0 + delta));

    // The displayed chain from the union bound down to the closed floor.
    const double l1 = s2.pi_plus + s3.pi_minus - 1.0;
    const double l2 =
        (s2.mean_alpha - s3.mean_alpha + 2.0 * delta - 2.0 * delta * (pi2 + pi3)) /
            (1.0 + delta) -
        1.0;
    const double l3 =
        (2.0 * beta + 2.0 * delta -
         (2.0 * delta / (1.0 - delta * delta)) *
             (2.0 - event.mean_sq_second - event.mean_sq_third)) /
            (1.0 + delta) -
        1.0;
    const double gb = gamma * beta;
    const double l4 =
        (2.0 * beta + 1.0 - gb / 10.0 -
         4.0 * (1.0 - gb / 10.0) *
             ((gamma * beta * beta / 24.0) /
              (1.0 - (1.0 - gb / 10.0) * (1.0 - gb / 10.0))) -
         1.0) /
        (1.0 + delta);
    const double l5 =
        (2.0 * beta - gb / 10.0 - (1.0 - gb / 10.0) * beta) / (1.0 + delta);
    push(lines, "joint_tail_union", event.prob_event, l1);
    push(lines, "joint_tail_step_tails", l1, l2);
    push(lines, "joint_tail_step_concentration", l2, l3);
    push(lines, "joint_tail_step_assumption", l3, l4);
    push(lines, "joint_tail_step_algebra", l4, l5);
    push(lines, "joint_tail_closed_floor", l5, event.floor);
  }
  push(lines, "joint_tail_floor", event.prob_event, event.floor);

  // Per-atom structure under the event: the biased blocks cancel on almost
  // every coordinate and the unsplit sets keep the first block large.
  double min_zero_fraction = 1.0;
  double min_block_norm = std::numeric_limits<double>::infinity();
  bool any_event_atom = false;
  const Eigen::MatrixXd a = family.A.cast<double>();
  for (const auto& atom : dist.support) {
    if (atom.prob <= 0.0) continue;
    const double a2 = block_alpha(atom, n, m, Block::second);
    const double a3 = block_alpha(atom, n, m, Block::third);
    if (!(a2 > delta && a3 < -delta)) continue;
    any_event_atom = true;
    int zeros = 0;
    for (int j = 0; j < m; ++j)
      if (atom.x(n + j) + atom.x(n + m + j) == 0) ++zeros;
    min_zero_fraction =
        std::min(min_zero_fraction, static_cast<double>(zeros) / m);
    const Eigen::VectorXd x = atom.x.cast<double>();
    const double norm2 =
        (a * x.head(n) - 2.0 * (x.segment(n, m) + x.tail(m))).squaredNorm();
    min_block_norm = std::min(min_block_norm, norm2);
  }
  if (any_event_atom) {
    push(lines, "event_zero_fraction", min_zero_fraction,
         1.0 - gamma * beta / 12.0);
    push(lines, "event_block_norm", min_block_norm,
         4.0 * gamma * (1.0 - beta / 12.0) * m);
  }

  // Expected-value floors closing the chain.
  push(lines, "cov_floor_expected", terms.discrepancy,
       event.prob_event * 4.0 * gamma * (1.0 - beta / 12.0) * m);
  push(lines, "cov_floor_final", cov.op_norm,
       (1.0 / (5.0 * m)) * event.floor * 4.0 * gamma * (1.0 - beta / 12.0) * m);
  return lines;
}

bool all_pass(const std::vector<CheckLine>& lines) {
  for (const auto& line : lines)
    if (!line.pass) return false;
  return true;
}

}  // namespace disclab
