#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "disclab/distribution.hpp"
#include "disclab/rational.hpp"
#include "disclab/setsplit.hpp"

namespace disclab {

// Block family for the biased-mean reduction. With A the m x n incidence
// matrix of the instance (row sums 4) and P = I - J/m the centering
// projector, the D x N matrix is
//
//     M = [ A  -2I  -2I ]
//         [ 0    P    0 ]
//         [ 0    0    P ]
//
// with D = 3m, N = n + 2m, and the target mean is
//
//     x0 = ( p 1_n ; (p + beta) 1_m ; (p - beta) 1_m ),  beta = (1 - |p|) q.
//
// M x0 = 0 holds exactly and is verified in rational arithmetic at build
// time. Columns are stored unscaled; scale() divides them down to norm <= 1.
struct BiasedFamily {
  int m = 0;
  int n = 0;
  Eigen::MatrixXi A;  // m x n, entries 0/1
  Rational p, q, beta;

  int D() const { return 3 * m; }
  int N() const { return n + 2 * m; }

  Eigen::MatrixXd M() const;               // unscaled dense matrix
  double scale() const;                     // max column norm of M
  Eigen::MatrixXd scaled_columns() const;   // M / scale()

  // Row-rescaled integer form with the same null space as M: the projector
  // rows are multiplied by m (entries m-1 and -1). Signing kernel tests are
  // exact in 64-bit arithmetic.
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> int_rows() const;

  Rational x0_entry(int i) const;  // p, p+beta or p-beta by block, 0-indexed
  Eigen::VectorXd x0() const;

  // Exact check that M x0 = 0 (rational arithmetic).
  bool mean_in_kernel_exact() const;
};

// Requires |p| <= 1, |q| <= 1, m >= 1. The negative-p case is realized by
// letting the deterministic support atom of the five-point distribution be
// the all-minus-one signing; the x0 layout above is unchanged.
BiasedFamily build_biased_family(const SetSplitInstance& instance,
                                 const Rational& p, const Rational& q);

// The five-atom distribution {sgn(p) 1; (z,1,-1); (-z,1,-1); (-z,-1,1);
// (z,-1,1)} with probabilities {|p|, (1-|p|)(1+q)/4, (1-|p|)(1+q)/4,
// (1-|p|)(1-q)/4, (1-|p|)(1-q)/4}. z must split every set (A z = 0), else
// Error{precondition}. Every support atom lies in ker M, so the covariance
// of M x is exactly zero.
SigningDistribution five_point_distribution(const BiasedFamily& family,
                                            const Assignment& z);

struct ThreeTerms {
  double discrepancy = 0.0;  // E || A x1 - 2 (x2 + x3) ||^2
  double proj_second = 0.0;  // E || P x2 ||^2
  double proj_third = 0.0;   // E || P x3 ||^2

  double max() const;
};

// Splits E||M x||^2 into its three block contributions; each divided by D
// lower-bounds the covariance operator norm of the unscaled family.
// Error{precondition} if dist.target_mean differs from family.x0().
ThreeTerms three_term_decomposition(const BiasedFamily& family,
                                    const SigningDistribution& dist);

// Mean of a +-1 vector. ||P y||^2 = (1 - alpha^2) m.
double alpha_mean(const Eigen::VectorXi& y);

}  // namespace disclab
