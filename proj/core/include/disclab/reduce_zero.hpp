#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "disclab/distribution.hpp"
#include "disclab/setsplit.hpp"

namespace disclab {

// Unit-norm vector family produced from a set-splitting instance whose
// elements each occur in one, two or three sets. Coordinates are laid out as
// [set coordinates 0..m-1][per-element gadget blocks in element order], and
// columns as [element columns 1..n][gadget columns in element order].
//
// Every column has exactly three nonzero entries of +-1, stored unscaled;
// the actual vectors carry a global factor of 1/sqrt(3), which makes all
// cancellation checks integer-exact.
struct VectorFamily {
  struct Entry {
    int coord = 0;  // 0-indexed coordinate
    int value = 0;  // +1 or -1, unscaled
  };

  // Column provenance: gadget == 0 marks the element's own vector, gadget
  // h >= 1 the h-th auxiliary vector attached to that element.
  struct Role {
    int element = 0;  // 1-indexed universe element
    int gadget = 0;
  };

  struct GadgetBlock {
    int element = 0;      // 1-indexed
    int first_coord = 0;  // 0-indexed start of the block
    int width = 0;        // 4 for occurrence-1 elements, 5 for occurrence-2
  };

  int d = 0;   // coordinate count: m + 4*n1 + 5*n2
  int N = 0;   // column count:     n + 2*n1 + 3*n2
  int m = 0;
  int n = 0;
  int n1 = 0;  // elements occurring once
  int n2 = 0;  // elements occurring twice

  std::vector<std::vector<Entry>> columns;
  std::vector<Role> roles;
  std::vector<GadgetBlock> blocks;

  static double scale() { return 0.5773502691896257645; }  // 1/sqrt(3)

  Eigen::MatrixXd dense_columns() const;  // scaled, unit-norm columns
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> int_columns() const;
};

// Builds the family. Every element must occur in 1..3 sets; anything else is
// an Error{construction}. m must be positive.
VectorFamily build_vector_family(const SetSplitInstance& instance);

// Extends an assignment of the universe to a signing of all N columns whose
// signed sum vanishes on every gadget coordinate (coordinates m..d-1).
Eigen::VectorXi complete_signing(const VectorFamily& family, const Assignment& z);

// Integer signed sum sum_i y(i) * column_i in the unscaled representation.
Eigen::VectorXi signed_sum_unscaled(const VectorFamily& family,
                                    const Eigen::VectorXi& y);

// Two-point distribution {y, -y} at probability 1/2 each, built from an
// assignment that splits every set; its covariance is exactly zero.
// Error{precondition} if some set is unsplit.
SigningDistribution zero_cov_distribution(const VectorFamily& family,
                                          const Assignment& z);

// gamma * N / d for the family's actual dimensions; at least 4*gamma/23 for
// families derived from (3,2-2) instances. gamma must lie in [0, 1].
double trace_gap_bound(const VectorFamily& family, double gamma);

}  // namespace disclab
