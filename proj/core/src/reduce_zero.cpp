#include "disclab/reduce_zero.hpp"

#include <string>

namespace disclab {

Eigen::MatrixXd VectorFamily::dense_columns() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, N);
  for (int j = 0; j < N; ++j)
    for (const Entry& e : columns[static_cast<std::size_t>(j)])
      out(e.coord, j) = scale() * e.value;
  return out;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>
VectorFamily::int_columns() const {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, N);
  for (int j = 0; j < N; ++j)
    for (const Entry& e : columns[static_cast<std::size_t>(j)])
      out(e.coord, j) = e.value;
  return out;
}

VectorFamily build_vector_family(const SetSplitInstance& instance) {
  instance.validate();
  if (instance.m() == 0)
    fail(ErrorKind::construction, "instance has no sets");

  const int n = instance.n;
  const int m = instance.m();
  const auto deg = instance.occurrences();
  for (int i = 0; i < n; ++i) {
    if (deg[static_cast<std::size_t>(i)] == 0)
      fail(ErrorKind::construction,
           "element " + std::to_string(i + 1) + " occurs in no set");
    if (deg[static_cast<std::size_t>(i)] > 3)
      fail(ErrorKind::construction,
           "element " + std::to_string(i + 1) + " occurs in more than 3 sets");
  }

  // Set indices containing each element, in set order.
  std::vector<std::vector<int>> contains(static_cast<std::size_t>(n));
  for (int j = 0; j < m; ++j)
    for (int e : instance.sets[static_cast<std::size_t>(j)])
      contains[static_cast<std::size_t>(e - 1)].push_back(j);

  VectorFamily fam;
  fam.m = m;
  fam.n = n;
  for (int i = 0; i < n; ++i) {
    const int k = deg[static_cast<std::size_t>(i)];
    if (k == 1) ++fam.n1;
    if (k == 2) ++fam.n2;
  }
  fam.d = m + 4 * fam.n1 + 5 * fam.n2;
  fam.N = n + 2 * fam.n1 + 3 * fam.n2;
  fam.columns.assign(static_cast<std::size_t>(fam.N), {});
  fam.roles.assign(static_cast<std::size_t>(fam.N), {});

  // Gadget coordinate blocks, one per low-occurrence element.
  int next_coord = m;
  std::vector<int> block_start(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int k = deg[static_cast<std::size_t>(i)];
    if (k == 3) continue;
    const int width = (k == 1) ? 4 : 5;
    block_start[static_cast<std::size_t>(i)] = next_coord;
    fam.blocks.push_back({i + 1, next_coord, width});
    next_coord += width;
  }

  // Gadget columns follow the n element columns, grouped by element.
  int next_col = n;
  auto gadget_col = [&](int element_idx, int h) {
    const int col = next_col++;
    fam.roles[static_cast<std::size_t>(col)] = {element_idx + 1, h};
    return col;
  };
  auto put = [&](int col, int coord, int value) {
    fam.columns[static_cast<std::size_t>(col)].push_back({coord, value});
  };

  for (int i = 0; i < n; ++i) {
    const int k = deg[static_cast<std::size_t>(i)];
    const auto& in_sets = contains[static_cast<std::size_t>(i)];
    fam.roles[static_cast<std::size_t>(i)] = {i + 1, 0};
    if (k == 3) {
      for (int j : in_sets) put(i, j, 1);
      continue;
    }
    const int base = block_start[static_cast<std::size_t>(i)];
    if (k == 1) {
      // v_i on its set coordinate and the first two block coordinates; the
      // two gadget columns overlap it so the four block coordinates admit a
      // signed cancellation for either sign of z(i).
      put(i, in_sets[0], 1);
      put(i, base + 0, 1);
      put(i, base + 1, 1);
      const int u1 = gadget_col(i, 1);
      put(u1, base + 0, 1);
      put(u1, base + 2, 1);
      put(u1, base + 3, 1);
      const int u2 = gadget_col(i, 2);
      put(u2, base + 1, -1);
      put(u2, base + 2, 1);
      put(u2, base + 3, 1);
    } else {  // k == 2
      put(i, in_sets[0], 1);
      put(i, in_sets[1], 1);
      put(i, base + 0, 1);
      const int u1 = gadget_col(i, 1);
      put(u1, base + 0, 1);
      put(u1, base + 1, 1);
      put(u1, base + 2, 1);
      const int u2 = gadget_col(i, 2);
      put(u2, base + 1, 1);
      put(u2, base + 3, 1);
      put(u2, base + 4, 1);
      const int u3 = gadget_col(i, 3);
      put(u3, base + 2, -1);
      put(u3, base + 3, 1);
      put(u3, base + 4, 1);
    }
  }

  return fam;
}

Eigen::VectorXi complete_signing(const VectorFamily& family, const Assignment& z) {
  if (z.size() != family.n)
    fail(ErrorKind::dimension, "assignment length " + std::to_string(z.size()) +
                                   " does not match universe size " +
                                   std::to_string(family.n));
  z.validate();
  Eigen::VectorXi y(family.N);
  for (int i = 0; i < family.n; ++i) y(i) = z.values[static_cast<std::size_t>(i)];
  // Gadget signs alternate starting from -z(i); this cancels the block
  // coordinates exactly for both gadget shapes.
  for (int col = family.n; col < family.N; ++col) {
    const auto& role = family.roles[static_cast<std::size_t>(col)];
    const int zi = z.values[static_cast<std::size_t>(role.element - 1)];
    y(col) = (role.gadget % 2 == 1) ? -zi : zi;
  }
  return y;
}

Eigen::VectorXi signed_sum_unscaled(const VectorFamily& family,
                                    const Eigen::VectorXi& y) {
  if (y.size() != family.N)
    fail(ErrorKind::dimension, "signing length does not match column count");
  Eigen::VectorXi w = Eigen::VectorXi::Zero(family.d);
  for (int j = 0; j < family.N; ++j)
    for (const auto& e : family.columns[static_cast<std::size_t>(j)])
      w(e.coord) += y(j) * e.value;
  return w;
}

SigningDistribution zero_cov_distribution(const VectorFamily& family,
                                          const Assignment& z) {
  Eigen::VectorXi y = complete_signing(family, z);
  Eigen::VectorXi w = signed_sum_unscaled(family, y);
  for (int j = 0; j < family.m; ++j)
    if (w(j) != 0)
      fail(ErrorKind::precondition,
           "assignment does not split set " + std::to_string(j + 1));
  SigningDistribution dist;
  dist.target_mean = Eigen::VectorXd::Zero(family.N);
  dist.support.push_back({y, 0.5});
  dist.support.push_back({-y, 0.5});
  return dist;
}

double trace_gap_bound(const VectorFamily& family, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    fail(ErrorKind::parameter, "gamma must lie in [0, 1]");
  return gamma * static_cast<double>(family.N) / static_cast<double>(family.d);
}

}  // namespace disclab
