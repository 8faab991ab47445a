#pragma once

#include <Eigen/Dense>
#include <vector>

namespace disclab {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  Eigen::VectorXd x;  // structural variables only
};

// Dense revised simplex for the oracle subproblems:
//
//   minimize c^T x   subject to   A x (= | <=) b,   x >= 0.
//
// Solves from scratch with the textbook two phases; '<='-rows can be appended
// after a solve, re-optimizing with the dual simplex from the previous basis.
// Pivot selection is index-deterministic (Dantzig with lowest-index ties,
// Bland fallback on long degenerate runs), so repeated runs produce identical
// bases and solutions.
class SimplexSolver {
 public:
  // row_type[r] is '=' or '<'. reserve_rows bounds how many rows may be
  // appended later; feasibility comparisons use tol (default 1e-9).
  SimplexSolver(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                const Eigen::VectorXd& c, const std::vector<char>& row_type,
                int reserve_rows = 0, double tol = 1e-9);

  LpResult solve();

  // Appends `coeffs^T x <= rhs` (structural coefficients only) and
  // re-optimizes. Falls back to a full solve if the dual simplex stalls.
  LpResult add_row_and_resolve(const Eigen::VectorXd& coeffs, double rhs);

  int rows() const { return nrows_; }
  int structural_count() const { return nstruct_; }

 private:
  // Basis entries: >= 0 is a column of cols_, -1-r is the artificial of row r.
  static constexpr int kArtificial = -1;

  void append_internal_row(const Eigen::VectorXd& coeffs, double rhs, char type);
  bool refactorize();
  bool pivot(int row, int col_entering, const Eigen::VectorXd& u);
  Eigen::VectorXd column(int j) const;
  Eigen::VectorXd basic_costs(const Eigen::VectorXd& cost_vec,
                              bool phase_one) const;
  int primal_loop(const Eigen::VectorXd& cost_vec, bool phase_one);
  int dual_loop();
  LpResult solve_once();
  LpResult extract(LpStatus status);

  int nrows_ = 0;
  int nstruct_ = 0;
  int ncols_ = 0;  // structural + slacks created so far
  double tol_ = 1e-9;

  Eigen::MatrixXd cols_;   // preallocated (row capacity) x (col capacity)
  Eigen::VectorXd rhs_;    // preallocated row capacity
  Eigen::VectorXd cost_;   // structural + slack costs (slacks 0)
  std::vector<char> row_type_;
  std::vector<int> slack_of_row_;  // -1 for '=' rows

  std::vector<int> basis_;
  std::vector<char> in_basis_;  // over columns
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  bool has_basis_ = false;
  bool force_bland_ = false;
  long long pivots_since_refactor_ = 0;
};

}  // namespace disclab
