#pragma once

// Small dense two-phase simplex for linear programs in standard form:
//   min c'x  s.t.  Ax = b, x >= 0.
// Intended for the tiny subproblems that arise here (tens of variables).

#include <vector>

namespace chandef {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  std::vector<double> x;   // primal solution (best feasibility attempt when infeasible)
  double objective;        // c'x at x
  double infeasibility;    // phase-1 optimum: minimal attainable sum of |Ax - b|
};

// Rows of `a` are the equality constraints. Redundant constraints are
// tolerated (their artificials are driven to zero or the row is ignored).
LpResult solve_lp(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c);

// Linear minimization over a transportation polytope:
//   min sum_{ij} cost[i][j] q[i][j]  s.t. row sums = r, col sums = s, q >= 0.
// Returns a vertex of the polytope. Requires sum(r) == sum(s).
std::vector<std::vector<double>> transport_lp(
    const std::vector<std::vector<double>>& cost, const std::vector<double>& r,
    const std::vector<double>& s);

}  // namespace chandef
