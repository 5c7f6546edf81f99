#include "chandef/linprog.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace chandef {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kFeasEps = 1e-9;

struct Tableau {
  std::size_t m, n;              // constraints, structural variables
  std::vector<double> t;         // m x (n + m + 1), artificials then rhs
  std::vector<std::size_t> basis;  // basic variable per row

  double& at(std::size_t i, std::size_t j) { return t[i * (n + m + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * (n + m + 1) + j]; }
  std::size_t rhs() const { return n + m; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t j = 0; j <= n + m; ++j) at(pr, j) /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n + m; ++j) at(i, j) -= f * at(pr, j);
    }
    basis[pr] = pc;
  }

  // Minimizes cost over columns [0, limit) with Bland's rule.
  void run(const std::vector<double>& cost, std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        double red = cost[j];
        for (std::size_t i = 0; i < m; ++i) red -= cost[basis[i]] * at(i, j);
        if (red < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return;  // optimal
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (at(i, enter) > kPivotEps) {
          const double ratio = at(i, rhs()) / at(i, enter);
          if (ratio < best - 1e-15 ||
              (ratio < best + 1e-15 && (leave == m || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == m) return;  // unbounded along this column
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("solve_lp: b size mismatch");

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.t.assign(m * (n + m + 1), 0.0);
  tb.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("solve_lp: row size mismatch");
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sign * a[i][j];
    tb.at(i, n + i) = 1.0;
    tb.at(i, tb.rhs()) = sign * b[i];
    tb.basis[i] = n + i;
  }

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t j = n; j < n + m; ++j) phase1[j] = 1.0;
  tb.run(phase1, n + m);

  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] >= n) infeas += tb.at(i, tb.rhs());
  }

  LpResult res;
  res.infeasibility = std::max(infeas, 0.0);
  auto extract = [&]() {
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] < n) res.x[tb.basis[i]] = std::max(tb.at(i, tb.rhs()), 0.0);
    }
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  };

  if (infeas > kFeasEps) {
    res.status = LpStatus::Infeasible;
    extract();
    return res;
  }

  // Drive any remaining zero-level artificials out of the basis.
  for (std::size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    std::size_t pc = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tb.at(i, j)) > kPivotEps) {
        pc = j;
        break;
      }
    }
    if (pc < n) tb.pivot(i, pc);
    // otherwise the row is redundant; its artificial stays basic at zero
  }

  // Phase 2 over the structural columns only.
  std::vector<double> phase2(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  tb.run(phase2, n);

  res.status = LpStatus::Optimal;
  extract();
  return res;
}

std::vector<std::vector<double>> transport_lp(
    const std::vector<std::vector<double>>& cost, const std::vector<double>& r,
    const std::vector<double>& s) {
  const std::size_t nr = r.size(), nc = s.size();
  // Row-sum constraints plus all but the last column-sum constraint (the
  // dropped one is implied by the matching totals).
  std::vector<std::vector<double>> a(nr + nc - 1, std::vector<double>(nr * nc, 0.0));
  std::vector<double> b(nr + nc - 1, 0.0);
  std::vector<double> c(nr * nc, 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    b[i] = r[i];
    for (std::size_t j = 0; j < nc; ++j) {
      a[i][i * nc + j] = 1.0;
      c[i * nc + j] = cost[i][j];
    }
  }
  for (std::size_t j = 0; j + 1 < nc; ++j) {
    b[nr + j] = s[j];
    for (std::size_t i = 0; i < nr; ++i) a[nr + j][i * nc + j] = 1.0;
  }
  LpResult lp = solve_lp(a, b, c);
  if (lp.status != LpStatus::Optimal) {
    throw std::invalid_argument("transport_lp: marginals are not consistent");
  }
  std::vector<std::vector<double>> q(nr, std::vector<double>(nc, 0.0));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) q[i][j] = lp.x[i * nc + j];
  return q;
}

}  // namespace chandef
