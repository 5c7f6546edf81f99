#pragma once

// Unique information over the coupling polytope, the classical four-term
// decomposition, and the deficiency-induced decomposition with comparisons.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "chandef/prob.hpp"
#include "chandef/projection.hpp"

namespace chandef {

// Couplings Q(x,z | y) for every y with P(y) > 0, each matching the row
// marginals P(x|y) and column marginals P(z|y).
struct CouplingFamily {
  std::vector<std::size_t> y_symbols;
  std::vector<std::vector<std::vector<double>>> q;  // per listed y, |X| x |Z|
};

enum class PidKind { Classical, DeficiencyInduced };

struct PidTerms {
  double ui_x, ui_z, si, ci;  // bits
  PidKind kind;
  bool degenerate = false;  // +inf deficiency propagated
  std::optional<CouplingFamily> coupling;  // classical witness
  std::optional<std::pair<DeficiencyResult, DeficiencyResult>>
      deficiencies;  // deficiency-induced witness (delta^X, delta^Z)
};

struct UniqueInformationResult {
  double ui_bits;
  CouplingFamily coupling;
  double fw_gap;  // final Frank-Wolfe gap, bits
  std::size_t iterations;
  bool converged;
  std::vector<double> objective_trace;  // objective after each accepted step
};

// min over Delta_P of I_Q(Y;X|Z), by Frank-Wolfe over the per-y
// transportation polytopes with exact line search; the linear subproblems
// use the bundled simplex.
UniqueInformationResult unique_information(const Joint3& p, double tol = 1e-7,
                                           std::size_t max_iter = 50000);

PidTerms classical_decomposition(const Joint3& p, double tol = 1e-7);

// Exchanges the X and Z axes; an involution.
Joint3 swap_xz(const Joint3& p);

PidTerms deficiency_decomposition(const Joint3& p, double tol = 1e-10);

struct DecompositionComparison {
  PidTerms classical;
  PidTerms deficiency_induced;
  // Signed slacks of the four comparison inequalities, each nonnegative up
  // to solver tolerance: UI - ~UI, UI_Z - ~UI_Z, ~SI - SI, ~CI - CI.
  double slack_ui_x, slack_ui_z, slack_si, slack_ci;
  bool near_equality;  // every slack below the reporting tolerance
};

DecompositionComparison compare_decompositions(const Joint3& p,
                                               double tol = 1e-3);

}  // namespace chandef
