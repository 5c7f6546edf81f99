#pragma once

// rI-projection onto the convex hull of decoder rows, the deficiency
// functional, and the Blackwell input-degradedness test.

#include <cstddef>
#include <optional>
#include <vector>

#include "chandef/prob.hpp"

namespace chandef {

struct RiProjectionResult {
  ProbVector weights;       // mixing weights over the atoms
  ProbVector point;         // the projection point, sum_z w_z atom_z
  double divergence_bits;   // attained KL(target || point)
  std::size_t iterations;
  bool converged;           // optimality certificate met within tol
  std::vector<double> divergence_trace;  // divergence after each update
};

// Minimizes KL(target || sum_z w_z atom_z) over mixing weights w on the
// simplex, by multiplicative EM updates from a uniform start. Stops when the
// duality certificate bounds the suboptimality below `tol`, when successive
// improvement stalls, or at `max_iter`. If the target is exactly one of the
// atoms, the weight goes on the lowest such index. Returns +inf divergence
// when some target-support symbol has zero probability under every atom.
RiProjectionResult ri_project(const ProbVector& target,
                              const std::vector<ProbVector>& atoms,
                              double tol = 1e-10, std::size_t max_iter = 10000);

// Convenience overload: the atoms are the rows of a channel.
RiProjectionResult ri_project(const ProbVector& target, const Channel& atoms,
                              double tol = 1e-10, std::size_t max_iter = 10000);

struct PerInputProjection {
  std::size_t x;
  ProbVector point;        // q*_{x_d}
  double divergence_bits;  // KL(kappa_x || q*_{x_d})
};

struct DeficiencyResult {
  double value;            // pi-weighted divergence, bits; may be +inf
  Channel encoder;         // the minimizing e, X -> Z
  std::vector<PerInputProjection> per_input;
  bool converged;
};

// Deficiency of d w.r.t. kappa under input distribution pi. Decomposes into
// |X| independent rI-projections; inputs with pi(x) = 0 get uniform encoder
// rows and contribute nothing to the value.
DeficiencyResult deficiency(const Channel& d, const Channel& kappa,
                            const ProbVector& pi, double tol = 1e-10,
                            std::size_t max_iter = 10000);

struct BlackwellResult {
  bool sufficient;
  std::optional<Channel> witness_encoder;  // present when sufficient
  double max_residual;  // worst per-input L_inf residual of d o e vs kappa
};

// Exact per-input linear feasibility: does some encoder e satisfy
// d o e = kappa? Solved by the bundled two-phase simplex.
BlackwellResult blackwell_sufficient(const Channel& d, const Channel& kappa,
                                     double tol = 1e-8);

}  // namespace chandef
