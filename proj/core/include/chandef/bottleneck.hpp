#pragma once

// Trade-off curve solvers: the classical information bottleneck via
// self-consistent iterations, and the discrete deficiency bottleneck via
// alternating encoder-decoder minimization.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chandef/prob.hpp"

namespace chandef {

struct Schedule {
  enum class Kind { Oneshot, Sequential };
  Kind kind = Kind::Oneshot;
  std::size_t k = 1;  // encoder sweeps per decoder sweep (sequential)

  static Schedule oneshot() { return {Kind::Oneshot, 1}; }
  static Schedule sequential(std::size_t k) { return {Kind::Sequential, k}; }
};

struct BottleneckConfig {
  double beta = 0.1;
  std::size_t z_cardinality = 2;
  Schedule schedule = Schedule::oneshot();
  std::size_t max_outer_iter = 5000;
  double tol = 1e-9;  // relative objective improvement threshold
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
};

struct CurvePoint {
  double beta;
  double rate_bits;         // I(Z;X)
  double sufficiency_bits;  // I(Z;Y) for IB, J(Z;Y) for DB
  double objective_bits;
  Channel encoder;  // X -> Z
  Channel decoder;  // Z -> Y
  bool converged;
  std::vector<double> objective_trace;  // per accepted outer sweep
};

// Minimizes I(Y;X) - I(Z;Y) + beta * I(Z;X) over encoders on the Markov
// chain Y - X - Z, best of `restarts` seeded initializations.
CurvePoint ib_solve(const Matrix& p_xy, const BottleneckConfig& config);

// One solve per beta with warm starts across the grid; output sorted by rate.
std::vector<CurvePoint> ib_curve(const Matrix& p_xy,
                                 const std::vector<double>& beta_grid,
                                 const BottleneckConfig& config);

// Minimizes D_KL(kappa || d o e | pi) + beta * I_e(Z;X) by alternating
// decoder and encoder sweeps under the configured schedule.
CurvePoint db_solve(const ProbVector& pi, const Channel& kappa,
                    const BottleneckConfig& config);

std::vector<CurvePoint> db_curve(const ProbVector& pi, const Channel& kappa,
                                 const std::vector<double>& beta_grid,
                                 const BottleneckConfig& config);

// Default grid: logarithmically spaced betas, ascending.
std::vector<double> default_beta_grid(double lo = 1e-4, double hi = 1.0,
                                      std::size_t count = 30);

}  // namespace chandef
