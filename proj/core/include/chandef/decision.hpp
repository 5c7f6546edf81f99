#pragma once

// Log-loss Bayes risks, decoder-restricted risks, the risk-gap identity, and
// generic finite decision problems for Blackwell-ordering checks.

#include <cstddef>
#include <string>
#include <vector>

#include "chandef/prob.hpp"

namespace chandef {

struct RiskReport {
  double bayes_risk;       // H(Y|X), bits
  double restricted_risk;  // bits; may be +inf
  double gap;              // restricted - bayes
  std::vector<ProbVector> per_input_acts;  // q*_{x_d} per input
};

// Bayes risk under log-loss: H(Y|X) of the joint pi x kappa, in bits.
double bayes_risk_logloss(const ProbVector& pi, const Channel& kappa);

// Restricted Bayes risk when predictions are confined to the convex hull of
// the decoder rows; the per-input acts are rI-projections of kappa_x.
RiskReport restricted_bayes_risk(const ProbVector& pi, const Channel& kappa,
                                 const Channel& d, double tol = 1e-10);

struct RiskGapCheck {
  double gap;
  double deficiency;
  double abs_difference;
};

// Computes the risk gap and the deficiency through separate solver
// invocations and reports their difference.
RiskGapCheck verify_risk_gap_identity(const ProbVector& pi, const Channel& kappa,
                                      const Channel& d, double tol = 1e-10);

struct DecisionProblem {
  std::vector<std::string> actions;
  Matrix loss;       // |Y| x |actions|
  ProbVector prior;  // on Y
};

// Minimal expected loss when acting on the outputs of `channel` (from Y to
// observations); ties among optimal actions break toward the lowest index.
double optimal_risk(const DecisionProblem& problem, const Channel& channel);

}  // namespace chandef
