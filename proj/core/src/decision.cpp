#include "chandef/decision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chandef/projection.hpp"

namespace chandef {

double bayes_risk_logloss(const ProbVector& pi, const Channel& kappa) {
  return conditional_entropy(joint_from_prior_channel(pi, kappa));
}

RiskReport restricted_bayes_risk(const ProbVector& pi, const Channel& kappa,
                                 const Channel& d, double tol) {
  if (d.output_size() != kappa.output_size() || pi.size() != kappa.input_size()) {
    throw std::invalid_argument("restricted_bayes_risk: dimension mismatch");
  }
  std::vector<ProbVector> atoms;
  atoms.reserve(d.input_size());
  for (std::size_t z = 0; z < d.input_size(); ++z) atoms.push_back(d.row_dist(z));

  RiskReport rep{bayes_risk_logloss(pi, kappa), 0.0, 0.0, {}};
  for (std::size_t x = 0; x < pi.size(); ++x) {
    const ProbVector kx = kappa.row_dist(x);
    RiProjectionResult pr = ri_project(kx, atoms, tol);
    if (pi[x] > 0.0 && rep.restricted_risk != kInf) {
      if (pr.divergence_bits == kInf) {
        rep.restricted_risk = kInf;
      } else {
        double loss = 0.0;
        for (std::size_t y = 0; y < kx.size(); ++y) {
          if (kx[y] > 0.0) loss -= kx[y] * std::log2(pr.point[y]);
        }
        rep.restricted_risk += pi[x] * loss;
      }
    }
    rep.per_input_acts.push_back(std::move(pr.point));
  }
  rep.gap = rep.restricted_risk == kInf
                ? kInf
                : std::max(rep.restricted_risk - rep.bayes_risk, 0.0);
  return rep;
}

RiskGapCheck verify_risk_gap_identity(const ProbVector& pi, const Channel& kappa,
                                      const Channel& d, double tol) {
  const RiskReport rep = restricted_bayes_risk(pi, kappa, d, tol);
  const DeficiencyResult def = deficiency(d, kappa, pi, tol);
  const double diff = (rep.gap == kInf || def.value == kInf)
                          ? (rep.gap == def.value ? 0.0 : kInf)
                          : std::abs(rep.gap - def.value);
  return {rep.gap, def.value, diff};
}

double optimal_risk(const DecisionProblem& problem, const Channel& channel) {
  const std::size_t ny = problem.prior.size();
  const std::size_t na = problem.loss.cols();
  if (problem.loss.rows() != ny || channel.input_size() != ny) {
    throw std::invalid_argument("optimal_risk: dimension mismatch");
  }
  double risk = 0.0;
  for (std::size_t o = 0; o < channel.output_size(); ++o) {
    double best = kInf;
    for (std::size_t a = 0; a < na; ++a) {
      double expected = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        expected += problem.prior[y] * channel.at(y, o) * problem.loss.at(y, a);
      }
      if (expected < best) best = expected;  // strict: ties keep the lowest index
    }
    risk += best;
  }
  return risk;
}

}  // namespace chandef
