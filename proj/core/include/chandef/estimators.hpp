#pragma once

// Monte Carlo estimators of the empirical bottleneck objectives for discrete
// encoder/decoder pairs. Evaluation only; no gradient machinery.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chandef/prob.hpp"

namespace chandef {

struct EstimatorConfig {
  std::size_t m_samples = 1;  // encoder samples inside the estimator
  std::size_t batch = 1000;   // data points, drawn cyclically from the data
  double beta = 0.0;
  std::optional<ProbVector> reference;  // r on Z; uniform when absent
  std::uint64_t seed = 0;
};

using DataPairs = std::vector<std::pair<std::size_t, std::size_t>>;  // (x, y)

// (1/N) sum_i [ -log2( (1/M) sum_j d(y_i | z_ij) ) + beta KL(e(.|x_i) || r) ]
// with z_ij drawn from e(.|x_i) by a counter-based seeded generator, so the
// same config always yields the same samples. +inf terms are reported as is.
double vdb_estimate(const DataPairs& data, const Channel& e, const Channel& d,
                    const EstimatorConfig& cfg);

// Same, with the average over j outside the logarithm; shares the z_ij of
// vdb_estimate sample for sample because the generator is counter-based.
double vib_estimate(const DataPairs& data, const Channel& e, const Channel& d,
                    const EstimatorConfig& cfg);

struct PairedRow {
  std::size_t m;
  double mean_vdb;
  double mean_vib;
  double jensen_gap;  // mean_vib - mean_vdb
  double se_vdb;
  double se_vib;
  double se_gap;
};

// One row per entry of m_grid, both estimators evaluated on shared samples.
std::vector<PairedRow> paired_objective_report(const DataPairs& data,
                                               const Channel& e,
                                               const Channel& d,
                                               const EstimatorConfig& cfg,
                                               const std::vector<std::size_t>& m_grid);

}  // namespace chandef
