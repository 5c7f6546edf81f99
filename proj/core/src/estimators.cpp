#include "chandef/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace chandef {

namespace {

std::uint64_t splitmix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ull;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
  return v ^ (v >> 31);
}

// Counter-based draw from the encoder row: sample (i, j) is a pure function
// of (seed, i, j), so paired estimators see identical z_ij.
std::size_t sample_z(const Channel& e, std::size_t x, std::uint64_t seed,
                     std::size_t i, std::size_t j) {
  const std::uint64_t h =
      splitmix64(seed ^ splitmix64(0x6a09e667f3bcc909ull + i) ^
                 splitmix64(0xbb67ae8584caa73bull * (j + 1)));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  double acc = 0.0;
  const std::size_t nz = e.output_size();
  for (std::size_t z = 0; z < nz; ++z) {
    acc += e.at(x, z);
    if (u < acc) return z;
  }
  return nz - 1;
}

struct Accum {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stderror() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(sum_sq / static_cast<double>(n) - m * m, 0.0);
    return std::sqrt(var / static_cast<double>(n - 1));
  }
};

struct PerSample {
  double vdb;
  double vib;
};

PerSample sample_terms(const DataPairs& data, const Channel& e, const Channel& d,
                       const EstimatorConfig& cfg, std::size_t m,
                       const ProbVector& r, std::size_t i) {
  const auto [x, y] = data[i % data.size()];
  if (x >= e.input_size() || y >= d.output_size()) {
    throw std::invalid_argument("estimator: data symbol outside alphabet");
  }
  double lik_sum = 0.0;   // (1/M) sum_j d(y|z_j), accumulated in index order
  double log_sum = 0.0;   // (1/M) sum_j log2 d(y|z_j)
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t z = sample_z(e, x, cfg.seed, i, j);
    const double lik = d.at(z, y);
    lik_sum += lik;
    log_sum += lik > 0.0 ? std::log2(lik) : -kInf;
  }
  const double kl = cfg.beta != 0.0
                        ? cfg.beta * kl_divergence(e.row_dist(x), r)
                        : 0.0;
  const double md = static_cast<double>(m);
  const double vdb = (lik_sum > 0.0 ? -std::log2(lik_sum / md) : kInf) + kl;
  const double vib = -(log_sum / md) + kl;
  return {vdb, vib};
}

ProbVector reference_of(const Channel& e, const EstimatorConfig& cfg) {
  if (cfg.reference) {
    if (cfg.reference->size() != e.output_size()) {
      throw std::invalid_argument("estimator: reference size mismatch");
    }
    return *cfg.reference;
  }
  return ProbVector::uniform(e.output_size());
}

void check_inputs(const DataPairs& data, const Channel& e, const Channel& d,
                  const EstimatorConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("estimator: empty data");
  if (cfg.m_samples < 1 || cfg.batch < 1) {
    throw std::invalid_argument("estimator: m_samples and batch must be >= 1");
  }
  if (e.output_size() != d.input_size()) {
    throw std::invalid_argument("estimator: encoder/decoder alphabets differ");
  }
}

}  // namespace

double vdb_estimate(const DataPairs& data, const Channel& e, const Channel& d,
                    const EstimatorConfig& cfg) {
  check_inputs(data, e, d, cfg);
  const ProbVector r = reference_of(e, cfg);
  double total = 0.0;
  for (std::size_t i = 0; i < cfg.batch; ++i) {
    total += sample_terms(data, e, d, cfg, cfg.m_samples, r, i).vdb;
  }
  return total / static_cast<double>(cfg.batch);
}

double vib_estimate(const DataPairs& data, const Channel& e, const Channel& d,
                    const EstimatorConfig& cfg) {
  check_inputs(data, e, d, cfg);
  const ProbVector r = reference_of(e, cfg);
  double total = 0.0;
  for (std::size_t i = 0; i < cfg.batch; ++i) {
    total += sample_terms(data, e, d, cfg, cfg.m_samples, r, i).vib;
  }
  return total / static_cast<double>(cfg.batch);
}

std::vector<PairedRow> paired_objective_report(
    const DataPairs& data, const Channel& e, const Channel& d,
    const EstimatorConfig& cfg, const std::vector<std::size_t>& m_grid) {
  check_inputs(data, e, d, cfg);
  const ProbVector r = reference_of(e, cfg);
  std::vector<PairedRow> rows;
  for (std::size_t m : m_grid) {
    Accum a_vdb, a_vib, a_gap;
    for (std::size_t i = 0; i < cfg.batch; ++i) {
      const PerSample s = sample_terms(data, e, d, cfg, m, r, i);
      a_vdb.add(s.vdb);
      a_vib.add(s.vib);
      a_gap.add(s.vib - s.vdb);
    }
    rows.push_back({m, a_vdb.mean(), a_vib.mean(), a_gap.mean(),
                    a_vdb.stderror(), a_vib.stderror(), a_gap.stderror()});
  }
  return rows;
}

}  // namespace chandef
