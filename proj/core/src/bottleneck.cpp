#include "chandef/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace chandef {

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform rows with a seeded symmetry-breaking perturbation; exactly uniform
// rows are a fixed point of the update dynamics.
std::vector<double> perturbed_uniform_rows(std::size_t n_rows, std::size_t n_cols,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> rows(n_rows * n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      rows[r * n_cols + c] = 1.0 / static_cast<double>(n_cols) + 0.01 * u01(rng);
      s += rows[r * n_cols + c];
    }
    for (std::size_t c = 0; c < n_cols; ++c) rows[r * n_cols + c] /= s;
  }
  return rows;
}

std::vector<double> marginal_of(const std::vector<double>& px,
                                const std::vector<double>& e, std::size_t nz) {
  std::vector<double> m(nz, 0.0);
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t z = 0; z < nz; ++z) m[z] += px[x] * e[x * nz + z];
  return m;
}

double rate_of(const std::vector<double>& px, const std::vector<double>& e,
               std::size_t nz) {
  const std::vector<double> m = marginal_of(px, e, nz);
  double rate = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t z = 0; z < nz; ++z) {
      const double v = e[x * nz + z];
      if (v > 0.0) rate += px[x] * v * std::log2(v / m[z]);
    }
  }
  return std::max(rate, 0.0);
}

// ---------------------------------------------------------------------------
// Classical IB by self-consistent fixed-point sweeps.
// ---------------------------------------------------------------------------

struct IbProblem {
  std::size_t nx, ny, nz;
  std::vector<double> px;       // p(x)
  std::vector<double> py_x;     // p(y|x), nx x ny
  double iyx;                   // I(X;Y), constant offset of the objective
};

struct IterateResult {
  std::vector<double> encoder;
  std::vector<double> decoder;  // p(y|z)
  double objective;
  double rate;
  double sufficiency;
  bool converged;
  std::vector<double> trace;
};

void ib_decoder_of(const IbProblem& pr, const std::vector<double>& e,
                   std::vector<double>& m, std::vector<double>& d) {
  m = marginal_of(pr.px, e, pr.nz);
  d.assign(pr.nz * pr.ny, 0.0);
  for (std::size_t z = 0; z < pr.nz; ++z) {
    if (m[z] <= 0.0) {
      for (std::size_t y = 0; y < pr.ny; ++y) d[z * pr.ny + y] = 1.0 / pr.ny;
      continue;
    }
    for (std::size_t x = 0; x < pr.nx; ++x) {
      const double w = pr.px[x] * e[x * pr.nz + z] / m[z];
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < pr.ny; ++y) d[z * pr.ny + y] += w * pr.py_x[x * pr.ny + y];
    }
  }
}

double ib_objective(const IbProblem& pr, const std::vector<double>& e,
                    double beta, double* rate_out, double* suff_out) {
  const std::vector<double> m = marginal_of(pr.px, e, pr.nz);
  std::vector<double> joint_zy(pr.nz * pr.ny, 0.0);
  for (std::size_t x = 0; x < pr.nx; ++x)
    for (std::size_t z = 0; z < pr.nz; ++z) {
      const double w = pr.px[x] * e[x * pr.nz + z];
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < pr.ny; ++y) {
        joint_zy[z * pr.ny + y] += w * pr.py_x[x * pr.ny + y];
      }
    }
  const double izy = mutual_information(Matrix(pr.nz, pr.ny, joint_zy));
  const double rate = rate_of(pr.px, e, pr.nz);
  if (rate_out) *rate_out = rate;
  if (suff_out) *suff_out = izy;
  return pr.iyx - izy + beta * rate;
}

IterateResult ib_iterate(const IbProblem& pr, std::vector<double> e,
                         const BottleneckConfig& cfg) {
  std::vector<double> m, d;
  double obj = ib_objective(pr, e, cfg.beta, nullptr, nullptr);
  std::vector<double> trace = {obj};
  bool converged = false;
  for (std::size_t it = 0; it < cfg.max_outer_iter; ++it) {
    ib_decoder_of(pr, e, m, d);
    std::vector<double> e_new(e.size(), 0.0);
    for (std::size_t x = 0; x < pr.nx; ++x) {
      std::vector<double> score(pr.nz);
      for (std::size_t z = 0; z < pr.nz; ++z) {
        double kl = 0.0;
        for (std::size_t y = 0; y < pr.ny; ++y) {
          const double p = pr.py_x[x * pr.ny + y];
          if (p > 0.0) {
            const double q = d[z * pr.ny + y];
            kl = q > 0.0 ? kl + p * std::log2(p / q) : kInf;
          }
        }
        score[z] = kl;
      }
      if (cfg.beta == 0.0) {
        std::size_t best = 0;
        for (std::size_t z = 1; z < pr.nz; ++z) {
          if (score[z] < score[best]) best = z;
        }
        e_new[x * pr.nz + best] = 1.0;
        continue;
      }
      // e(z|x) proportional to m(z) 2^{-KL/beta}, computed in log space.
      double top = -kInf;
      std::vector<double> lg(pr.nz, -kInf);
      for (std::size_t z = 0; z < pr.nz; ++z) {
        if (m[z] > 0.0 && score[z] < kInf) {
          lg[z] = std::log2(m[z]) - score[z] / cfg.beta;
          top = std::max(top, lg[z]);
        }
      }
      double s = 0.0;
      for (std::size_t z = 0; z < pr.nz; ++z) {
        e_new[x * pr.nz + z] = lg[z] > -kInf ? std::exp2(lg[z] - top) : 0.0;
        s += e_new[x * pr.nz + z];
      }
      for (std::size_t z = 0; z < pr.nz; ++z) e_new[x * pr.nz + z] /= s;
    }
    const double next = ib_objective(pr, e_new, cfg.beta, nullptr, nullptr);
    if (next > obj + 1e-12) break;  // arithmetic-noise guard; keep the old iterate
    e = std::move(e_new);
    const double improvement = obj - next;
    obj = next;
    trace.push_back(obj);
    if (improvement <= cfg.tol * std::max(1.0, std::abs(obj))) {
      converged = true;
      break;
    }
  }
  IterateResult res;
  res.objective = ib_objective(pr, e, cfg.beta, &res.rate, &res.sufficiency);
  ib_decoder_of(pr, e, m, d);
  res.encoder = std::move(e);
  res.decoder = std::move(d);
  res.converged = converged;
  res.trace = std::move(trace);
  return res;
}

CurvePoint ib_point_from(const IbProblem& pr, const BottleneckConfig& cfg,
                         const std::vector<std::vector<double>>& inits) {
  IterateResult best;
  bool have = false;
  for (const auto& init : inits) {
    IterateResult r = ib_iterate(pr, init, cfg);
    if (!have || r.objective < best.objective) {
      best = std::move(r);
      have = true;
    }
  }
  return {cfg.beta, best.rate, best.sufficiency, best.objective,
          Channel(pr.nx, pr.nz, std::move(best.encoder)),
          Channel(pr.nz, pr.ny, std::move(best.decoder)),
          best.converged, std::move(best.trace)};
}

IbProblem make_ib_problem(const Matrix& p_xy, const BottleneckConfig& cfg) {
  if (cfg.z_cardinality < 1) throw std::invalid_argument("ib_solve: z_cardinality < 1");
  IbProblem pr;
  pr.nx = p_xy.rows();
  pr.ny = p_xy.cols();
  pr.nz = cfg.z_cardinality;
  pr.px.resize(pr.nx);
  pr.py_x.assign(pr.nx * pr.ny, 0.0);
  for (std::size_t x = 0; x < pr.nx; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < pr.ny; ++y) s += p_xy.at(x, y);
    pr.px[x] = s;
    for (std::size_t y = 0; y < pr.ny; ++y) {
      pr.py_x[x * pr.ny + y] = s > 0.0 ? p_xy.at(x, y) / s : 1.0 / pr.ny;
    }
  }
  pr.iyx = mutual_information(p_xy);
  return pr;
}

// Dirichlet-style fully random rows; the near-uniform starts alone can fall
// into the trivial fixed point when beta sits near a critical value.
std::vector<double> random_rows(std::size_t n_rows, std::size_t n_cols,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> rows(n_rows * n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      rows[r * n_cols + c] = -std::log(std::max(u01(rng), 1e-300));
      s += rows[r * n_cols + c];
    }
    for (std::size_t c = 0; c < n_cols; ++c) rows[r * n_cols + c] /= s;
  }
  return rows;
}

// Lightly smoothed hard assignment of row r to column r mod n_cols, shifted.
std::vector<double> partition_rows(std::size_t n_rows, std::size_t n_cols,
                                   std::size_t shift) {
  const double eps = 1e-3;
  std::vector<double> rows(n_rows * n_cols,
                           eps / static_cast<double>(n_cols));
  for (std::size_t r = 0; r < n_rows; ++r)
    rows[r * n_cols + (r + shift) % n_cols] += 1.0 - eps;
  return rows;
}

std::vector<std::vector<double>> seeded_inits(std::size_t n_rows, std::size_t n_cols,
                                              std::size_t restarts,
                                              std::uint64_t seed) {
  std::vector<std::vector<double>> inits;
  const std::size_t n = std::max<std::size_t>(restarts, 1);
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint64_t s = seed + 0x9e3779b9u * (r + 1);
    switch (r % 3) {
      case 0:
        inits.push_back(perturbed_uniform_rows(n_rows, n_cols, s));
        break;
      case 1:
        inits.push_back(random_rows(n_rows, n_cols, s));
        break;
      default:
        inits.push_back(partition_rows(n_rows, n_cols, r / 3));
        break;
    }
  }
  return inits;
}

// ---------------------------------------------------------------------------
// Discrete DB by alternating decoder / encoder minimization.
// ---------------------------------------------------------------------------

struct DbProblem {
  std::size_t nx, ny, nz;
  std::vector<double> px;     // pi
  std::vector<double> kappa;  // nx x ny
  double ixy;                 // I(X;Y) of the true joint
};

void db_compose(const DbProblem& pr, const std::vector<double>& e,
                const std::vector<double>& d, std::vector<double>& khat) {
  khat.assign(pr.nx * pr.ny, 0.0);
  for (std::size_t x = 0; x < pr.nx; ++x)
    for (std::size_t z = 0; z < pr.nz; ++z) {
      const double w = e[x * pr.nz + z];
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < pr.ny; ++y) khat[x * pr.ny + y] += w * d[z * pr.ny + y];
    }
}

double db_distortion(const DbProblem& pr, const std::vector<double>& khat) {
  double dist = 0.0;
  for (std::size_t x = 0; x < pr.nx; ++x) {
    if (pr.px[x] == 0.0) continue;
    for (std::size_t y = 0; y < pr.ny; ++y) {
      const double k = pr.kappa[x * pr.ny + y];
      if (k > 0.0) {
        const double kh = khat[x * pr.ny + y];
        if (kh <= 0.0) return kInf;
        dist += pr.px[x] * k * std::log2(k / kh);
      }
    }
  }
  return std::max(dist, 0.0);
}

double db_objective(const DbProblem& pr, const std::vector<double>& e,
                    const std::vector<double>& d, double beta,
                    double* rate_out, double* dist_out) {
  std::vector<double> khat;
  db_compose(pr, e, d, khat);
  const double dist = db_distortion(pr, khat);
  const double rate = rate_of(pr.px, e, pr.nz);
  if (rate_out) *rate_out = rate;
  if (dist_out) *dist_out = dist;
  return dist + beta * rate;
}

// One EM sweep on the decoder for fixed encoder; monotone on the distortion.
void db_decoder_sweep(const DbProblem& pr, const std::vector<double>& e,
                      std::vector<double>& d) {
  std::vector<double> khat;
  db_compose(pr, e, d, khat);
  std::vector<double> d_new(d.size(), 0.0);
  for (std::size_t x = 0; x < pr.nx; ++x) {
    if (pr.px[x] == 0.0) continue;
    for (std::size_t y = 0; y < pr.ny; ++y) {
      const double k = pr.kappa[x * pr.ny + y];
      if (k == 0.0 || khat[x * pr.ny + y] <= 0.0) continue;
      const double w = pr.px[x] * k / khat[x * pr.ny + y];
      for (std::size_t z = 0; z < pr.nz; ++z) {
        d_new[z * pr.ny + y] += w * e[x * pr.nz + z] * d[z * pr.ny + y];
      }
    }
  }
  for (std::size_t z = 0; z < pr.nz; ++z) {
    double s = 0.0;
    for (std::size_t y = 0; y < pr.ny; ++y) s += d_new[z * pr.ny + y];
    if (s > 0.0) {
      for (std::size_t y = 0; y < pr.ny; ++y) d[z * pr.ny + y] = d_new[z * pr.ny + y] / s;
    }
    // unused z: keep the current row
  }
}

// One encoder sweep for fixed decoder. beta = 0 reduces to per-input
// multiplicative EM; beta > 0 uses a mirror-descent step on the full
// objective with backtracking, so accepted sweeps never increase it.
void db_encoder_sweep(const DbProblem& pr, std::vector<double>& e,
                      const std::vector<double>& d, double beta, double& step) {
  std::vector<double> khat;
  db_compose(pr, e, d, khat);
  if (beta == 0.0) {
    for (std::size_t x = 0; x < pr.nx; ++x) {
      double s = 0.0;
      for (std::size_t z = 0; z < pr.nz; ++z) {
        double g = 0.0;
        for (std::size_t y = 0; y < pr.ny; ++y) {
          const double k = pr.kappa[x * pr.ny + y];
          if (k > 0.0 && khat[x * pr.ny + y] > 0.0) {
            g += k * d[z * pr.ny + y] / khat[x * pr.ny + y];
          }
        }
        e[x * pr.nz + z] *= g;
        s += e[x * pr.nz + z];
      }
      if (s > 0.0) {
        for (std::size_t z = 0; z < pr.nz; ++z) e[x * pr.nz + z] /= s;
      }
    }
    return;
  }
  const std::vector<double> m = marginal_of(pr.px, e, pr.nz);
  std::vector<double> grad(e.size(), 0.0);
  for (std::size_t x = 0; x < pr.nx; ++x)
    for (std::size_t z = 0; z < pr.nz; ++z) {
      double g = 0.0;
      for (std::size_t y = 0; y < pr.ny; ++y) {
        const double k = pr.kappa[x * pr.ny + y];
        if (k > 0.0 && khat[x * pr.ny + y] > 0.0) {
          g += k * d[z * pr.ny + y] / khat[x * pr.ny + y];
        }
      }
      const double ez = e[x * pr.nz + z];
      const double rate_g = (ez > 0.0 && m[z] > 0.0) ? std::log2(ez / m[z]) : 0.0;
      grad[x * pr.nz + z] = -g / std::numbers::ln2_v<double> + beta * rate_g;
    }
  const double f0 = db_objective(pr, e, d, beta, nullptr, nullptr);
  for (int tries = 0; tries < 40; ++tries) {
    std::vector<double> e_try(e.size());
    for (std::size_t x = 0; x < pr.nx; ++x) {
      double top = -kInf;
      for (std::size_t z = 0; z < pr.nz; ++z) {
        top = std::max(top, -step * grad[x * pr.nz + z]);
      }
      double s = 0.0;
      for (std::size_t z = 0; z < pr.nz; ++z) {
        e_try[x * pr.nz + z] =
            e[x * pr.nz + z] * std::exp(-step * grad[x * pr.nz + z] - top);
        s += e_try[x * pr.nz + z];
      }
      for (std::size_t z = 0; z < pr.nz; ++z) e_try[x * pr.nz + z] /= s;
    }
    const double f1 = db_objective(pr, e_try, d, beta, nullptr, nullptr);
    if (f1 <= f0) {
      e = std::move(e_try);
      if (tries == 0) step = std::min(step * 1.3, 64.0);
      return;
    }
    step *= 0.5;
  }
  // No improving step found at any tried length; leave the encoder as is.
}

IterateResult db_iterate(const DbProblem& pr, std::vector<double> e,
                         std::vector<double> d, const BottleneckConfig& cfg) {
  const std::size_t k = cfg.schedule.kind == Schedule::Kind::Sequential
                            ? std::max<std::size_t>(cfg.schedule.k, 1)
                            : 1;
  double obj = db_objective(pr, e, d, cfg.beta, nullptr, nullptr);
  std::vector<double> trace = {obj};
  double step = 1.0;
  bool converged = false;
  for (std::size_t it = 0; it < cfg.max_outer_iter; ++it) {
    db_decoder_sweep(pr, e, d);
    for (std::size_t s = 0; s < k; ++s) db_encoder_sweep(pr, e, d, cfg.beta, step);
    const double next = db_objective(pr, e, d, cfg.beta, nullptr, nullptr);
    const double improvement = obj - next;
    obj = next;
    trace.push_back(obj);
    if (improvement >= 0.0 && improvement <= cfg.tol * std::max(1.0, std::abs(obj))) {
      converged = true;
      break;
    }
  }
  IterateResult res;
  double dist = 0.0;
  res.objective = db_objective(pr, e, d, cfg.beta, &res.rate, &dist);
  res.encoder = std::move(e);
  res.decoder = std::move(d);
  res.converged = converged;
  res.trace = std::move(trace);
  // J(Z;Y) = H(Y) - cross-entropy; the cross-entropy of the composed model
  // is H(Y|X) plus the distortion, so J = I(X;Y) - distortion.
  res.sufficiency = dist == kInf ? -kInf : pr.ixy - dist;
  return res;
}

}  // namespace

std::vector<double> default_beta_grid(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    grid[i] = lo * std::pow(hi / lo, t);
  }
  return grid;
}

CurvePoint ib_solve(const Matrix& p_xy, const BottleneckConfig& config) {
  const IbProblem pr = make_ib_problem(p_xy, config);
  return ib_point_from(pr, config,
                       seeded_inits(pr.nx, pr.nz, config.restarts, config.seed));
}

std::vector<CurvePoint> ib_curve(const Matrix& p_xy,
                                 const std::vector<double>& beta_grid,
                                 const BottleneckConfig& config) {
  std::vector<double> betas = beta_grid;
  std::sort(betas.begin(), betas.end());
  const IbProblem pr = make_ib_problem(p_xy, config);
  std::vector<CurvePoint> points;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    BottleneckConfig cfg = config;
    cfg.beta = betas[i];
    std::vector<std::vector<double>> inits;
    if (i == 0) {
      inits = seeded_inits(pr.nx, pr.nz, cfg.restarts, cfg.seed);
    } else {
      inits.push_back(points.back().encoder.values());
      inits.push_back(perturbed_uniform_rows(pr.nx, pr.nz, cfg.seed + 7919 * i));
    }
    points.push_back(ib_point_from(pr, cfg, inits));
  }
  std::sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.rate_bits < b.rate_bits;
  });
  return points;
}

CurvePoint db_solve(const ProbVector& pi, const Channel& kappa,
                    const BottleneckConfig& config) {
  DbProblem pr;
  pr.nx = kappa.input_size();
  pr.ny = kappa.output_size();
  pr.nz = config.z_cardinality;
  pr.px = pi.probs();
  pr.kappa = kappa.values();
  pr.ixy = mutual_information(joint_from_prior_channel(pi, kappa));

  IterateResult best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(config.restarts, 1); ++r) {
    const std::uint64_t s = config.seed + 0x9e3779b9u * (r + 1);
    IterateResult res = db_iterate(pr, perturbed_uniform_rows(pr.nx, pr.nz, s),
                                   perturbed_uniform_rows(pr.nz, pr.ny, s + 1),
                                   config);
    if (!have || res.objective < best.objective) {
      best = std::move(res);
      have = true;
    }
  }
  return {config.beta, best.rate, best.sufficiency, best.objective,
          Channel(pr.nx, pr.nz, std::move(best.encoder)),
          Channel(pr.nz, pr.ny, std::move(best.decoder)),
          best.converged, std::move(best.trace)};
}

std::vector<CurvePoint> db_curve(const ProbVector& pi, const Channel& kappa,
                                 const std::vector<double>& beta_grid,
                                 const BottleneckConfig& config) {
  std::vector<double> betas = beta_grid;
  std::sort(betas.begin(), betas.end());
  DbProblem pr;
  pr.nx = kappa.input_size();
  pr.ny = kappa.output_size();
  pr.nz = config.z_cardinality;
  pr.px = pi.probs();
  pr.kappa = kappa.values();
  pr.ixy = mutual_information(joint_from_prior_channel(pi, kappa));

  std::vector<CurvePoint> points;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    BottleneckConfig cfg = config;
    cfg.beta = betas[i];
    if (i == 0) {
      points.push_back(db_solve(pi, kappa, cfg));
      continue;
    }
    IterateResult warm = db_iterate(pr, points.back().encoder.values(),
                                    points.back().decoder.values(), cfg);
    IterateResult fresh =
        db_iterate(pr, perturbed_uniform_rows(pr.nx, pr.nz, cfg.seed + 7919 * i),
                   perturbed_uniform_rows(pr.nz, pr.ny, cfg.seed + 7919 * i + 1),
                   cfg);
    IterateResult& best = fresh.objective < warm.objective ? fresh : warm;
    points.push_back({cfg.beta, best.rate, best.sufficiency, best.objective,
                      Channel(pr.nx, pr.nz, std::move(best.encoder)),
                      Channel(pr.nz, pr.ny, std::move(best.decoder)),
                      best.converged, std::move(best.trace)});
  }
  std::sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.rate_bits < b.rate_bits;
  });
  return points;
}

}  // namespace chandef
