// Brute-force reference implementations used to cross-check the library's
// iterative solvers. Everything here trades speed for transparency: grids over
// simplices and polytopes, direct evaluation of objectives, no shared code
// with the solvers under test.
#pragma once

#include <chandef/prob.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

using chandef::Channel;
using chandef::Joint3;
using chandef::Matrix;
using chandef::ProbVector;

inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline ProbVector random_prob(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = -std::log(std::max(u01(rng), 1e-300));
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return ProbVector(v);
}

inline Channel random_channel(std::mt19937_64& rng, std::size_t in, std::size_t out) {
  std::vector<double> rows;
  rows.reserve(in * out);
  for (std::size_t i = 0; i < in; ++i) {
    ProbVector row = random_prob(rng, out);
    rows.insert(rows.end(), row.probs().begin(), row.probs().end());
  }
  return Channel(in, out, rows);
}

inline Joint3 random_joint3(std::mt19937_64& rng, std::size_t ny, std::size_t nx,
                            std::size_t nz) {
  ProbVector flat = random_prob(rng, ny * nx * nz);
  return Joint3(ny, nx, nz, flat.probs());
}

// Markov-chain joint p(y) a(x|y) b(z|x), so Y - X - Z holds by construction.
inline Joint3 random_chain_joint3(std::mt19937_64& rng, std::size_t ny, std::size_t nx,
                                  std::size_t nz) {
  ProbVector py = random_prob(rng, ny);
  Channel a = random_channel(rng, ny, nx);
  Channel b = random_channel(rng, nx, nz);
  return Joint3::from_chain(py, a, b);
}

// Enumerates all weight vectors on the simplex with components k/steps.
inline void for_each_simplex_point(std::size_t dim, std::size_t steps,
                                   const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<std::size_t> counts(dim, 0);
  std::vector<double> w(dim, 0.0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == dim) {
      counts[i] = left;
      for (std::size_t k = 0; k < dim; ++k)
        w[k] = static_cast<double>(counts[k]) / static_cast<double>(steps);
      fn(w);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, steps);
}

inline double kl_bits(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return chandef::kInf;
    s += p[i] * std::log2(p[i] / q[i]);
  }
  return s;
}

// min_w KL(target || sum_z w_z atoms_z) over a simplex grid.
inline double grid_ri_projection(const std::vector<double>& target,
                                 const std::vector<std::vector<double>>& atoms,
                                 std::size_t steps) {
  double best = chandef::kInf;
  std::vector<double> mix(target.size());
  for_each_simplex_point(atoms.size(), steps, [&](const std::vector<double>& w) {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (std::size_t z = 0; z < atoms.size(); ++z)
      for (std::size_t y = 0; y < mix.size(); ++y) mix[y] += w[z] * atoms[z][y];
    best = std::min(best, kl_bits(target, mix));
  });
  return best;
}

inline double grid_deficiency(const Channel& d, const Channel& kappa, const ProbVector& pi,
                              std::size_t steps) {
  std::vector<std::vector<double>> atoms;
  for (std::size_t z = 0; z < d.input_size(); ++z) {
    auto row = d.row(z);
    atoms.emplace_back(row.begin(), row.end());
  }
  double total = 0.0;
  for (std::size_t x = 0; x < kappa.input_size(); ++x) {
    if (pi[x] <= 0.0) continue;
    auto row = kappa.row(x);
    total += pi[x] * grid_ri_projection({row.begin(), row.end()}, atoms, steps);
  }
  return total;
}

// I_Q(Y;X|Z) in bits for a flat coupling q indexed (y, x, z).
inline double coupling_cmi(const std::vector<double>& q, std::size_t ny, std::size_t nx,
                           std::size_t nz) {
  auto idx = [&](std::size_t y, std::size_t x, std::size_t z) {
    return (y * nx + x) * nz + z;
  };
  std::vector<double> qxz(nx * nz, 0.0), qyz(ny * nz, 0.0), qz(nz, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) {
        double v = q[idx(y, x, z)];
        qxz[x * nz + z] += v;
        qyz[y * nz + z] += v;
        qz[z] += v;
      }
  double s = 0.0;
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) {
        double v = q[idx(y, x, z)];
        if (v <= 0.0) continue;
        s += v * std::log2(v * qz[z] / (qxz[x * nz + z] * qyz[y * nz + z]));
      }
  return s;
}

// min I_Q(Y;X|Z) over couplings with Q(y,x) = P(y,x) and Q(y,z) = P(y,z),
// gridding the free block Q(y, x<nx-1, z<nz-1) at resolution `step` and
// completing the rest from the marginal constraints. Only practical when the
// number of free coordinates ny*(nx-1)*(nz-1) is small.
inline double grid_unique_information(const Joint3& p, double step) {
  const std::size_t ny = p.size(chandef::Axis::Y);
  const std::size_t nx = p.size(chandef::Axis::X);
  const std::size_t nz = p.size(chandef::Axis::Z);
  auto pyx = p.marginal(chandef::Axis::Y, chandef::Axis::X);
  auto pyz = p.marginal(chandef::Axis::Y, chandef::Axis::Z);
  auto idx = [&](std::size_t y, std::size_t x, std::size_t z) {
    return (y * nx + x) * nz + z;
  };
  std::vector<std::array<std::size_t, 3>> free_cells;
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x + 1 < nx; ++x)
      for (std::size_t z = 0; z + 1 < nz; ++z) free_cells.push_back({y, x, z});

  std::vector<double> q(ny * nx * nz, 0.0);
  double best = chandef::kInf;
  const double slack = 1e-12;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == free_cells.size()) {
      // Complete last column and last row of each y-slab from the marginals.
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t x = 0; x + 1 < nx; ++x) {
          double rest = 0.0;
          for (std::size_t z = 0; z + 1 < nz; ++z) rest += q[idx(y, x, z)];
          double v = pyx.at(y, x) - rest;
          if (v < -slack) return;
          q[idx(y, x, nz - 1)] = std::max(v, 0.0);
        }
        for (std::size_t z = 0; z < nz; ++z) {
          double rest = 0.0;
          for (std::size_t x = 0; x + 1 < nx; ++x) rest += q[idx(y, x, z)];
          double v = pyz.at(y, z) - rest;
          if (v < -slack) return;
          q[idx(y, nx - 1, z)] = std::max(v, 0.0);
        }
      }
      best = std::min(best, coupling_cmi(q, ny, nx, nz));
      return;
    }
    auto [y, x, z] = free_cells[i];
    double cap = std::min(pyx.at(y, x), pyz.at(y, z));
    for (double v = 0.0; v <= cap + slack; v += step) {
      q[idx(y, x, z)] = std::min(v, cap);
      rec(i + 1);
    }
    q[idx(y, x, z)] = 0.0;
  };
  rec(0);
  return best;
}

// Exhaustive IB oracle for small alphabets: grids every encoder row on the
// simplex and evaluates I(Z;X) - (1/beta needs care) ... objective in the
// same normalization as the solver: rate + distortion trade-off
// F = I_e(Z;X) + (1/beta) * E KL -- callers pass an evaluation functor so
// the oracle stays agnostic to the exact objective form.
inline double grid_min_over_encoders(std::size_t nx, std::size_t nz, std::size_t steps,
                                     const std::function<double(const Channel&)>& objective) {
  double best = chandef::kInf;
  std::vector<std::vector<double>> rows(nx);
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == nx) {
      std::vector<double> flat;
      for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
      best = std::min(best, objective(Channel(nx, nz, flat)));
      return;
    }
    for_each_simplex_point(nz, steps, [&](const std::vector<double>& w) {
      rows[x] = w;
      rec(x + 1);
    });
  };
  rec(0);
  return best;
}

// Information-bottleneck objective for a fixed encoder: no decoder appears,
// so the reference value is a plain minimization over a two-stage encoder
// grid (coarse global scan, then a fine local scan around the incumbent).
inline double ib_objective_of_encoder(const Matrix& p_xy, const Channel& e, double beta) {
  const std::size_t nx = p_xy.rows(), ny = p_xy.cols(), nz = e.output_size();
  ProbVector px = p_xy.row_marginal();
  std::vector<double> pzy(nz * ny, 0.0), pz(nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nz; ++z) {
      pz[z] += px[x] * e.at(x, z);
      for (std::size_t y = 0; y < ny; ++y) pzy[z * ny + y] += p_xy.at(x, y) * e.at(x, z);
    }
  std::vector<double> py(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t z = 0; z < nz; ++z) py[y] += pzy[z * ny + y];
  double izy = 0.0, izx = 0.0, ixy = 0.0;
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t y = 0; y < ny; ++y) {
      double v = pzy[z * ny + y];
      if (v > 0.0) izy += v * std::log2(v / (pz[z] * py[y]));
    }
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nz; ++z) {
      double v = px[x] * e.at(x, z);
      if (v > 0.0) izx += v * std::log2(v / (px[x] * pz[z]));
    }
  ProbVector py2 = p_xy.col_marginal();
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      double v = p_xy.at(x, y);
      if (v > 0.0) ixy += v * std::log2(v / (px[x] * py2[y]));
    }
  return ixy - izy + beta * izx;
}

// For a fixed encoder the map d -> D_KL(kappa || d o e | pi) is convex (the
// cross-entropy is a sum of logs of linear functions of d), so mixture EM on
// the component rows converges to the global decoder optimum.
inline double db_objective_of_encoder(const ProbVector& pi, const Channel& kappa,
                                      const Channel& e, double beta) {
  const std::size_t nx = kappa.input_size(), ny = kappa.output_size(),
                    nz = e.output_size();
  std::vector<double> d(nz * ny, 1.0 / static_cast<double>(ny));
  std::vector<double> mix(ny), acc(nz * ny);
  double prev = chandef::kInf;
  for (int it = 0; it < 4000; ++it) {
    std::fill(acc.begin(), acc.end(), 0.0);
    double ce = 0.0;
    bool hit_inf = false;
    for (std::size_t x = 0; x < nx; ++x) {
      if (pi[x] <= 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y) {
        double m = 0.0;
        for (std::size_t z = 0; z < nz; ++z) m += e.at(x, z) * d[z * ny + y];
        mix[y] = m;
        double k = kappa.at(x, y);
        if (k <= 0.0) continue;
        if (m <= 0.0) {hit_inf = true; continue;}
        ce += pi[x] * k * std::log2(k / m);
        for (std::size_t z = 0; z < nz; ++z)
          acc[z * ny + y] += pi[x] * k * e.at(x, z) * d[z * ny + y] / m;
      }
    }
    if (hit_inf) return chandef::kInf;
    if (std::abs(prev - ce) <= 1e-13 * (1.0 + std::abs(ce))) { prev = ce; break; }
    prev = ce;
    for (std::size_t z = 0; z < nz; ++z) {
      double s = 0.0;
      for (std::size_t y = 0; y < ny; ++y) s += acc[z * ny + y];
      if (s <= 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y) d[z * ny + y] = acc[z * ny + y] / s;
    }
  }
  // Rate term I_e(Z;X).
  std::vector<double> pz(nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nz; ++z) pz[z] += pi[x] * e.at(x, z);
  double izx = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nz; ++z) {
      double v = pi[x] * e.at(x, z);
      if (v > 0.0) izx += v * std::log2(e.at(x, z) / pz[z]);
    }
  return prev + beta * izx;
}

// Two-stage grid over binary-input binary-output encoders: every row lives on
// a one-dimensional simplex, so an encoder is a point (a, b) in the unit
// square. Coarse scan, then a fine scan in a window around the best point.
inline double grid_min_2x2_encoder(const std::function<double(const Channel&)>& objective) {
  auto eval = [&](double a, double b) {
    return objective(Channel(2, 2, {a, 1.0 - a, b, 1.0 - b}));
  };
  double best = chandef::kInf, ba = 0.0, bb = 0.0;
  const int coarse = 100;
  for (int i = 0; i <= coarse; ++i)
    for (int j = 0; j <= coarse; ++j) {
      double a = static_cast<double>(i) / coarse, b = static_cast<double>(j) / coarse;
      double v = eval(a, b);
      if (v < best) { best = v; ba = a; bb = b; }
    }
  double lo_a = std::max(0.0, ba - 1.0 / coarse), hi_a = std::min(1.0, ba + 1.0 / coarse);
  double lo_b = std::max(0.0, bb - 1.0 / coarse), hi_b = std::min(1.0, bb + 1.0 / coarse);
  const int fine = 80;
  for (int i = 0; i <= fine; ++i)
    for (int j = 0; j <= fine; ++j) {
      double a = lo_a + (hi_a - lo_a) * i / fine;
      double b = lo_b + (hi_b - lo_b) * j / fine;
      best = std::min(best, eval(a, b));
    }
  return best;
}

}  // namespace oracles
