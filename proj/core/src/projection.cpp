#include "chandef/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chandef/linprog.hpp"

namespace chandef {

namespace {

std::vector<double> mix_of(const std::vector<ProbVector>& atoms,
                           const std::vector<double>& w) {
  std::vector<double> mix(atoms[0].size(), 0.0);
  for (std::size_t z = 0; z < atoms.size(); ++z) {
    if (w[z] == 0.0) continue;
    for (std::size_t y = 0; y < mix.size(); ++y) mix[y] += w[z] * atoms[z][y];
  }
  return mix;
}

}  // namespace

RiProjectionResult ri_project(const ProbVector& target,
                              const std::vector<ProbVector>& atoms, double tol,
                              std::size_t max_iter) {
  if (atoms.empty()) throw std::invalid_argument("ri_project: empty atom set");
  if (!(tol > 0.0)) throw std::invalid_argument("ri_project: tol must be positive");
  const std::size_t ny = target.size(), nz = atoms.size();
  for (const auto& a : atoms) {
    if (a.size() != ny) throw std::invalid_argument("ri_project: alphabet mismatch");
  }

  // Target outside the union of atom supports: divergence is +inf.
  for (std::size_t y = 0; y < ny; ++y) {
    if (target[y] > 0.0) {
      bool covered = false;
      for (const auto& a : atoms) covered = covered || a[y] > 0.0;
      if (!covered) {
        return {ProbVector::uniform(nz), ProbVector::uniform(ny), kInf, 0, true, {}};
      }
    }
  }

  // Exact atom match: weight one on the lowest matching index.
  for (std::size_t z = 0; z < nz; ++z) {
    double diff = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      diff = std::max(diff, std::abs(atoms[z][y] - target[y]));
    }
    if (diff <= 1e-12) {
      return {ProbVector::point_mass(nz, z),
              ProbVector(atoms[z].probs()), 0.0, 0, true, {0.0}};
    }
  }

  std::vector<double> w(nz, 1.0 / static_cast<double>(nz));
  std::vector<double> mix = mix_of(atoms, w);
  double div = kl_divergence(std::span<const double>(target.probs()),
                             std::span<const double>(mix));
  std::vector<double> trace = {div};
  bool converged = false;
  std::size_t it = 0;
  std::vector<double> gains(nz, 0.0);
  for (; it < max_iter; ++it) {
    double max_gain = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      double g = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        if (target[y] > 0.0) g += target[y] * atoms[z][y] / mix[y];
      }
      gains[z] = g;
      max_gain = std::max(max_gain, g);
    }
    // Suboptimality certificate: f(w) - f* <= log2(max_z gains[z]).
    if (std::log2(max_gain) <= tol) {
      converged = true;
      break;
    }
    for (std::size_t z = 0; z < nz; ++z) w[z] *= gains[z];
    double s = 0.0;
    for (double v : w) s += v;
    for (double& v : w) v /= s;
    mix = mix_of(atoms, w);
    const double next = kl_divergence(std::span<const double>(target.probs()),
                                      std::span<const double>(mix));
    const double improvement = div - next;
    div = next;
    trace.push_back(div);
    if (improvement < tol * 1e-3 && improvement >= 0.0) {
      // Stalled; re-check the certificate on the final iterate below.
      double g_max = 0.0;
      for (std::size_t z = 0; z < nz; ++z) {
        double g = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
          if (target[y] > 0.0) g += target[y] * atoms[z][y] / mix[y];
        }
        g_max = std::max(g_max, g);
      }
      if (std::log2(g_max) <= tol) {
        converged = true;
        break;
      }
    }
  }
  return {ProbVector(std::move(w)), ProbVector(std::move(mix)),
          std::max(div, 0.0), it, converged, std::move(trace)};
}

RiProjectionResult ri_project(const ProbVector& target, const Channel& atoms,
                              double tol, std::size_t max_iter) {
  std::vector<ProbVector> rows;
  rows.reserve(atoms.input_size());
  for (std::size_t z = 0; z < atoms.input_size(); ++z) {
    rows.push_back(atoms.row_dist(z));
  }
  return ri_project(target, rows, tol, max_iter);
}

DeficiencyResult deficiency(const Channel& d, const Channel& kappa,
                            const ProbVector& pi, double tol,
                            std::size_t max_iter) {
  if (d.output_size() != kappa.output_size() || pi.size() != kappa.input_size()) {
    throw std::invalid_argument("deficiency: dimension mismatch");
  }
  const std::size_t nx = kappa.input_size(), nz = d.input_size();
  std::vector<ProbVector> atoms;
  atoms.reserve(nz);
  for (std::size_t z = 0; z < nz; ++z) atoms.push_back(d.row_dist(z));

  double value = 0.0;
  bool converged = true;
  std::vector<double> e_rows(nx * nz, 0.0);
  std::vector<PerInputProjection> per_input;
  per_input.reserve(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    if (pi[x] == 0.0) {
      for (std::size_t z = 0; z < nz; ++z) {
        e_rows[x * nz + z] = 1.0 / static_cast<double>(nz);
      }
      per_input.push_back({x, ProbVector::uniform(d.output_size()), 0.0});
      continue;
    }
    RiProjectionResult pr = ri_project(kappa.row_dist(x), atoms, tol, max_iter);
    converged = converged && pr.converged;
    if (pr.divergence_bits == kInf) value = kInf;
    if (value != kInf) value += pi[x] * pr.divergence_bits;
    for (std::size_t z = 0; z < nz; ++z) e_rows[x * nz + z] = pr.weights[z];
    per_input.push_back({x, std::move(pr.point), pr.divergence_bits});
  }
  return {value,
          Channel(nx, nz, std::move(e_rows), kappa.input_labels(), d.input_labels()),
          std::move(per_input), converged};
}

BlackwellResult blackwell_sufficient(const Channel& d, const Channel& kappa,
                                     double tol) {
  if (d.output_size() != kappa.output_size()) {
    throw std::invalid_argument("blackwell_sufficient: output alphabets differ");
  }
  const std::size_t nx = kappa.input_size(), ny = kappa.output_size(),
                    nz = d.input_size();
  // Per input x: find e_x >= 0 with sum_z d(y|z) e_x(z) = kappa(y|x) for
  // every y. Normalization of e_x is implied by summing over y.
  std::vector<std::vector<double>> a(ny, std::vector<double>(nz, 0.0));
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t z = 0; z < nz; ++z) a[y][z] = d.at(z, y);
  const std::vector<double> c(nz, 0.0);

  bool sufficient = true;
  double max_residual = 0.0;
  std::vector<double> e_rows(nx * nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<double> b(ny, 0.0);
    for (std::size_t y = 0; y < ny; ++y) b[y] = kappa.at(x, y);
    LpResult lp = solve_lp(a, b, c);
    double residual = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      double v = 0.0;
      for (std::size_t z = 0; z < nz; ++z) v += d.at(z, y) * lp.x[z];
      residual = std::max(residual, std::abs(v - kappa.at(x, y)));
    }
    max_residual = std::max(max_residual, residual);
    if (residual > tol) sufficient = false;
    double s = 0.0;
    for (std::size_t z = 0; z < nz; ++z) s += lp.x[z];
    for (std::size_t z = 0; z < nz; ++z) {
      e_rows[x * nz + z] = s > 0.0 ? lp.x[z] / s : 1.0 / static_cast<double>(nz);
    }
  }
  std::optional<Channel> witness;
  if (sufficient) {
    witness.emplace(nx, nz, std::move(e_rows), kappa.input_labels(),
                    d.input_labels());
  }
  return {sufficient, std::move(witness), max_residual};
}

}  // namespace chandef
