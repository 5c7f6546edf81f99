#include "chandef/pid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chandef/linprog.hpp"

namespace chandef {

namespace {

constexpr double kTiny = 1e-300;

// Flat (y,x,z) array with the per-y transportation-polytope structure of
// Delta_P baked into the fixed marginals.
struct FwState {
  std::size_t ny, nx, nz;
  std::vector<double> q;        // joint mass Q(y,x,z)
  std::vector<double> p_yx;     // fixed row sums per y-block
  std::vector<double> p_yz;     // fixed col sums per y-block
  std::vector<double> p_z;      // fixed
  std::vector<std::size_t> live_y;

  std::size_t idx(std::size_t y, std::size_t x, std::size_t z) const {
    return (y * nx + x) * nz + z;
  }

  std::vector<double> xz_marginal(const std::vector<double>& v) const {
    std::vector<double> m(nx * nz, 0.0);
    for (std::size_t y : live_y)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t z = 0; z < nz; ++z) m[x * nz + z] += v[idx(y, x, z)];
    return m;
  }

  // I_Q(Y;X|Z) in bits.
  double objective(const std::vector<double>& v) const {
    const std::vector<double> qxz = xz_marginal(v);
    double f = 0.0;
    for (std::size_t y : live_y)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t z = 0; z < nz; ++z) {
          const double p = v[idx(y, x, z)];
          if (p > 0.0) {
            f += p * std::log2(p * p_z[z] /
                               (qxz[x * nz + z] * p_yz[y * nz + z]));
          }
        }
    return std::max(f, 0.0);
  }
};

}  // namespace

UniqueInformationResult unique_information(const Joint3& p, double tol,
                                           std::size_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("unique_information: tol must be positive");
  FwState st;
  st.ny = p.size(Axis::Y);
  st.nx = p.size(Axis::X);
  st.nz = p.size(Axis::Z);
  st.p_yx.assign(st.ny * st.nx, 0.0);
  st.p_yz.assign(st.ny * st.nz, 0.0);
  st.p_z.assign(st.nz, 0.0);
  for (std::size_t y = 0; y < st.ny; ++y)
    for (std::size_t x = 0; x < st.nx; ++x)
      for (std::size_t z = 0; z < st.nz; ++z) {
        const double v = p.at(y, x, z);
        st.p_yx[y * st.nx + x] += v;
        st.p_yz[y * st.nz + z] += v;
        st.p_z[z] += v;
      }
  std::vector<double> p_y(st.ny, 0.0);
  for (std::size_t y = 0; y < st.ny; ++y)
    for (std::size_t x = 0; x < st.nx; ++x) p_y[y] += st.p_yx[y * st.nx + x];
  for (std::size_t y = 0; y < st.ny; ++y) {
    if (p_y[y] > 0.0) st.live_y.push_back(y);
  }

  // Start at the per-y product coupling, which is interior on its support.
  st.q.assign(st.ny * st.nx * st.nz, 0.0);
  for (std::size_t y : st.live_y)
    for (std::size_t x = 0; x < st.nx; ++x)
      for (std::size_t z = 0; z < st.nz; ++z) {
        st.q[st.idx(y, x, z)] =
            st.p_yx[y * st.nx + x] * st.p_yz[y * st.nz + z] / p_y[y];
      }

  const std::size_t n_total = st.q.size();
  const std::vector<double> q_prod = st.q;
  const std::vector<double> prod_xz = st.xz_marginal(q_prod);
  std::vector<double> grad(n_total, 0.0), vertex(n_total, 0.0);
  double f = st.objective(st.q);
  std::vector<double> trace = {f};
  double gap = kInf;
  bool converged = false;
  std::size_t it = 0;

  for (; it < max_iter; ++it) {
    // The objective is not differentiable where a reachable (x,z) column of
    // the joint marginal is empty, and linearization-based steps can stall
    // there. Mixing a sliver of the product coupling back in restores strict
    // interiority at a cost of at most kMix * (f(product) - f) by convexity.
    constexpr double kMix = 1e-9;
    std::vector<double> qxz = st.xz_marginal(st.q);
    bool hollow = false;
    for (std::size_t j = 0; j < qxz.size() && !hollow; ++j) {
      hollow = qxz[j] <= 0.0 && prod_xz[j] > 0.0;
    }
    if (hollow) {
      for (std::size_t i = 0; i < n_total; ++i) {
        st.q[i] = (1.0 - kMix) * st.q[i] + kMix * q_prod[i];
      }
      qxz = st.xz_marginal(st.q);
      f = st.objective(st.q);
    }
    // Gradient of the objective itself (no per-column constants dropped):
    // a unit of mass entering an empty (x,z) column changes the objective at
    // best by zero to first order, so 0 is the sound linearization there.
    // Dropping constants would break that limit and certify non-optima.
    for (std::size_t y : st.live_y)
      for (std::size_t x = 0; x < st.nx; ++x)
        for (std::size_t z = 0; z < st.nz; ++z) {
          const double m = qxz[x * st.nz + z];
          const double pyz = st.p_yz[y * st.nz + z];
          grad[st.idx(y, x, z)] =
              (m > 0.0 && pyz > 0.0)
                  ? std::log2(std::max(st.q[st.idx(y, x, z)], kTiny) *
                              st.p_z[z] / (m * pyz))
                  : 0.0;
        }

    // Linear minimization decomposes into one transport LP per live y.
    std::fill(vertex.begin(), vertex.end(), 0.0);
    for (std::size_t y : st.live_y) {
      std::vector<std::vector<double>> cost(st.nx, std::vector<double>(st.nz));
      std::vector<double> r(st.nx), s(st.nz);
      for (std::size_t x = 0; x < st.nx; ++x) {
        r[x] = st.p_yx[y * st.nx + x];
        for (std::size_t z = 0; z < st.nz; ++z) cost[x][z] = grad[st.idx(y, x, z)];
      }
      for (std::size_t z = 0; z < st.nz; ++z) s[z] = st.p_yz[y * st.nz + z];
      const auto v = transport_lp(cost, r, s);
      for (std::size_t x = 0; x < st.nx; ++x)
        for (std::size_t z = 0; z < st.nz; ++z) vertex[st.idx(y, x, z)] = v[x][z];
    }

    gap = 0.0;
    for (std::size_t i = 0; i < n_total; ++i) {
      gap += grad[i] * (st.q[i] - vertex[i]);
    }
    if (gap <= tol) {
      converged = true;
      break;
    }

    // Exact line search on the segment toward the vertex: the restricted
    // objective is convex, so bisect on its derivative.
    auto seg_deriv = [&](double g) {
      std::vector<double> qg(n_total);
      for (std::size_t i = 0; i < n_total; ++i) {
        qg[i] = (1.0 - g) * st.q[i] + g * vertex[i];
      }
      const std::vector<double> mg = st.xz_marginal(qg);
      double d = 0.0;
      for (std::size_t y : st.live_y)
        for (std::size_t x = 0; x < st.nx; ++x)
          for (std::size_t z = 0; z < st.nz; ++z) {
            const std::size_t i = st.idx(y, x, z);
            const double delta = vertex[i] - st.q[i];
            if (delta == 0.0) continue;
            const double m = mg[x * st.nz + z];
            if (m <= 0.0) continue;
            d += delta * std::log2(std::max(qg[i], kTiny) / m);
          }
      return d;
    };
    double gamma;
    if (seg_deriv(1.0) <= 0.0) {
      gamma = 1.0;
    } else {
      double lo = 0.0, hi = 1.0;
      for (int b = 0; b < 60; ++b) {
        const double mid = 0.5 * (lo + hi);
        (seg_deriv(mid) <= 0.0 ? lo : hi) = mid;
      }
      gamma = 0.5 * (lo + hi);
    }

    double f_new = kInf;
    for (int halve = 0; halve < 60 && gamma > 0.0; ++halve) {
      std::vector<double> q_new(n_total);
      for (std::size_t i = 0; i < n_total; ++i) {
        q_new[i] = (1.0 - gamma) * st.q[i] + gamma * vertex[i];
      }
      f_new = st.objective(q_new);
      if (f_new <= f) {
        st.q.swap(q_new);
        break;
      }
      gamma *= 0.5;
    }
    if (!(f_new <= f)) break;  // no accepted step; stationary to arithmetic noise
    f = f_new;
    trace.push_back(f);
  }

  CouplingFamily fam;
  for (std::size_t y : st.live_y) {
    fam.y_symbols.push_back(y);
    std::vector<std::vector<double>> block(st.nx, std::vector<double>(st.nz));
    for (std::size_t x = 0; x < st.nx; ++x)
      for (std::size_t z = 0; z < st.nz; ++z) {
        block[x][z] = st.q[st.idx(y, x, z)] / p_y[y];
      }
    fam.q.push_back(std::move(block));
  }
  return {f, std::move(fam), std::max(gap, 0.0), it, converged, std::move(trace)};
}

PidTerms classical_decomposition(const Joint3& p, double tol) {
  const double iyx = mutual_information(p, Axis::Y, Axis::X);
  const double iyz = mutual_information(p, Axis::Y, Axis::Z);
  const double iyx_z = conditional_mutual_information(p, Axis::Y, Axis::X, Axis::Z);
  UniqueInformationResult u = unique_information(p, tol);
  // The iterate over-approximates the minimum; the theoretical caps keep the
  // derived terms nonnegative.
  const double ui = std::min({u.ui_bits, iyx, iyx_z});
  PidTerms t{};
  t.ui_x = ui;
  t.si = std::max(iyx - ui, 0.0);
  t.ci = std::max(iyx_z - ui, 0.0);
  t.ui_z = std::max(iyz - t.si, 0.0);
  t.kind = PidKind::Classical;
  t.coupling = std::move(u.coupling);
  return t;
}

Joint3 swap_xz(const Joint3& p) {
  const std::size_t ny = p.size(Axis::Y), nx = p.size(Axis::X), nz = p.size(Axis::Z);
  std::vector<double> v(ny * nz * nx, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) {
        v[(y * nz + z) * nx + x] = p.at(y, x, z);
      }
  return Joint3(ny, nz, nx, std::move(v), p.labels(Axis::Y), p.labels(Axis::Z),
                p.labels(Axis::X));
}

PidTerms deficiency_decomposition(const Joint3& p, double tol) {
  const double iyx = mutual_information(p, Axis::Y, Axis::X);
  const double iyz = mutual_information(p, Axis::Y, Axis::Z);
  const double iyx_z = conditional_mutual_information(p, Axis::Y, Axis::X, Axis::Z);
  const double iyz_x = conditional_mutual_information(p, Axis::Y, Axis::Z, Axis::X);

  DeficiencyResult dx = deficiency(p.conditional(Axis::Z, Axis::Y),
                                   p.conditional(Axis::X, Axis::Y),
                                   p.marginal(Axis::X), tol, 100000);
  const Joint3 swapped = swap_xz(p);
  DeficiencyResult dz = deficiency(swapped.conditional(Axis::Z, Axis::Y),
                                   swapped.conditional(Axis::X, Axis::Y),
                                   swapped.marginal(Axis::X), tol, 100000);

  PidTerms t{};
  t.kind = PidKind::DeficiencyInduced;
  if (dx.value == kInf || dz.value == kInf) {
    t.degenerate = true;
    t.ui_x = t.ui_z = t.si = t.ci = kInf;
    t.deficiencies = std::make_pair(std::move(dx), std::move(dz));
    return t;
  }
  // The construction assumes the deficiency bounds hold; clamp solver excess.
  const double del_x = std::clamp(dx.value, 0.0, std::min(iyx, iyx_z));
  const double del_z = std::clamp(dz.value, 0.0, std::min(iyz, iyz_x));
  t.ui_x = std::max({del_x, del_z + iyx - iyz, 0.0});
  t.ui_z = std::max({del_z, del_x + iyz - iyx, 0.0});
  t.si = std::max(std::min(iyx - del_x, iyz - del_z), 0.0);
  t.ci = std::max(std::min(iyx_z - del_x, iyz_x - del_z), 0.0);
  t.deficiencies = std::make_pair(std::move(dx), std::move(dz));
  return t;
}

DecompositionComparison compare_decompositions(const Joint3& p, double tol) {
  DecompositionComparison c{classical_decomposition(p),
                            deficiency_decomposition(p),
                            0.0, 0.0, 0.0, 0.0, false};
  c.slack_ui_x = c.classical.ui_x - c.deficiency_induced.ui_x;
  c.slack_ui_z = c.classical.ui_z - c.deficiency_induced.ui_z;
  c.slack_si = c.deficiency_induced.si - c.classical.si;
  c.slack_ci = c.deficiency_induced.ci - c.classical.ci;
  c.near_equality = c.slack_ui_x < tol && c.slack_ui_z < tol &&
                    c.slack_si < tol && c.slack_ci < tol;
  return c;
}

}  // namespace chandef
