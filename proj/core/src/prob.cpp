#include "chandef/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chandef {

namespace {

void check_nonnegative(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      throw std::invalid_argument(std::string(what) + ": negative entry at index " +
                                  std::to_string(i));
    }
  }
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

}  // namespace

double xlog2y(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log2(y);
}

ProbVector::ProbVector(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw std::invalid_argument("ProbVector: empty alphabet");
  check_nonnegative(p_, "ProbVector");
  double s = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(s - 1.0) > kNormTol) {
    throw std::invalid_argument("ProbVector: entries sum to " + std::to_string(s) +
                                ", not 1 within tolerance");
  }
  for (double& p : p_) p /= s;
}

ProbVector ProbVector::uniform(std::size_t n) {
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t n, std::size_t i) {
  std::vector<double> v(n, 0.0);
  v.at(i) = 1.0;
  return ProbVector(std::move(v));
}

double ProbVector::entropy() const {
  double h = 0.0;
  for (double p : p_) h -= xlog2y(p, p);
  return std::max(h, 0.0);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInf;
      d += p[i] * std::log2(p[i] / q[i]);
    }
  }
  return std::max(d, 0.0);
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: alphabet size mismatch");
  }
  return kl_divergence(std::span<const double>(p.probs()),
                       std::span<const double>(q.probs()));
}

Channel::Channel(std::size_t n_in, std::size_t n_out, std::vector<double> rows,
                 std::vector<std::string> input_labels,
                 std::vector<std::string> output_labels)
    : n_in_(n_in), n_out_(n_out), m_(std::move(rows)),
      in_labels_(std::move(input_labels)), out_labels_(std::move(output_labels)) {
  if (n_in_ == 0 || n_out_ == 0) throw std::invalid_argument("Channel: empty alphabet");
  if (m_.size() != n_in_ * n_out_) {
    throw std::invalid_argument("Channel: value count does not match dimensions");
  }
  check_nonnegative(m_, "Channel");
  for (std::size_t x = 0; x < n_in_; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < n_out_; ++y) s += m_[x * n_out_ + y];
    if (std::abs(s - 1.0) > kNormTol) {
      throw std::invalid_argument("Channel: row " + std::to_string(x) +
                                  " sums to " + std::to_string(s));
    }
    for (std::size_t y = 0; y < n_out_; ++y) m_[x * n_out_ + y] /= s;
  }
  if (in_labels_.empty()) in_labels_ = default_labels(n_in_);
  if (out_labels_.empty()) out_labels_ = default_labels(n_out_);
  if (in_labels_.size() != n_in_ || out_labels_.size() != n_out_) {
    throw std::invalid_argument("Channel: label count does not match dimensions");
  }
}

Channel Channel::identity(std::size_t n) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return Channel(n, n, std::move(m));
}

Channel Channel::constant(std::size_t n_in, const ProbVector& row) {
  std::vector<double> m;
  m.reserve(n_in * row.size());
  for (std::size_t x = 0; x < n_in; ++x) {
    m.insert(m.end(), row.probs().begin(), row.probs().end());
  }
  return Channel(n_in, row.size(), std::move(m));
}

Channel Channel::uniform(std::size_t n_in, std::size_t n_out) {
  return constant(n_in, ProbVector::uniform(n_out));
}

Channel Channel::erasure(double eps) {
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("erasure: eps outside [0,1]");
  std::vector<double> m = {1.0 - eps, 0.0, eps,
                           0.0, 1.0 - eps, eps,
                           0.0, 0.0, 1.0};
  return Channel(3, 3, std::move(m), {"0", "1", "e"}, {"0", "1", "e"});
}

ProbVector Channel::row_dist(std::size_t x) const {
  auto r = row(x);
  return ProbVector(std::vector<double>(r.begin(), r.end()));
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), v_(std::move(values)) {
  if (v_.size() != rows_ * cols_) {
    throw std::invalid_argument("Matrix: value count does not match dimensions");
  }
  check_nonnegative(v_, "Matrix");
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

double Matrix::sum() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }

ProbVector Matrix::row_marginal() const {
  std::vector<double> m(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m[r] += at(r, c);
  return ProbVector(std::move(m));
}

ProbVector Matrix::col_marginal() const {
  std::vector<double> m(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m[c] += at(r, c);
  return ProbVector(std::move(m));
}

Matrix Matrix::transposed() const {
  Matrix t = zeros(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

Joint3::Joint3(std::size_t ny, std::size_t nx, std::size_t nz,
               std::vector<double> values, std::vector<std::string> y_labels,
               std::vector<std::string> x_labels,
               std::vector<std::string> z_labels)
    : dims_{ny, nx, nz}, v_(std::move(values)),
      labels_{std::move(y_labels), std::move(x_labels), std::move(z_labels)} {
  if (ny == 0 || nx == 0 || nz == 0) throw std::invalid_argument("Joint3: empty axis");
  if (v_.size() != ny * nx * nz) {
    throw std::invalid_argument("Joint3: value count does not match dimensions");
  }
  check_nonnegative(v_, "Joint3");
  double s = std::accumulate(v_.begin(), v_.end(), 0.0);
  if (std::abs(s - 1.0) > kNormTol) {
    throw std::invalid_argument("Joint3: entries sum to " + std::to_string(s));
  }
  for (double& p : v_) p /= s;
  for (int a = 0; a < 3; ++a) {
    if (labels_[a].empty()) labels_[a] = default_labels(dims_[a]);
    if (labels_[a].size() != dims_[a]) {
      throw std::invalid_argument("Joint3: label count does not match axis size");
    }
  }
}

Joint3 Joint3::from_chain(const ProbVector& p_y, const Channel& a,
                          const Channel& b) {
  if (a.input_size() != p_y.size() || b.input_size() != a.output_size()) {
    throw std::invalid_argument("from_chain: dimension mismatch");
  }
  const std::size_t ny = p_y.size(), nx = a.output_size(), nz = b.output_size();
  std::vector<double> v(ny * nx * nz, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z)
        v[(y * nx + x) * nz + z] = p_y[y] * a.at(y, x) * b.at(x, z);
  return Joint3(ny, nx, nz, std::move(v));
}

ProbVector Joint3::marginal(Axis ax) const {
  const int a = static_cast<int>(ax);
  std::vector<double> m(dims_[a], 0.0);
  for (std::size_t y = 0; y < dims_[0]; ++y)
    for (std::size_t x = 0; x < dims_[1]; ++x)
      for (std::size_t z = 0; z < dims_[2]; ++z) {
        const std::size_t idx[3] = {y, x, z};
        m[idx[a]] += at(y, x, z);
      }
  return ProbVector(std::move(m));
}

Matrix Joint3::marginal(Axis a, Axis b) const {
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  if (ia == ib) throw std::invalid_argument("marginal: identical axes");
  Matrix m = Matrix::zeros(dims_[ia], dims_[ib]);
  for (std::size_t y = 0; y < dims_[0]; ++y)
    for (std::size_t x = 0; x < dims_[1]; ++x)
      for (std::size_t z = 0; z < dims_[2]; ++z) {
        const std::size_t idx[3] = {y, x, z};
        m.at(idx[ia], idx[ib]) += at(y, x, z);
      }
  return m;
}

Channel Joint3::conditional(Axis in, Axis out) const {
  Matrix j = marginal(in, out);
  const std::size_t n_in = j.rows(), n_out = j.cols();
  std::vector<double> rows(n_in * n_out, 0.0);
  for (std::size_t i = 0; i < n_in; ++i) {
    double s = 0.0;
    for (std::size_t o = 0; o < n_out; ++o) s += j.at(i, o);
    for (std::size_t o = 0; o < n_out; ++o) {
      rows[i * n_out + o] = s > 0.0 ? j.at(i, o) / s : 1.0 / static_cast<double>(n_out);
    }
  }
  return Channel(n_in, n_out, std::move(rows), labels(in), labels(out));
}

Channel compose(const Channel& d, const Channel& e) {
  if (e.output_size() != d.input_size()) {
    throw std::invalid_argument("compose: inner alphabets do not match");
  }
  const std::size_t nx = e.input_size(), ny = d.output_size(), nz = d.input_size();
  std::vector<double> m(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nz; ++z) {
      const double w = e.at(x, z);
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y) m[x * ny + y] += w * d.at(z, y);
    }
  return Channel(nx, ny, std::move(m), e.input_labels(), d.output_labels());
}

Matrix joint_from_prior_channel(const ProbVector& pi, const Channel& kappa) {
  if (pi.size() != kappa.input_size()) {
    throw std::invalid_argument("joint_from_prior_channel: dimension mismatch");
  }
  Matrix j = Matrix::zeros(pi.size(), kappa.output_size());
  for (std::size_t x = 0; x < pi.size(); ++x)
    for (std::size_t y = 0; y < kappa.output_size(); ++y)
      j.at(x, y) = pi[x] * kappa.at(x, y);
  return j;
}

double joint_entropy(const Matrix& joint) {
  double h = 0.0;
  for (double p : joint.values()) h -= xlog2y(p, p);
  return std::max(h, 0.0);
}

double conditional_entropy(const Matrix& joint) {
  // H(cols | rows) = H(rows, cols) - H(rows)
  return std::max(joint_entropy(joint) - joint.row_marginal().entropy(), 0.0);
}

double mutual_information(const Matrix& joint) {
  const ProbVector pr = joint.row_marginal();
  const ProbVector pc = joint.col_marginal();
  double mi = 0.0;
  for (std::size_t r = 0; r < joint.rows(); ++r)
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      const double p = joint.at(r, c);
      if (p > 0.0) mi += p * std::log2(p / (pr[r] * pc[c]));
    }
  return std::max(mi, 0.0);
}

double mutual_information(const Joint3& j, Axis a, Axis b) {
  return mutual_information(j.marginal(a, b));
}

double mutual_information_vs_rest(const Joint3& j, Axis ax) {
  // I(A; BC) = H(A) + H(BC) - H(ABC)
  const int ia = static_cast<int>(ax);
  Axis rest[2];
  int k = 0;
  for (int a = 0; a < 3; ++a)
    if (a != ia) rest[k++] = static_cast<Axis>(a);
  double h_abc = 0.0;
  for (double p : j.values()) h_abc -= xlog2y(p, p);
  return std::max(j.marginal(ax).entropy() +
                      joint_entropy(j.marginal(rest[0], rest[1])) - h_abc,
                  0.0);
}

double conditional_mutual_information(const Joint3& j, Axis a, Axis b,
                                      Axis cond) {
  // I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)
  double h_abc = 0.0;
  for (double p : j.values()) h_abc -= xlog2y(p, p);
  return std::max(joint_entropy(j.marginal(a, cond)) +
                      joint_entropy(j.marginal(b, cond)) - h_abc -
                      j.marginal(cond).entropy(),
                  0.0);
}

double entropy(const Joint3& j, Axis ax) { return j.marginal(ax).entropy(); }

double conditional_kl(const Channel& kappa, const Channel& lambda,
                      const ProbVector& pi) {
  if (kappa.input_size() != lambda.input_size() ||
      kappa.output_size() != lambda.output_size() ||
      pi.size() != kappa.input_size()) {
    throw std::invalid_argument("conditional_kl: dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) {
    if (pi[x] == 0.0) continue;
    const double dx = kl_divergence(kappa.row(x), lambda.row(x));
    if (dx == kInf) return kInf;
    d += pi[x] * dx;
  }
  return std::max(d, 0.0);
}

}  // namespace chandef
