#pragma once

// Exact finite-alphabet probability objects and information measures.
// All information quantities are in bits (log base 2). 0*log 0 := 0.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace chandef {

// Absolute tolerance for normalization / stochasticity checks. Inputs within
// the tolerance are renormalized on construction, inputs outside are rejected.
inline constexpr double kNormTol = 1e-9;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// x*log2(y) with the 0*log 0 convention.
double xlog2y(double x, double y);

// Distribution on a finite alphabet.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> probs);

  static ProbVector uniform(std::size_t n);
  static ProbVector point_mass(std::size_t n, std::size_t i);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

  // H(P) in bits.
  double entropy() const;

 private:
  std::vector<double> p_;
};

// KL(p || q) in bits; +inf when p is not absolutely continuous w.r.t. q.
double kl_divergence(const ProbVector& p, const ProbVector& q);
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Row-stochastic matrix from an input alphabet to an output alphabet.
class Channel {
 public:
  Channel(std::size_t n_in, std::size_t n_out, std::vector<double> rows,
          std::vector<std::string> input_labels = {},
          std::vector<std::string> output_labels = {});

  static Channel identity(std::size_t n);
  static Channel constant(std::size_t n_in, const ProbVector& row);
  static Channel uniform(std::size_t n_in, std::size_t n_out);
  // Binary symmetric erasure channel on {0,1,e}: the erased symbol maps to
  // itself with probability one.
  static Channel erasure(double eps);

  std::size_t input_size() const { return n_in_; }
  std::size_t output_size() const { return n_out_; }
  double at(std::size_t x, std::size_t y) const { return m_[x * n_out_ + y]; }
  std::span<const double> row(std::size_t x) const {
    return {m_.data() + x * n_out_, n_out_};
  }
  ProbVector row_dist(std::size_t x) const;
  const std::vector<double>& values() const { return m_; }
  const std::vector<std::string>& input_labels() const { return in_labels_; }
  const std::vector<std::string>& output_labels() const { return out_labels_; }

 private:
  std::size_t n_in_, n_out_;
  std::vector<double> m_;
  std::vector<std::string> in_labels_, out_labels_;
};

// Dense joint distribution over two axes (row-major).
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static Matrix zeros(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  double& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  const std::vector<double>& values() const { return v_; }
  double sum() const;

  ProbVector row_marginal() const;  // sums over columns
  ProbVector col_marginal() const;  // sums over rows
  Matrix transposed() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> v_;
};

enum class Axis { Y = 0, X = 1, Z = 2 };

// Joint distribution over (Y, X, Z), stored |Y| x |X| x |Z| row-major.
class Joint3 {
 public:
  Joint3(std::size_t ny, std::size_t nx, std::size_t nz,
         std::vector<double> values,
         std::vector<std::string> y_labels = {},
         std::vector<std::string> x_labels = {},
         std::vector<std::string> z_labels = {});

  // Assembles P(y,x,z) = p_y(y) * a(x|y) * b(z|x).
  static Joint3 from_chain(const ProbVector& p_y, const Channel& a,
                           const Channel& b);

  std::size_t size(Axis ax) const { return dims_[static_cast<int>(ax)]; }
  double at(std::size_t y, std::size_t x, std::size_t z) const {
    return v_[(y * dims_[1] + x) * dims_[2] + z];
  }
  const std::vector<double>& values() const { return v_; }
  const std::vector<std::string>& labels(Axis ax) const {
    return labels_[static_cast<int>(ax)];
  }

  ProbVector marginal(Axis ax) const;
  // Joint marginal over (a, b) with the remaining axis summed out.
  Matrix marginal(Axis a, Axis b) const;
  // Conditional channel P(out | in), with the remaining axis summed out.
  // Rows for zero-probability input symbols are uniform by convention.
  Channel conditional(Axis in, Axis out) const;

 private:
  std::size_t dims_[3];
  std::vector<double> v_;
  std::vector<std::string> labels_[3];
};

// Channel composition: (d o e)(y|x) = sum_z e(z|x) d(y|z).
Channel compose(const Channel& d, const Channel& e);

// Joint p(x,y) = pi(x) * kappa(y|x).
Matrix joint_from_prior_channel(const ProbVector& pi, const Channel& kappa);

// Information measures over a two-axis joint, in bits.
double joint_entropy(const Matrix& joint);
double conditional_entropy(const Matrix& joint);  // H(cols | rows)
double mutual_information(const Matrix& joint);

// Measures on a Joint3, in bits.
double mutual_information(const Joint3& j, Axis a, Axis b);
// I(ax ; other two axes).
double mutual_information_vs_rest(const Joint3& j, Axis ax);
double conditional_mutual_information(const Joint3& j, Axis a, Axis b,
                                      Axis cond);
double entropy(const Joint3& j, Axis ax);

// Conditional KL divergence D(kappa || lambda | pi) in bits; +inf when
// absolute continuity fails on a pi-supported input.
double conditional_kl(const Channel& kappa, const Channel& lambda,
                      const ProbVector& pi);

}  // namespace chandef
