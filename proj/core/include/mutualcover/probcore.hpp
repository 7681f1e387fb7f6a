#pragma once

// Finite-alphabet probability primitives. Every log and exp in this library
// is natural-base; values are in nats unless a caller converts for display.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mutualcover/error.hpp"

namespace mutualcover {

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

using Labels = std::vector<std::string>;
using Matrix = std::vector<std::vector<double>>;

// "0", "1", ..., "n-1".
Labels index_labels(std::size_t n);

struct PmfAccess;

class Pmf {
 public:
  // Validates nonnegativity, distinct labels and |sum - 1| <= 1e-9, then
  // renormalizes so the stored masses sum to one in floating point.
  static Pmf make(Labels labels, std::vector<double> probs);
  static Pmf uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  const Labels& labels() const { return labels_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  Pmf(Labels labels, std::vector<double> probs)
      : labels_(std::move(labels)), probs_(std::move(probs)) {}

  Labels labels_;
  std::vector<double> probs_;

  friend struct PmfAccess;
};

// P_UV over a finite product alphabet, stored row-major (u major). The
// marginals are row and column sums of the stored matrix.
class JointPmf {
 public:
  std::size_t rows() const { return pu_.size(); }
  std::size_t cols() const { return pv_.size(); }
  std::size_t atoms() const { return data_.size(); }

  double operator()(std::size_t u, std::size_t v) const {
    return data_[u * cols() + v];
  }
  std::span<const double> data() const { return data_; }

  const Labels& u_labels() const { return pu_.labels(); }
  const Labels& v_labels() const { return pv_.labels(); }
  const Pmf& pu() const { return pu_; }
  const Pmf& pv() const { return pv_; }

  Matrix matrix() const;

  static JointPmf product(const Pmf& pu, const Pmf& pv);

 private:
  JointPmf(std::vector<double> data, Pmf pu, Pmf pv)
      : data_(std::move(data)), pu_(std::move(pu)), pv_(std::move(pv)) {}

  std::vector<double> data_;
  Pmf pu_;
  Pmf pv_;

  friend struct PmfAccess;
};

// Empty label lists default to index labels.
JointPmf build_joint(const Matrix& matrix, Labels u_labels = {},
                     Labels v_labels = {});

// Trusted path for internally generated matrices (already nonnegative, sum
// close to one); still renormalizes and recomputes marginals.
JointPmf make_joint_unchecked(std::vector<double> data, const Labels& u_labels,
                              const Labels& v_labels);

// P_{Y|X}: one Pmf row per input symbol.
class CondPmf {
 public:
  static CondPmf make(Labels in_labels, Labels out_labels, const Matrix& rows);

  std::size_t inputs() const { return in_labels_.size(); }
  std::size_t outputs() const { return out_labels_.size(); }
  double operator()(std::size_t x, std::size_t y) const {
    return data_[x * outputs() + y];
  }
  const Labels& in_labels() const { return in_labels_; }
  const Labels& out_labels() const { return out_labels_; }

 private:
  CondPmf(Labels in, Labels out, std::vector<double> data)
      : in_labels_(std::move(in)), out_labels_(std::move(out)),
        data_(std::move(data)) {}

  Labels in_labels_;
  Labels out_labels_;
  std::vector<double> data_;
};

// ı(u;v) = ln P_UV(u,v) / (P_U(u) P_V(v)); null atoms hold -inf.
struct InfoDensityTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t u, std::size_t v) const {
    return values[u * cols + v];
  }
};

// P_{Z V_1 ... V_k} as a dense tensor with z as the slowest coordinate.
class MultivarPmf {
 public:
  static MultivarPmf make(Labels z_labels, std::vector<Labels> v_labels,
                          std::vector<double> tensor);

  std::size_t arity() const { return v_labels_.size(); }
  std::size_t z_size() const { return z_labels_.size(); }
  std::size_t v_size(std::size_t i) const { return v_labels_[i].size(); }
  // Number of (v_1..v_k) cells per z.
  std::size_t block() const { return block_; }
  std::span<const double> tensor() const { return tensor_; }
  const Labels& z_labels() const { return z_labels_; }
  const std::vector<Labels>& v_labels() const { return v_labels_; }

  // Decodes a block offset into per-coordinate symbols.
  void decode(std::size_t offset, std::span<std::size_t> out) const;

 private:
  MultivarPmf(Labels z, std::vector<Labels> v, std::vector<double> t);

  Labels z_labels_;
  std::vector<Labels> v_labels_;
  std::vector<double> tensor_;
  std::size_t block_ = 1;
};

InfoDensityTable info_density(const JointPmf& j);

double mutual_information(const JointPmf& j);

// Square root of Var[ı(U;V)] under P_UV.
double varentropy(const JointPmf& j);

// D_alpha(P_UV || P_U x P_V).
double renyi_divergence(const JointPmf& j, double alpha);

// ln E[exp(alpha ı(U;V))] = alpha D_{1+alpha}(P_UV || P_U x P_V).
double log_moment(const JointPmf& j, double alpha);

// P^{(1+rho)} proportional to P_UV^{1+rho} P_U^{-rho} P_V^{-rho}.
JointPmf tilted_distribution(const JointPmf& j, double rho);

// E of the untilted density ı under the tilted distribution.
double tilted_rate(const JointPmf& j, double rho);

// Smallest achievable max density after discarding whole atoms of total
// mass <= eps, atoms taken in descending density (ties: row-major index).
double smooth_mutual_information(const JointPmf& j, double eps);

// Gaussian upper tail.
double q_function(double x);

JointPmf tensor_power(const JointPmf& j, int n,
                      std::size_t cap = kTensorCap);

// D(P || Q) in nats for same-length mass vectors; +inf if P is not << Q.
double kl_divergence(std::span<const double> p, std::span<const double> q);

}  // namespace mutualcover
