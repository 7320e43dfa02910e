#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace elmpde {

/// Closed spatial interval [lo, hi] with lo < hi.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class Derivative { value = 0, first = 1, second = 2 };

/// Random logistic-sigmoid feature set of an extreme learning machine.
///
/// Feature i is sigma(alpha_i * s + beta_i) where s = (x - lo) / (hi - lo)
/// is the coordinate normalized to [0, 1]. The internal parameters are fixed
/// at construction; only the external weights are ever fitted.
class ElmBasis {
 public:
  ElmBasis(Interval domain, std::vector<double> alphas, std::vector<double> betas,
           std::uint64_t seed);

  std::size_t size() const { return alphas_.size(); }
  const Interval& domain() const { return domain_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> alphas() const { return alphas_; }
  std::span<const double> betas() const { return betas_; }

  /// Inflection point of feature i in normalized coordinates.
  double center(std::size_t i) const { return -betas_[i] / alphas_[i]; }

  /// Values (or derivatives with respect to x) of all N features at x.
  Eigen::VectorXd eval(Derivative order, double x) const;

  /// Row j holds eval(order, points[j]).
  Eigen::MatrixXd eval_matrix(Derivative order, std::span<const double> points) const;

  /// FNV-1a digest over the raw bits of (alphas, betas).
  std::uint64_t digest() const;

 private:
  Interval domain_;
  std::vector<double> alphas_;
  std::vector<double> betas_;
  std::uint64_t seed_;
};

/// Half-width of the uniform internal-weight range for N neurons on a unit
/// domain: (N - 10) / 10 + 4.
double alpha_bound(std::size_t n_neurons);

/// Samples N features deterministically from (N, domain, seed).
///
/// alpha_i ~ U[-b, b] with b = alpha_bound(N), zero draws rejected; centers
/// C_i ~ U[0, 1] and beta_i = -alpha_i * C_i. The generator is std::mt19937_64
/// and the mapping to [0, 1) takes the top 53 bits, so the stream is identical
/// on every conforming platform.
ElmBasis sample_basis(std::size_t n_neurons, Interval domain, std::uint64_t seed);

/// F(x) = sum_i w_i sigma_i(x).
double network_value(const ElmBasis& basis, std::span<const double> weights, double x);
double network_value(const ElmBasis& basis, const Eigen::VectorXd& weights, double x,
                     Derivative order = Derivative::value);

/// Logistic function evaluated without overflow for large |z|.
double logistic(double z);

}  // namespace elmpde
