#include "elmpde/elm_basis.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace elmpde {

namespace {

// Portable U[0,1) from the top 53 bits; std::uniform_real_distribution is
// implementation-defined.
double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ElmBasis::ElmBasis(Interval domain, std::vector<double> alphas, std::vector<double> betas,
                   std::uint64_t seed)
    : domain_(domain), alphas_(std::move(alphas)), betas_(std::move(betas)), seed_(seed) {
  if (!(domain_.lo < domain_.hi))
    throw std::invalid_argument("ElmBasis: empty or inverted domain");
  if (alphas_.empty()) throw std::invalid_argument("ElmBasis: at least one neuron required");
  if (alphas_.size() != betas_.size())
    throw std::invalid_argument("ElmBasis: alphas and betas differ in length");
  for (double a : alphas_)
    if (a == 0.0 || !std::isfinite(a))
      throw std::invalid_argument("ElmBasis: internal weights must be finite and nonzero");
}

Eigen::VectorXd ElmBasis::eval(Derivative order, double x) const {
  const double length = domain_.length();
  const double s = (x - domain_.lo) / length;
  const std::size_t n = size();
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = alphas_[i] * s + betas_[i];
    const double sig = logistic(z);
    const double one_minus = logistic(-z);
    const double scaled = alphas_[i] / length;
    double v = sig;
    switch (order) {
      case Derivative::value:
        break;
      case Derivative::first:
        v = scaled * sig * one_minus;
        break;
      case Derivative::second:
        v = scaled * scaled * sig * one_minus * (one_minus - sig);
        break;
    }
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

Eigen::MatrixXd ElmBasis::eval_matrix(Derivative order, std::span<const double> points) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(size()));
  for (std::size_t j = 0; j < points.size(); ++j)
    out.row(static_cast<Eigen::Index>(j)) = eval(order, points[j]).transpose();
  return out;
}

std::uint64_t ElmBasis::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double d) {
    auto bits = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (double a : alphas_) mix(a);
  for (double b : betas_) mix(b);
  return h;
}

double alpha_bound(std::size_t n_neurons) {
  return (static_cast<double>(n_neurons) - 10.0) / 10.0 + 4.0;
}

ElmBasis sample_basis(std::size_t n_neurons, Interval domain, std::uint64_t seed) {
  if (n_neurons == 0) throw std::invalid_argument("sample_basis: n_neurons must be >= 1");
  if (!(domain.lo < domain.hi)) throw std::invalid_argument("sample_basis: empty domain");

  // For N < 10 the formula still gives a positive bound down to N = 1 (3.1).
  const double bound = alpha_bound(n_neurons);
  std::mt19937_64 gen(seed);
  std::vector<double> alphas(n_neurons);
  for (auto& a : alphas) {
    do {
      a = -bound + 2.0 * bound * unit_draw(gen);
    } while (a == 0.0);
  }
  std::vector<double> betas(n_neurons);
  for (std::size_t i = 0; i < n_neurons; ++i) betas[i] = -alphas[i] * unit_draw(gen);
  return ElmBasis(domain, std::move(alphas), std::move(betas), seed);
}

double network_value(const ElmBasis& basis, std::span<const double> weights, double x) {
  if (weights.size() != basis.size())
    throw std::invalid_argument("network_value: expected " + std::to_string(basis.size()) +
                                " weights, got " + std::to_string(weights.size()));
  const Eigen::VectorXd phi = basis.eval(Derivative::value, x);
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * phi[static_cast<Eigen::Index>(i)];
  return sum;
}

double network_value(const ElmBasis& basis, const Eigen::VectorXd& weights, double x,
                     Derivative order) {
  if (static_cast<std::size_t>(weights.size()) != basis.size())
    throw std::invalid_argument("network_value: weight length mismatch");
  return basis.eval(order, x).dot(weights);
}

}  // namespace elmpde
