#include "elmpde/pde_problems.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elmpde {

using std::numbers::pi;

namespace {

TimeFn zero_time() {
  return [](double) { return 0.0; };
}

SpaceTimeFn zero_source() {
  return [](double, double) { return 0.0; };
}

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw std::invalid_argument("bad value for " + std::string(what) + ": '" + std::string(text) + "'");
  return v;
}

}  // namespace

ProblemSpec problem_a(double gamma) {
  if (!(gamma >= 1.0)) throw std::invalid_argument("problem_a: gamma must be >= 1");
  ProblemSpec p;
  p.label = "a(gamma=" + format_number(gamma) + ")" + (gamma > 5.0 ? " stiff" : " standard");
  p.nu = 1.0;
  p.source = zero_source();
  p.initial = [gamma](double x) { return std::sin(pi * x) + std::sin(gamma * pi * x); };
  p.g_lo = zero_time();
  p.g_hi = zero_time();
  p.domain = {0.0, 1.0};
  p.t0 = 0.0;
  p.t_final = 1.0;
  p.exact = [gamma](double t, double x) {
    return std::exp(-pi * pi * t) * std::sin(pi * x) +
           std::exp(-gamma * gamma * pi * pi * t) * std::sin(gamma * pi * x);
  };
  // sin(gamma pi) vanishes only for integer gamma.
  p.compatible = std::abs(std::sin(gamma * pi)) < 1e-12;
  return p;
}

double problem_b_series(double t, double x, int n_terms) {
  double sum = 0.0;
  for (int n = 1; n <= n_terms; n += 2) {  // even terms carry the factor 1 - (-1)^n = 0
    const double k = n * pi;
    sum += 2.0 * (2.0 / k) * std::sin(k * x / 2.0) * std::exp(-k * k * t / 4.0);
  }
  return sum;
}

ProblemSpec problem_b(int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("problem_b: n_terms must be >= 1");
  ProblemSpec p;
  p.label = "b";
  p.nu = 1.0;
  p.source = zero_source();
  p.initial = [](double) { return 1.0; };
  p.g_lo = zero_time();
  p.g_hi = zero_time();
  p.domain = {0.0, 2.0};
  p.t0 = 0.0;
  p.t_final = 1.2;
  p.exact = [n_terms](double t, double x) { return problem_b_series(t, x, n_terms); };
  p.compatible = false;
  return p;
}

ProblemSpec problem_c() {
  ProblemSpec p;
  p.label = "c";
  p.nu = 5.0;
  p.source = zero_source();
  p.initial = [](double x) { return std::sin(pi * x); };
  p.g_lo = zero_time();
  p.g_hi = zero_time();
  p.domain = {0.0, 1.0};
  p.t0 = 0.0;
  p.t_final = 1.0;
  p.exact = [](double t, double x) { return std::exp(-5.0 * pi * pi * t) * std::sin(pi * x); };
  p.compatible = true;
  return p;
}

ProblemSpec problem_by_name(std::string_view name) {
  std::string_view base = name;
  std::string_view arg;
  if (auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
    base = name.substr(0, open);
    arg = name.substr(open + 1, name.size() - open - 2);
  }
  auto keyed = [&](std::string_view key) -> std::optional<double> {
    if (arg.empty()) return std::nullopt;
    auto eq = arg.find('=');
    if (eq == std::string_view::npos || arg.substr(0, eq) != key)
      throw std::invalid_argument("problem '" + std::string(base) + "' expects argument '" +
                                  std::string(key) + "=...'");
    return parse_number(arg.substr(eq + 1), key);
  };
  if (base == "a") return problem_a(keyed("gamma").value_or(3.0));
  if (base == "b") return problem_b(static_cast<int>(keyed("n_terms").value_or(20.0)));
  if (base == "c") {
    if (!arg.empty()) throw std::invalid_argument("problem 'c' takes no arguments");
    return problem_c();
  }
  throw std::invalid_argument("unknown problem '" + std::string(name) + "' (expected a, b or c)");
}

CollocationGrid make_grid(const ProblemSpec& problem, std::size_t n_interior) {
  if (n_interior < 1) throw std::invalid_argument("make_grid: need at least one interior point");
  const Interval d = problem.domain;
  CollocationGrid grid;
  grid.boundary = {d.lo, d.hi};
  const double h = d.length() / static_cast<double>(n_interior + 1);
  grid.interior.reserve(n_interior);
  for (std::size_t j = 1; j <= n_interior; ++j)
    grid.interior.push_back(d.lo + static_cast<double>(j) * h);
  return grid;
}

std::size_t interior_count(std::size_t n_neurons, GridConvention convention) {
  const std::size_t m = n_neurons / 2;
  if (convention == GridConvention::interior) return m;
  if (m < 3) throw std::invalid_argument("grid: N = " + std::to_string(n_neurons) +
                                         " leaves no interior collocation point");
  return m - 2;
}

CollocationGrid grid_for_neurons(const ProblemSpec& problem, std::size_t n_neurons,
                                 GridConvention convention) {
  return make_grid(problem, interior_count(n_neurons, convention));
}

std::vector<double> equispaced(Interval domain, std::size_t n) {
  if (n < 2) throw std::invalid_argument("equispaced: need at least two points");
  std::vector<double> out(n);
  const double h = domain.length() / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = domain.lo + static_cast<double>(i) * h;
  out.back() = domain.hi;
  return out;
}

}  // namespace elmpde
