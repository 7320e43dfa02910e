#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elmpde/elm_basis.hpp"

namespace elmpde {

using SpaceTimeFn = std::function<double(double t, double x)>;
using SpaceFn = std::function<double(double x)>;
using TimeFn = std::function<double(double t)>;

/// u_t = nu * u_xx + f(t, x) on domain x [t0, t_final], with Dirichlet data
/// g_lo(t), g_hi(t). All function members must be pure.
struct ProblemSpec {
  std::string label;
  double nu = 1.0;
  SpaceTimeFn source;
  SpaceFn initial;
  TimeFn g_lo;
  TimeFn g_hi;
  Interval domain;
  double t0 = 0.0;
  double t_final = 1.0;
  std::optional<SpaceTimeFn> exact;
  // u0 matches the boundary data at both corners at t0.
  bool compatible = true;
};

/// Heat equation on [0,1] x [0,1] with u0 = sin(pi x) + sin(gamma pi x).
/// Labelled stiff when gamma > 5.
ProblemSpec problem_a(double gamma);

/// Heat equation on [0,2] x [0,1.2] with u0 = 1 and homogeneous Dirichlet
/// data; the exact solution is the Fourier series truncated after n_terms.
ProblemSpec problem_b(int n_terms = 20);

/// u_t = 5 u_xx on [0,1] x [0,1], u0 = sin(pi x).
ProblemSpec problem_c();

/// Truncated Fourier series of problem (b).
double problem_b_series(double t, double x, int n_terms);

/// Looks up "a", "a(gamma=10)", "b", "b(n_terms=40)" or "c".
ProblemSpec problem_by_name(std::string_view name);

struct CollocationGrid {
  std::vector<double> interior;  // strictly increasing, inside the domain
  std::array<double, 2> boundary{};

  std::size_t rows() const { return interior.size() + 2; }
};

/// Equispaced interior points lo + j h, j = 1..n_interior, h = (hi-lo)/(n_interior+1).
CollocationGrid make_grid(const ProblemSpec& problem, std::size_t n_interior);

/// How the row count M = floor(N/2) is split between interior and boundary.
enum class GridConvention {
  total,     // M rows in all: M - 2 interior points plus 2 boundary rows
  interior,  // M interior points plus 2 boundary rows
};

std::size_t interior_count(std::size_t n_neurons, GridConvention convention);
CollocationGrid grid_for_neurons(const ProblemSpec& problem, std::size_t n_neurons,
                                 GridConvention convention = GridConvention::total);

/// n points from lo to hi inclusive.
std::vector<double> equispaced(Interval domain, std::size_t n);

}  // namespace elmpde
