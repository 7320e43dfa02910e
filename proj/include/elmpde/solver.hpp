#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "elmpde/elm_basis.hpp"
#include "elmpde/pde_problems.hpp"
#include "elmpde/time_marching.hpp"

namespace elmpde {

/// Accepts BE, TR, FE, theta(<value>), BDF1 .. BDF6.
Scheme parse_scheme(std::string_view id);

inline constexpr std::uint64_t kDefaultSeed = 1000;

struct SolveConfig {
  std::string scheme_id = "BDF2";
  std::size_t n_neurons = 40;
  double dt = 0.1;
  std::uint64_t seed = kDefaultSeed;
  int m_start = 8;
  double rank_tol = kDefaultRankTol;
  std::size_t n_error_points = 5000;
  std::optional<double> t_final;  // overrides the problem's final time
  GridConvention grid = GridConvention::total;
  bool track_errors = false;  // l-inf error after every stationary solve
};

struct SolveReport {
  SolveConfig config;
  std::string problem_label;
  double t_final = 0.0;
  long nt = 0;
  std::optional<double> linf_error;
  std::vector<double> residuals;
  std::vector<std::pair<double, double>> error_trajectory;  // (t, error)
  double walltime_s = 0.0;
  std::uint64_t basis_digest = 0;
  Eigen::VectorXd final_weights;
};

/// Minimum-norm fit of u0 at the interior points and g(t0) at both ends.
Eigen::VectorXd fit_initial(const ElmBasis& basis, const CollocationGrid& grid,
                            const ProblemSpec& problem, double rank_tol = kDefaultRankTol);

/// Same fit for an arbitrary profile u(x) with boundary values from the data at t.
Eigen::VectorXd fit_profile(const ElmBasis& basis, const CollocationGrid& grid,
                            const SpaceFn& interior, double g_lo, double g_hi,
                            double rank_tol = kDefaultRankTol);

/// max over n equispaced points (endpoints included) of |network - exact(t, .)|.
double linf_error(const ElmBasis& basis, const Eigen::VectorXd& weights, const SpaceTimeFn& exact,
                  double t, std::size_t n_points);

SolveReport solve(const ProblemSpec& problem, const SolveConfig& config);

}  // namespace elmpde
