#include "elmpde/solver.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace elmpde {

Scheme parse_scheme(std::string_view id) {
  if (id == "BE") return ThetaScheme{1.0};
  if (id == "TR" || id == "CN") return ThetaScheme{0.5};
  if (id == "FE") return ThetaScheme{0.0};
  if (id.starts_with("theta(") && id.ends_with(")")) {
    const std::string_view body = id.substr(6, id.size() - 7);
    double theta = 0.0;
    auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), theta);
    if (ec != std::errc() || end != body.data() + body.size() || theta < 0.0 || theta > 1.0)
      throw std::invalid_argument("theta must be a number in [0,1]: '" + std::string(id) + "'");
    return ThetaScheme{theta};
  }
  if (id.starts_with("BDF")) {
    const std::string_view digits = id.substr(3);
    int k = 0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && end == digits.data() + digits.size()) return bdf_coefficients(k);
  }
  throw std::invalid_argument("unknown scheme '" + std::string(id) +
                              "' (expected BE, TR, FE, theta(x), BDF1..BDF6)");
}

Eigen::VectorXd fit_profile(const ElmBasis& basis, const CollocationGrid& grid,
                            const SpaceFn& interior, double g_lo, double g_hi, double rank_tol) {
  const auto m_int = static_cast<Eigen::Index>(grid.interior.size());
  DenseMatrix c(m_int + 2, static_cast<Eigen::Index>(basis.size()));
  c.topRows(m_int) = basis.eval_matrix(Derivative::value, grid.interior);
  c.bottomRows(2) = basis.eval_matrix(Derivative::value, grid.boundary);
  Eigen::VectorXd rhs(m_int + 2);
  for (Eigen::Index j = 0; j < m_int; ++j) rhs[j] = interior(grid.interior[static_cast<std::size_t>(j)]);
  rhs[m_int] = g_lo;
  rhs[m_int + 1] = g_hi;
  return min_norm_solve(c, rhs, rank_tol).weights;
}

Eigen::VectorXd fit_initial(const ElmBasis& basis, const CollocationGrid& grid,
                            const ProblemSpec& problem, double rank_tol) {
  return fit_profile(basis, grid, problem.initial, problem.g_lo(problem.t0),
                     problem.g_hi(problem.t0), rank_tol);
}

double linf_error(const ElmBasis& basis, const Eigen::VectorXd& weights, const SpaceTimeFn& exact,
                  double t, std::size_t n_points) {
  double worst = 0.0;
  for (double x : equispaced(basis.domain(), n_points))
    worst = std::max(worst, std::abs(network_value(basis, weights, x) - exact(t, x)));
  return worst;
}

SolveReport solve(const ProblemSpec& problem, const SolveConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const Scheme scheme = parse_scheme(config.scheme_id);
  if (config.m_start < 1) throw std::invalid_argument("m_start must be >= 1");
  if (config.n_error_points < 2) throw std::invalid_argument("n_error_points must be >= 2");

  SolveReport report;
  report.config = config;
  report.problem_label = problem.label;
  report.t_final = config.t_final.value_or(problem.t_final);
  step_total(problem.t0, report.t_final, config.dt);

  const ElmBasis basis = sample_basis(config.n_neurons, problem.domain, config.seed);
  report.basis_digest = basis.digest();
  const CollocationGrid grid = grid_for_neurons(problem, config.n_neurons, config.grid);
  const Eigen::VectorXd w0 = fit_initial(basis, grid, problem, config.rank_tol);

  StepObserver observer;
  if (config.track_errors && problem.exact) {
    observer = [&](double t, const Eigen::VectorXd& w, double) {
      report.error_trajectory.emplace_back(t, linf_error(basis, w, *problem.exact, t, config.n_error_points));
    };
  }
  LoopResult loop = run_time_loop(scheme, problem, basis, grid, config.dt, report.t_final, w0,
                                  {config.m_start, config.rank_tol}, observer);
  report.nt = loop.solves;
  report.residuals = std::move(loop.residuals);
  report.final_weights = loop.history.newest();
  if (problem.exact)
    report.linf_error = linf_error(basis, report.final_weights, *problem.exact, report.t_final,
                                   config.n_error_points);
  report.walltime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace elmpde
