#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "elmpde/elm_basis.hpp"
#include "elmpde/pde_problems.hpp"
#include "elmpde/solver.hpp"
#include "elmpde/time_marching.hpp"
#include "oracles.hpp"

using namespace elmpde;

namespace {

struct Setup {
  ProblemSpec problem;
  ElmBasis basis;
  CollocationGrid grid;
  Eigen::VectorXd w0;
};

Setup setup(const ProblemSpec& p, std::size_t n = 40, std::uint64_t seed = 1000) {
  auto basis = sample_basis(n, p.domain, seed);
  auto grid = grid_for_neurons(p, n);
  auto w0 = fit_initial(basis, grid, p);
  return {p, std::move(basis), std::move(grid), std::move(w0)};
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("BDF table satisfies the order conditions in integer arithmetic") {
  for (const auto& row : bdf_table()) {
    CAPTURE(row.k);
    long long sum = 0;
    for (int j = 0; j <= row.k; ++j) sum += row.a_num[j];
    CHECK(sum == 0);
    CHECK(row.a_num[row.k] == row.den);
    for (int q = 1; q <= row.k; ++q) {
      long long lhs = 0;
      for (int j = 1; j <= row.k; ++j) lhs += ipow(j, q) * row.a_num[j];
      CHECK(lhs == q * row.b_num * ipow(row.k, q - 1));
    }
  }
}

TEST_CASE("floating BDF coefficients match the backward-difference construction") {
  for (int k = 1; k <= 6; ++k) {
    const auto s = bdf_coefficients(k);
    const auto [a, b] = oracle::bdf_from_differences(k);
    REQUIRE(s.a.size() == a.size());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(s.a[j] - a[j]) <= 1e-13);
    CHECK(std::abs(s.b - b) <= 1e-14);
    CHECK(s.a.back() == 1.0);
  }
  const double angles[] = {90.0, 90.0, 86.03, 73.35, 51.84, 17.84};
  for (int k = 1; k <= 6; ++k) CHECK(bdf_coefficients(k).stability_angle_deg == doctest::Approx(angles[k - 1]));
}

TEST_CASE("BDF order outside 1..6 is an error") {
  CHECK_THROWS_AS(bdf_coefficients(0), std::invalid_argument);
  try {
    bdf_coefficients(7);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("BDF order k outside [1,6]") != std::string::npos);
  }
}

TEST_CASE("theta tags and step counts") {
  CHECK(ThetaScheme{0.0}.tag() == "FE");
  CHECK(ThetaScheme{0.5}.tag() == "TR");
  CHECK(ThetaScheme{1.0}.tag() == "BE");
  CHECK(ThetaScheme{0.25}.tag().rfind("theta(", 0) == 0);
  CHECK(step_count(Scheme{ThetaScheme{0.5}}) == 1);
  CHECK(step_count(Scheme{bdf_coefficients(4)}) == 4);
}

TEST_CASE("weight history keeps a uniform sliding window") {
  WeightHistory h(2);
  h.push(Eigen::VectorXd::Constant(3, 1.0), 0.0);
  h.push(Eigen::VectorXd::Constant(3, 2.0), 0.1);
  CHECK(h.full());
  h.push(Eigen::VectorXd::Constant(3, 3.0), 0.2);
  CHECK(h.size() == 2);
  CHECK(h.weights(0)(0) == 2.0);
  CHECK(h.newest_time() == doctest::Approx(0.2));
  CHECK_THROWS_AS(h.push(Eigen::VectorXd::Constant(2, 1.0), 0.3), std::invalid_argument);
  CHECK_THROWS_AS(h.push(Eigen::VectorXd::Constant(3, 1.0), 0.2), std::invalid_argument);
  CHECK_THROWS_AS(h.push(Eigen::VectorXd::Constant(3, 1.0), 0.35), std::invalid_argument);
}

TEST_CASE("BDF1 step equals the theta = 1 step") {
  const auto s = setup(problem_a(3.0));
  const StepAssembler bdf(bdf_coefficients(1), 0.1, s.basis, s.grid, s.problem);
  const StepAssembler be(ThetaScheme{1.0}, 0.1, s.basis, s.grid, s.problem);
  const auto ma = bdf.matrix();
  const auto mb = be.matrix();
  CHECK((ma - mb).cwiseAbs().maxCoeff() <= 1e-14);
  WeightHistory h(1);
  h.push(s.w0, 0.0);
  CHECK((bdf.rhs(h, 0.1) - be.rhs(h, 0.1)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("step matrix is assembled identically on every call") {
  const auto s = setup(problem_c());
  const StepAssembler a(bdf_coefficients(3), 0.05, s.basis, s.grid, s.problem);
  const DenseMatrix first = a.matrix();
  for (int i = 0; i < 5; ++i) CHECK(a.matrix() == first);
  CHECK(assemble_step_matrix(bdf_coefficients(3), 0.05, s.basis, s.grid, s.problem) == first);
}

TEST_CASE("one BDF1 step solves the backward-Euler elliptic system") {
  const auto s = setup(problem_c());
  const double dt = 0.05, nu = s.problem.nu;
  const auto& pts = s.grid.interior;
  const Eigen::Index mi = static_cast<Eigen::Index>(pts.size());
  DenseMatrix c(mi + 2, 40);
  Eigen::VectorXd rhs(mi + 2);
  for (Eigen::Index j = 0; j < mi; ++j) {
    const double x = pts[static_cast<std::size_t>(j)];
    c.row(j) = (s.basis.eval(Derivative::value, x) - dt * nu * s.basis.eval(Derivative::second, x)).transpose();
    rhs(j) = network_value(s.basis, s.w0, x) + dt * s.problem.source(dt, x);
  }
  c.row(mi) = s.basis.eval(Derivative::value, 0.0).transpose();
  c.row(mi + 1) = s.basis.eval(Derivative::value, 1.0).transpose();
  rhs(mi) = 0.0;
  rhs(mi + 1) = 0.0;
  const auto ref = min_norm_solve(c, rhs);

  Eigen::VectorXd got;
  auto observe = [&got](double, const Eigen::VectorXd& w, double) { if (got.size() == 0) got = w; };
  run_time_loop(bdf_coefficients(1), s.problem, s.basis, s.grid, dt, dt, s.w0, {}, observe);
  // The weights themselves are only determined up to the conditioning of C.
  CHECK((c * got - rhs).norm() <= 1e-10 * rhs.norm());
  double gap = 0.0;
  for (double x : equispaced(s.problem.domain, 5000))
    gap = std::max(gap, std::abs(network_value(s.basis, got, x) - network_value(s.basis, ref.weights, x)));
  CHECK(gap <= 1e-10);
}

TEST_CASE("starting procedure sub-step counts") {
  const auto s = setup(problem_a(3.0));
  CHECK(starting_procedure(2, 8, 0.1, s.problem, s.basis, s.grid, s.w0).solves == 8);
  CHECK(starting_procedure(3, 8, 0.1, s.problem, s.basis, s.grid, s.w0).solves == 23);
  CHECK(starting_procedure(4, 8, 0.1, s.problem, s.basis, s.grid, s.w0).solves == 45);
  CHECK(starting_procedure(2, 1, 0.1, s.problem, s.basis, s.grid, s.w0).solves == 1);
  const auto st = starting_procedure(3, 8, 0.1, s.problem, s.basis, s.grid, s.w0);
  CHECK(st.history.size() == 3);
  CHECK(st.history.time(0) == 0.0);
  CHECK(st.history.newest_time() == doctest::Approx(0.2));
  CHECK_THROWS_AS(starting_procedure(1, 8, 0.1, s.problem, s.basis, s.grid, s.w0), std::invalid_argument);
  CHECK_THROWS_AS(starting_procedure(2, 0, 0.1, s.problem, s.basis, s.grid, s.w0), std::invalid_argument);
}

TEST_CASE("linear-system counts of full runs") {
  const auto s = setup(problem_a(3.0));
  CHECK(run_time_loop(ThetaScheme{1.0}, s.problem, s.basis, s.grid, 0.1, 1.0, s.w0).solves == 10);
  CHECK(run_time_loop(bdf_coefficients(2), s.problem, s.basis, s.grid, 0.1, 1.0, s.w0).solves == 17);
  CHECK(run_time_loop(bdf_coefficients(3), s.problem, s.basis, s.grid, 0.1, 1.0, s.w0).solves == 31);
  CHECK(run_time_loop(bdf_coefficients(1), s.problem, s.basis, s.grid, 0.1, 1.0, s.w0).solves == 10);
}

TEST_CASE("zero steps returns the initial weights") {
  const auto s = setup(problem_c());
  const auto r = run_time_loop(bdf_coefficients(2), s.problem, s.basis, s.grid, 0.1, 0.0, s.w0);
  CHECK(r.solves == 0);
  CHECK(r.history.newest() == s.w0);
}

TEST_CASE("horizon must be a multiple of the step") {
  CHECK(step_total(0.0, 1.0, 0.1) == 10);
  CHECK(step_total(0.0, 1.2, 1.0 / 160) == 192);
  CHECK_THROWS_AS(step_total(0.0, 1.0, 0.3), std::invalid_argument);
}

TEST_CASE("BDF1 and theta = 1 give the same weight sequence") {
  const auto s = setup(problem_a(3.0));
  std::vector<Eigen::VectorXd> a, b;
  run_time_loop(bdf_coefficients(1), s.problem, s.basis, s.grid, 0.05, 1.0, s.w0, {},
                [&a](double, const Eigen::VectorXd& w, double) { a.push_back(w); });
  run_time_loop(ThetaScheme{1.0}, s.problem, s.basis, s.grid, 0.05, 1.0, s.w0, {},
                [&b](double, const Eigen::VectorXd& w, double) { b.push_back(w); });
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() <= 1e-10);
}

// Above the spatial floor the error is the time integrator's error on the
// two modes of the exact solution.
TEST_CASE("final errors follow the scalar modal recurrence") {
  const auto problem = problem_a(3.0);
  const auto modes = oracle::problem_a_modes(3.0);
  struct Case {
    std::string id;
    oracle::ScalarScheme s;
  };
  const Case cases[] = {{"BE", {false, 1, 1.0}}, {"TR", {false, 1, 0.5}}, {"BDF2", {true, 2, 1.0}},
                        {"BDF3", {true, 3, 1.0}}, {"BDF4", {true, 4, 1.0}}};
  for (const auto& c : cases) {
    for (double dt : {0.1, 0.05, 0.025}) {
      const double modal = oracle::modal_time_error(c.s, 8, dt, 1.0, modes, 0.0, 1.0, 5000);
      if (modal < 1e-5) continue;  // too close to the spatial floor to compare
      SolveConfig cfg;
      cfg.scheme_id = c.id;
      cfg.dt = dt;
      const double e = *solve(problem, cfg).linf_error;
      CAPTURE(c.id);
      CAPTURE(dt);
      CHECK(e == doctest::Approx(modal).epsilon(0.1));
    }
  }
}

namespace {

struct SteadyStep {
  std::string id;
  DenseMatrix c;
  Eigen::VectorXd rhs;
  Eigen::VectorXd w;
};

// For each scheme: a steady state u* = F(w*) with w* in the row space of the
// step matrix, f = -nu u*'', g = u* at the ends, and the step system built from
// a history that holds w* at every level.
std::vector<SteadyStep> steady_steps() {
  const Interval dom{0.0, 1.0};
  const auto basis = sample_basis(40, dom, 1000);
  std::mt19937_64 gen(4);
  std::normal_distribution<double> g;
  Eigen::VectorXd base(40);
  for (auto& v : base) v = g(gen);

  std::vector<SteadyStep> out;
  const std::vector<std::string> ids{"BE", "TR", "FE", "theta(0.3)", "BDF2", "BDF3", "BDF4", "BDF5", "BDF6"};
  for (const auto& id : ids) {
    ProblemSpec p;
    p.label = "steady";
    p.nu = 0.7;
    p.domain = dom;
    p.source = [](double, double) { return 0.0; };
    p.initial = [](double) { return 0.0; };
    p.g_lo = p.g_hi = [](double) { return 0.0; };
    const Scheme scheme = parse_scheme(id);
    const auto grid = grid_for_neurons(p, 40);
    const double dt = 0.05;
    const DenseMatrix probe = assemble_step_matrix(scheme, dt, basis, grid, p);
    const Eigen::VectorXd w = min_norm_solve(probe, probe * base).weights;
    p.source = [basis, w, nu = p.nu](double, double x) {
      return -nu * network_value(basis, w, x, Derivative::second);
    };
    const double glo = network_value(basis, w, 0.0), ghi = network_value(basis, w, 1.0);
    p.g_lo = [glo](double) { return glo; };
    p.g_hi = [ghi](double) { return ghi; };

    const StepAssembler step(scheme, dt, basis, grid, p);
    WeightHistory h(static_cast<std::size_t>(step_count(scheme)));
    for (int j = 0; j < step_count(scheme); ++j) h.push(w, j * dt);
    out.push_back({id, step.matrix(), step.rhs(h, step_count(scheme) * dt), w});
  }
  return out;
}

}  // namespace

TEST_CASE("steady states satisfy every step system") {
  const auto basis = sample_basis(40, {0.0, 1.0}, 1000);
  for (const auto& s : steady_steps()) {
    CAPTURE(s.id);
    CHECK((s.c * s.w - s.rhs).norm() <= 1e-8 * s.rhs.norm());
    const Eigen::VectorXd next = min_norm_solve(s.c, s.rhs).weights;
    double gap = 0.0, size = 0.0;
    for (double x : equispaced({0.0, 1.0}, 5000)) {
      const double u = network_value(basis, s.w, x);
      gap = std::max(gap, std::abs(network_value(basis, next, x) - u));
      size = std::max(size, std::abs(u));
    }
    CHECK(gap <= 1e-8 * size);
  }
}

// The weight vector itself as a fixed point of the step map.
TEST_CASE("steady-state weights are a fixed point of the step map") {
  for (const auto& s : steady_steps()) {
    const Eigen::VectorXd next = min_norm_solve(s.c, s.rhs).weights;
    CAPTURE(s.id);
    CHECK((next - s.w).norm() <= 1e-8 * s.w.norm());
  }
}

// u = sin(pi x), f = nu pi^2 sin(pi x): the discrete solution must stay at
// the accuracy of the initial fit.
TEST_CASE("steady sine solution does not drift") {
  ProblemSpec p;
  p.label = "steady-sine";
  p.nu = 1.0;
  p.domain = {0.0, 1.0};
  p.source = [](double, double x) { return oracle::pi * oracle::pi * std::sin(oracle::pi * x); };
  p.initial = [](double x) { return std::sin(oracle::pi * x); };
  p.g_lo = p.g_hi = [](double) { return 0.0; };
  p.exact = [](double, double x) { return std::sin(oracle::pi * x); };
  const auto basis = sample_basis(40, p.domain, 1000);
  const auto grid = grid_for_neurons(p, 40);
  const auto w0 = fit_initial(basis, grid, p);
  const double fit_error = linf_error(basis, w0, *p.exact, 0.0, 5000);
  for (const std::string id : {"BE", "TR", "BDF2", "BDF3", "BDF4"}) {
    const auto r = run_time_loop(parse_scheme(id), p, basis, grid, 0.1, 1.0, w0);
    CAPTURE(id);
    CHECK(linf_error(basis, r.history.newest(), *p.exact, 1.0, 5000) <= 10.0 * fit_error);
  }
}

TEST_CASE("assembler rejects inconsistent inputs") {
  const auto s = setup(problem_a(3.0));
  CHECK_THROWS_AS(StepAssembler(ThetaScheme{1.5}, 0.1, s.basis, s.grid, s.problem), std::invalid_argument);
  CollocationGrid outside = s.grid;
  outside.interior.back() = 1.5;
  CHECK_THROWS_AS(StepAssembler(ThetaScheme{1.0}, 0.1, s.basis, outside, s.problem), std::invalid_argument);
  const StepAssembler a(bdf_coefficients(2), 0.1, s.basis, s.grid, s.problem);
  WeightHistory h(1);
  h.push(s.w0, 0.0);
  CHECK_THROWS_AS(a.rhs(h, 0.1), std::invalid_argument);
}
