#include "elmpde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "elmpde/elm_basis.hpp"
#include "elmpde/least_squares.hpp"
#include "elmpde/pde_problems.hpp"

namespace elmpde {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::int64_t ipow_exact(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

CheckResult fail(const std::string& what) { return {false, what}; }

}  // namespace

CheckResult check_bdf_order_conditions(const std::array<BdfRational, 6>& table) {
  for (const auto& row : table) {
    const int k = row.k;
    if (row.a_num[static_cast<std::size_t>(k)] != row.den)
      return fail("k=" + std::to_string(k) + ": a_k != 1");
    // q = 0 is the consistency condition sum a_j = 0.
    for (int q = 0; q <= k; ++q) {
      std::int64_t lhs = 0;
      for (int j = 0; j <= k; ++j) lhs += ipow_exact(j, q) * row.a_num[static_cast<std::size_t>(j)];
      const std::int64_t rhs = q == 0 ? 0 : q * row.b_num * ipow_exact(k, q - 1);
      if (lhs != rhs)
        return fail("k=" + std::to_string(k) + " q=" + std::to_string(q) + ": exact order condition violated");

      const BdfScheme s = bdf_from_rational(row);
      double flhs = 0.0, scale = 1.0;
      for (int j = 0; j <= k; ++j) {
        const double term = ipow(j, q) * s.a[static_cast<std::size_t>(j)];
        flhs += term;
        scale = std::max(scale, std::abs(term));
      }
      const double frhs = q == 0 ? 0.0 : q * s.b * ipow(k, q - 1);
      if (std::abs(flhs - frhs) > 1e-12 * scale)
        return fail("k=" + std::to_string(k) + " q=" + std::to_string(q) + ": floating order condition off by " +
                    std::to_string(std::abs(flhs - frhs)));
    }
  }
  return {};
}

CheckResult check_derivative_identities(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Interval domain{-0.5, 1.5};
  const ElmBasis basis = sample_basis(30, domain, seed);
  const double h = 1e-6;
  for (int p = 0; p < 100; ++p) {
    const double x = domain.lo + h + (domain.length() - 2 * h) * unit(gen);
    const Eigen::VectorXd d1 = basis.eval(Derivative::first, x);
    const Eigen::VectorXd d2 = basis.eval(Derivative::second, x);
    const Eigen::VectorXd fd1 =
        (basis.eval(Derivative::value, x + h) - basis.eval(Derivative::value, x - h)) / (2 * h);
    const Eigen::VectorXd fd2 =
        (basis.eval(Derivative::first, x + h) - basis.eval(Derivative::first, x - h)) / (2 * h);
    for (Eigen::Index i = 0; i < d1.size(); ++i) {
      if (std::abs(fd1[i] - d1[i]) > 1e-6 * std::max(1.0, std::abs(d1[i])))
        return fail("first derivative mismatch at x=" + std::to_string(x));
      if (std::abs(fd2[i] - d2[i]) > 1e-6 * std::max(1.0, std::abs(d2[i])))
        return fail("second derivative mismatch at x=" + std::to_string(x));
    }
  }
  return {};
}

CheckResult check_least_squares(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> rows(1, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = rows(gen);
    const int n = std::uniform_int_distribution<int>(m, 16)(gen);
    DenseMatrix c(m, n);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = normal(gen);
    for (Eigen::Index i = 0; i < m; ++i) rhs[i] = normal(gen);
    const Eigen::VectorXd oracle = c.transpose() * (c * c.transpose()).llt().solve(rhs);
    const LsSolution sol = min_norm_solve(c, rhs);
    if ((sol.weights - oracle).norm() > 1e-8 * oracle.norm())
      return fail("trial " + std::to_string(trial) + ": differs from the pseudoinverse oracle");
    if (sol.residual_norm > 1e-10 * std::max(1.0, rhs.norm()))
      return fail("trial " + std::to_string(trial) + ": nonzero residual on a full-row-rank system");
  }
  DenseMatrix one(1, 2);
  one << 1, 1;
  const LsSolution s = min_norm_solve(one, Eigen::VectorXd::Constant(1, 2.0));
  if (std::abs(s.weights[0] - 1.0) > 1e-14 || std::abs(s.weights[1] - 1.0) > 1e-14)
    return fail("x + y = 2 did not give (1, 1)");
  return {};
}

CheckResult check_exact_solutions(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<ProblemSpec> problems{problem_a(3), problem_a(5), problem_a(10), problem_b(), problem_c()};
  const double h = 1e-5;
  for (const auto& p : problems) {
    const auto& u = *p.exact;
    // Incompatible corner data: the series is only checked away from t0.
    const double t_lo = p.compatible ? p.t0 + 2 * h : 0.01;
    const double t_hi = p.t_final - 2 * h;
    for (int s = 0; s < 50; ++s) {
      const double t = t_lo + (t_hi - t_lo) * unit(gen);
      const double x = p.domain.lo + h + (p.domain.length() - 2 * h) * unit(gen);
      // Fourth-order in t: the gamma = 10 mode has |u_ttt| ~ 1e9 near t0.
      const double ut = (u(t - 2 * h, x) - 8 * u(t - h, x) + 8 * u(t + h, x) - u(t + 2 * h, x)) / (12 * h);
      const double uxx = (u(t, x + h) - 2 * u(t, x) + u(t, x - h)) / (h * h);
      const double res = ut - p.nu * uxx - p.source(t, x);
      if (std::abs(res) > 1e-5)
        return fail(p.label + ": PDE residual " + std::to_string(res) + " at (" + std::to_string(t) + ", " +
                    std::to_string(x) + ")");
      if (std::abs(u(t, p.domain.lo) - p.g_lo(t)) > 1e-12 || std::abs(u(t, p.domain.hi) - p.g_hi(t)) > 1e-12)
        return fail(p.label + ": boundary data mismatch at t=" + std::to_string(t));
    }
  }
  return {};
}

bool run_verify(const VerifyOptions& options, std::ostream& os) {
  const auto& groups = verify_groups();
  if (options.group && std::find(groups.begin(), groups.end(), *options.group) == groups.end())
    throw std::invalid_argument("unknown verify group '" + *options.group + "'");

  bool all_ok = true;
  for (const auto& g : groups) {
    if (options.group && *options.group != g) continue;
    CheckResult r;
    if (g == "bdf-order") {
      auto table = bdf_table();
      if (options.corrupt_bdf_table) table[2].a_num[1] += 1;
      r = check_bdf_order_conditions(table);
    } else if (g == "derivatives") {
      r = check_derivative_identities();
    } else if (g == "least-squares") {
      r = check_least_squares();
    } else {
      r = check_exact_solutions();
    }
    os << (r.ok ? "PASS " : "FAIL ") << g;
    if (!r.ok) os << ": " << r.detail;
    os << '\n';
    all_ok &= r.ok;
  }
  return all_ok;
}

}  // namespace elmpde
