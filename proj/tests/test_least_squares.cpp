#include <doctest.h>

#include <limits>
#include <random>
#include <stdexcept>

#include "elmpde/elm_basis.hpp"
#include "elmpde/least_squares.hpp"
#include "oracles.hpp"

using namespace elmpde;

TEST_CASE("single equation x + y = 2") {
  DenseMatrix c(1, 2);
  c << 1, 1;
  Eigen::VectorXd rhs(1);
  rhs << 2;

  const auto mn = min_norm_solve(c, rhs);
  CHECK(mn.weights(0) == doctest::Approx(1.0));
  CHECK(mn.weights(1) == doctest::Approx(1.0));
  CHECK(mn.numerical_rank == 1);

  const auto qr = pivoted_qr_solve(c, rhs);
  const int nonzero = (qr.weights.array() != 0.0).count();
  CHECK(nonzero == 1);
  CHECK(qr.weights.sum() == doctest::Approx(2.0));
  CHECK(qr.residual_norm == doctest::Approx(0.0));
}

TEST_CASE("identity system") {
  const DenseMatrix c = DenseMatrix::Identity(2, 2);
  Eigen::VectorXd rhs(2);
  rhs << 3, 4;
  for (const auto& s : {min_norm_solve(c, rhs), pivoted_qr_solve(c, rhs)}) {
    CHECK(s.weights(0) == doctest::Approx(3.0));
    CHECK(s.weights(1) == doctest::Approx(4.0));
  }
}

TEST_CASE("basic solution of a random 5x8 system") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> g;
  DenseMatrix c(5, 8);
  Eigen::VectorXd rhs(5);
  for (int i = 0; i < 5; ++i) {
    rhs(i) = g(gen);
    for (int j = 0; j < 8; ++j) c(i, j) = g(gen);
  }
  const auto s = pivoted_qr_solve(c, rhs);
  CHECK((s.weights.array() == 0.0).count() >= 3);
  CHECK(s.residual_norm <= 1e-10);
  CHECK((c * s.weights - rhs).norm() <= 1e-10);
}

TEST_CASE("min-norm solution equals the row-space oracle and is norm-minimal") {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const auto sys = oracle::random_system(gen, 10, 16);
    const auto s = min_norm_solve(sys.c, sys.rhs);
    const Eigen::VectorXd ref = oracle::row_space_solution(sys.c, sys.rhs);
    CHECK((s.weights - ref).norm() <= 1e-8 * ref.norm());

    const Eigen::MatrixXd ker = oracle::null_space(sys.c);
    REQUIRE(ker.cols() > 0);
    Eigen::VectorXd dir(ker.cols());
    for (Eigen::Index j = 0; j < dir.size(); ++j) dir(j) = g(gen);
    const Eigen::VectorXd z = 1e-3 * (ker * dir).normalized();
    CHECK(s.weights.norm() < (s.weights + z).norm());

    for (int cand = 0; cand < 20; ++cand) {
      Eigen::VectorXd w(sys.c.cols());
      for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = g(gen);
      CHECK(s.residual_norm <= (sys.c * w - sys.rhs).norm());
    }

    const auto q = pivoted_qr_solve(sys.c, sys.rhs);
    CHECK(std::abs(q.residual_norm - s.residual_norm) <= 1e-10);
  }
}

TEST_CASE("residual norm is recomputed from the weights") {
  std::mt19937_64 gen(77);
  std::normal_distribution<double> g;
  DenseMatrix c(8, 5);  // overdetermined: nonzero residual
  Eigen::VectorXd rhs(8);
  for (int i = 0; i < 8; ++i) {
    rhs(i) = g(gen);
    for (int j = 0; j < 5; ++j) c(i, j) = g(gen);
  }
  for (const auto& s : {min_norm_solve(c, rhs), pivoted_qr_solve(c, rhs)}) {
    const double direct = (c * s.weights - rhs).norm();
    CHECK(std::abs(s.residual_norm - direct) <= 1e-12 * direct);
    CHECK(s.residual_norm > 0.1);
  }
}

TEST_CASE("rank-deficient matrix: duplicate columns share the weight") {
  DenseMatrix c(2, 3);
  c << 1, 1, 0,
       2, 2, 1;
  Eigen::VectorXd rhs(2);
  rhs << 2, 5;
  const auto s = min_norm_solve(c, rhs);
  CHECK(s.numerical_rank == 2);
  CHECK(s.weights(0) == doctest::Approx(s.weights(1)));
  CHECK(s.residual_norm <= 1e-12);
}

TEST_CASE("factorize-once solver matches the one-shot solve") {
  std::mt19937_64 gen(3);
  const auto sys = oracle::random_system(gen, 8, 14);
  const MinNormSolver solver(sys.c);
  const auto a = solver.solve(sys.rhs);
  const auto b = min_norm_solve(sys.c, sys.rhs);
  CHECK((a.weights - b.weights).norm() == 0.0);
  CHECK(solver.rank() == sys.c.rows());
}

TEST_CASE("invalid inputs are rejected") {
  const DenseMatrix c = DenseMatrix::Ones(2, 3);
  CHECK_THROWS_AS(min_norm_solve(c, Eigen::VectorXd::Ones(3)), std::invalid_argument);
  CHECK_THROWS_AS(min_norm_solve(DenseMatrix(0, 0), Eigen::VectorXd()), std::invalid_argument);
  DenseMatrix bad = c;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(min_norm_solve(bad, Eigen::VectorXd::Ones(2)), std::invalid_argument);
  CHECK_THROWS_AS(pivoted_qr_solve(c, Eigen::VectorXd::Ones(2), 0.0), std::invalid_argument);
}

// Square sigmoid collocation: with probability one the system is solvable.
TEST_CASE("interpolation at N = M") {
  for (std::size_t n : {5u, 10u, 20u}) {
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 gen(seed);
      std::uniform_real_distribution<double> pick(0.0, 1.0);
      std::normal_distribution<double> g;
      std::vector<double> pts(n);
      for (auto& p : pts) p = pick(gen);
      Eigen::VectorXd data(static_cast<Eigen::Index>(n));
      for (auto& d : data) d = g(gen);
      const auto basis = sample_basis(n, {0.0, 1.0}, seed);
      const auto s = min_norm_solve(basis.eval_matrix(Derivative::value, pts), data);
      if (s.residual_norm <= 1e-8 * data.norm()) ++solved;
    }
    INFO("N = " << n << ": " << solved << "/100 seeds interpolated");
    CHECK(solved >= 95);
  }
}
