#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace elmpde {

/// Column-major dense matrix. Collocation matrices are dense and not banded.
using DenseMatrix = Eigen::MatrixXd;

enum class LsMethod { min_norm_cod, pivoted_qr };

std::string_view to_string(LsMethod method);

struct LsSolution {
  Eigen::VectorXd weights;
  double residual_norm = 0.0;  // ||C w - rhs||_2, recomputed from weights
  Eigen::Index numerical_rank = 0;
  LsMethod method = LsMethod::min_norm_cod;
};

/// Default relative rank tolerance for the stationary solves.
inline constexpr double kDefaultRankTol = 1e-15;

/// Minimum-norm least-squares solution through a complete orthogonal
/// decomposition C P = Q [R 0] Z^T. Pivots with |r_jj| <= rank_tol * |r_11|
/// are treated as zero.
LsSolution min_norm_solve(const DenseMatrix& c, const Eigen::VectorXd& rhs,
                          double rank_tol = kDefaultRankTol);

/// Basic solution from QR with column pivoting: the weights of the
/// columns beyond the numerical rank are exactly zero.
LsSolution pivoted_qr_solve(const DenseMatrix& c, const Eigen::VectorXd& rhs,
                            double rank_tol = kDefaultRankTol);

/// Factorize-once / solve-many form of min_norm_solve, used by the time loop
/// where the step matrix is constant.
class MinNormSolver {
 public:
  MinNormSolver(const DenseMatrix& c, double rank_tol = kDefaultRankTol);

  LsSolution solve(const Eigen::VectorXd& rhs) const;

  const DenseMatrix& matrix() const { return c_; }
  Eigen::Index rank() const { return cod_.rank(); }

 private:
  DenseMatrix c_;
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod_;
};

}  // namespace elmpde
