#include "elmpde/least_squares.hpp"

#include <stdexcept>
#include <string>

namespace elmpde {

namespace {

void check_inputs(const DenseMatrix& c, double rank_tol) {
  if (c.rows() == 0 || c.cols() == 0) throw std::invalid_argument("least squares: empty matrix");
  if (!c.allFinite()) throw std::invalid_argument("least squares: matrix has non-finite entries");
  if (!(rank_tol > 0.0)) throw std::invalid_argument("least squares: rank_tol must be positive");
}

void check_rhs(const DenseMatrix& c, const Eigen::VectorXd& rhs) {
  if (rhs.size() != c.rows())
    throw std::invalid_argument("least squares: rhs has " + std::to_string(rhs.size()) +
                                " entries, matrix has " + std::to_string(c.rows()) + " rows");
  if (!rhs.allFinite()) throw std::invalid_argument("least squares: rhs has non-finite entries");
}

LsSolution finish(const DenseMatrix& c, const Eigen::VectorXd& rhs, Eigen::VectorXd w,
                  Eigen::Index rank, LsMethod method) {
  LsSolution out;
  out.residual_norm = (c * w - rhs).norm();
  out.weights = std::move(w);
  out.numerical_rank = rank;
  out.method = method;
  return out;
}

}  // namespace

std::string_view to_string(LsMethod method) {
  return method == LsMethod::min_norm_cod ? "min_norm_cod" : "pivoted_qr";
}

LsSolution min_norm_solve(const DenseMatrix& c, const Eigen::VectorXd& rhs, double rank_tol) {
  return MinNormSolver(c, rank_tol).solve(rhs);
}

LsSolution pivoted_qr_solve(const DenseMatrix& c, const Eigen::VectorXd& rhs, double rank_tol) {
  check_inputs(c, rank_tol);
  check_rhs(c, rhs);
  Eigen::ColPivHouseholderQR<DenseMatrix> qr;
  qr.setThreshold(rank_tol);
  qr.compute(c);
  const Eigen::Index rank = qr.rank();

  // w = P [R11^{-1} (Q^T rhs)_{1:r}; 0]
  Eigen::VectorXd qtb = rhs;
  qtb.applyOnTheLeft(qr.householderQ().setLength(qr.nonzeroPivots()).adjoint());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(c.cols());
  if (rank > 0) {
    z.head(rank) = qr.matrixR()
                       .topLeftCorner(rank, rank)
                       .triangularView<Eigen::Upper>()
                       .solve(qtb.head(rank));
  }
  Eigen::VectorXd w = qr.colsPermutation() * z;
  return finish(c, rhs, std::move(w), rank, LsMethod::pivoted_qr);
}

MinNormSolver::MinNormSolver(const DenseMatrix& c, double rank_tol) : c_(c) {
  check_inputs(c_, rank_tol);
  cod_.setThreshold(rank_tol);
  cod_.compute(c_);
}

LsSolution MinNormSolver::solve(const Eigen::VectorXd& rhs) const {
  check_rhs(c_, rhs);
  Eigen::VectorXd w = cod_.solve(rhs);
  return finish(c_, rhs, std::move(w), cod_.rank(), LsMethod::min_norm_cod);
}

}  // namespace elmpde
