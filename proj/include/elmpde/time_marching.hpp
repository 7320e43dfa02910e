#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "elmpde/elm_basis.hpp"
#include "elmpde/least_squares.hpp"
#include "elmpde/pde_problems.hpp"

namespace elmpde {

/// One row of the BDF table with integer numerators over a common denominator:
/// a_j = a_num[j] / den, b_k = b_num / den.
struct BdfRational {
  int k = 0;
  std::array<std::int64_t, 7> a_num{};  // a_0 .. a_k, unused tail zero
  std::int64_t b_num = 0;
  std::int64_t den = 1;
  double stability_angle_deg = 0.0;
};

/// BDF coefficients and stability angles for k = 1..6.
const std::array<BdfRational, 6>& bdf_table();

struct BdfScheme {
  int k = 1;
  std::vector<double> a;  // a_0 .. a_k, a_k = 1
  double b = 1.0;
  double stability_angle_deg = 90.0;
  BdfRational exact;
};

/// Throws std::invalid_argument for k outside [1, 6] (not zero-stable beyond 6).
BdfScheme bdf_coefficients(int k);
BdfScheme bdf_from_rational(const BdfRational& row);

struct ThetaScheme {
  double theta = 1.0;

  /// "FE", "TR", "BE" for theta = 0, 1/2, 1; "theta(<value>)" otherwise.
  std::string tag() const;
};

using Scheme = std::variant<BdfScheme, ThetaScheme>;

/// Number of past solutions the scheme's right-hand side needs.
int step_count(const Scheme& scheme);
std::string scheme_name(const Scheme& scheme);

/// Sliding window of the most recent external-weight vectors, newest last,
/// stamped with uniformly spaced times.
class WeightHistory {
 public:
  explicit WeightHistory(std::size_t capacity);

  /// Appends (w, t); evicts the oldest entry once capacity is reached.
  void push(Eigen::VectorXd weights, double t);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool full() const { return entries_.size() == capacity_; }
  const Eigen::VectorXd& weights(std::size_t i) const { return entries_.at(i); }
  double time(std::size_t i) const { return times_.at(i); }
  const Eigen::VectorXd& newest() const { return entries_.back(); }
  double newest_time() const { return times_.back(); }

 private:
  std::size_t capacity_;
  std::deque<Eigen::VectorXd> entries_;
  std::deque<double> times_;
};

/// Builds step matrices and right-hand sides for one (scheme, dt) pair over a
/// fixed basis and grid. Feature evaluations at the collocation points are
/// computed once.
class StepAssembler {
 public:
  StepAssembler(Scheme scheme, double dt, const ElmBasis& basis, const CollocationGrid& grid,
                const ProblemSpec& problem);

  const Scheme& scheme() const { return scheme_; }
  double dt() const { return dt_; }

  /// (M_int + 2) x N: interior rows a_k sigma_i - dt b_k nu sigma_i'' (BDF) or
  /// sigma_i - theta dt nu sigma_i'' (theta), then the two Dirichlet trace rows.
  DenseMatrix matrix() const;

  /// Right-hand side for the solution at t_new from the scheme's history.
  Eigen::VectorXd rhs(const WeightHistory& history, double t_new) const;

 private:
  Scheme scheme_;
  double dt_;
  const ProblemSpec* problem_;
  const CollocationGrid* grid_;
  Eigen::MatrixXd value_int_;
  Eigen::MatrixXd second_int_;
  Eigen::MatrixXd value_bnd_;
};

DenseMatrix assemble_step_matrix(const Scheme& scheme, double dt, const ElmBasis& basis,
                                 const CollocationGrid& grid, const ProblemSpec& problem);

Eigen::VectorXd assemble_step_rhs(const Scheme& scheme, double dt, const WeightHistory& history,
                                  const ElmBasis& basis, const CollocationGrid& grid,
                                  const ProblemSpec& problem, double t_new);

struct MarchOptions {
  int m_start = 8;
  double rank_tol = kDefaultRankTol;
};

/// Called after every stationary solve with (time, weights, residual norm).
using StepObserver = std::function<void(double, const Eigen::VectorXd&, double)>;

struct StartResult {
  WeightHistory history;
  long solves = 0;
};

/// Produces the k starting values at t0, t0 + dt, ..., t0 + (k-1) dt by running
/// the (k-1)-step BDF with step dt/m, itself started the same way, and keeping
/// every m-th sub-step.
StartResult starting_procedure(int k, int m, double dt, const ProblemSpec& problem,
                               const ElmBasis& basis, const CollocationGrid& grid,
                               const Eigen::VectorXd& w0, double rank_tol = kDefaultRankTol,
                               const StepObserver& observer = {});

struct LoopResult {
  WeightHistory history;  // last step_count(scheme) solutions
  long solves = 0;        // Nt, starting sub-steps included
  std::vector<double> residuals;
};

/// Advances a full history n_steps times with one factorized step matrix.
LoopResult march(const Scheme& scheme, const ProblemSpec& problem, const ElmBasis& basis,
                 const CollocationGrid& grid, double dt, WeightHistory start, long n_steps,
                 double rank_tol = kDefaultRankTol, const StepObserver& observer = {});

/// Integer number of steps of size dt in [t0, t_final]; throws when the
/// horizon is not a multiple of dt within 1e-10 relative.
long step_total(double t0, double t_final, double dt);

/// Time loop from the fitted initial weights, including the starting
/// procedure for multistep schemes.
LoopResult run_time_loop(const Scheme& scheme, const ProblemSpec& problem, const ElmBasis& basis,
                         const CollocationGrid& grid, double dt, double t_final,
                         const Eigen::VectorXd& w0, const MarchOptions& options = {},
                         const StepObserver& observer = {});

}  // namespace elmpde
