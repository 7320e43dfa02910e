#include "elmpde/time_marching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elmpde {

const std::array<BdfRational, 6>& bdf_table() {
  static const std::array<BdfRational, 6> table{{
      {1, {-1, 1}, 1, 1, 90.0},
      {2, {1, -4, 3}, 2, 3, 90.0},
      {3, {-2, 9, -18, 11}, 6, 11, 86.03},
      {4, {3, -16, 36, -48, 25}, 12, 25, 73.35},
      {5, {-12, 75, -200, 300, -300, 137}, 60, 137, 51.84},
      {6, {10, -72, 225, -400, 450, -360, 147}, 60, 147, 17.84},
  }};
  return table;
}

BdfScheme bdf_from_rational(const BdfRational& row) {
  BdfScheme s;
  s.k = row.k;
  s.a.resize(static_cast<std::size_t>(row.k) + 1);
  const double den = static_cast<double>(row.den);
  for (int j = 0; j <= row.k; ++j) s.a[static_cast<std::size_t>(j)] = static_cast<double>(row.a_num[j]) / den;
  s.b = static_cast<double>(row.b_num) / den;
  s.stability_angle_deg = row.stability_angle_deg;
  s.exact = row;
  return s;
}

BdfScheme bdf_coefficients(int k) {
  if (k < 1 || k > 6)
    throw std::invalid_argument("BDF order k outside [1,6]: " + std::to_string(k) +
                                " (BDF is not zero-stable for k > 6)");
  return bdf_from_rational(bdf_table()[static_cast<std::size_t>(k - 1)]);
}

std::string ThetaScheme::tag() const {
  if (theta == 0.0) return "FE";
  if (theta == 0.5) return "TR";
  if (theta == 1.0) return "BE";
  std::ostringstream os;
  os << "theta(" << theta << ")";
  return os.str();
}

int step_count(const Scheme& scheme) {
  if (const auto* bdf = std::get_if<BdfScheme>(&scheme)) return bdf->k;
  return 1;
}

std::string scheme_name(const Scheme& scheme) {
  if (const auto* bdf = std::get_if<BdfScheme>(&scheme)) return "BDF" + std::to_string(bdf->k);
  return std::get<ThetaScheme>(scheme).tag();
}

// ---------------------------------------------------------------------------

WeightHistory::WeightHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("WeightHistory: capacity must be >= 1");
}

void WeightHistory::push(Eigen::VectorXd weights, double t) {
  if (!entries_.empty()) {
    if (weights.size() != entries_.back().size())
      throw std::invalid_argument("WeightHistory: weight vectors differ in length");
    if (!(t > times_.back())) throw std::invalid_argument("WeightHistory: times must increase");
    if (times_.size() >= 2) {
      const double spacing = times_[1] - times_[0];
      const double step = t - times_.back();
      // Scaled by |t| as well: spacing of stored doubles cannot be better than ulp(t).
      if (std::abs(step - spacing) > 1e-12 * std::max(std::abs(spacing), std::abs(t)))
        throw std::invalid_argument("WeightHistory: non-uniform time spacing");
    }
  }
  if (entries_.size() == capacity_) {
    entries_.pop_front();
    times_.pop_front();
  }
  entries_.push_back(std::move(weights));
  times_.push_back(t);
}

// ---------------------------------------------------------------------------

StepAssembler::StepAssembler(Scheme scheme, double dt, const ElmBasis& basis,
                             const CollocationGrid& grid, const ProblemSpec& problem)
    : scheme_(std::move(scheme)), dt_(dt), problem_(&problem), grid_(&grid) {
  if (!(dt > 0.0)) throw std::invalid_argument("step assembly: dt must be positive");
  const Interval d = basis.domain();
  for (double x : grid.interior)
    if (!(x > d.lo && x < d.hi))
      throw std::invalid_argument("step assembly: interior collocation point outside the domain");
  if (grid.boundary[0] != d.lo || grid.boundary[1] != d.hi)
    throw std::invalid_argument("step assembly: boundary points must be the domain endpoints");
  if (grid.rows() > basis.size())
    throw std::invalid_argument("step assembly: " + std::to_string(grid.rows()) +
                                " collocation rows exceed " + std::to_string(basis.size()) +
                                " neurons");
  if (const auto* th = std::get_if<ThetaScheme>(&scheme_); th && !(th->theta >= 0.0 && th->theta <= 1.0))
    throw std::invalid_argument("theta must lie in [0, 1]");
  value_int_ = basis.eval_matrix(Derivative::value, grid.interior);
  second_int_ = basis.eval_matrix(Derivative::second, grid.interior);
  value_bnd_ = basis.eval_matrix(Derivative::value, grid.boundary);
}

DenseMatrix StepAssembler::matrix() const {
  const Eigen::Index m_int = value_int_.rows();
  DenseMatrix c(m_int + 2, value_int_.cols());
  const double nu = problem_->nu;
  if (const auto* bdf = std::get_if<BdfScheme>(&scheme_)) {
    c.topRows(m_int) = bdf->a.back() * value_int_ - (dt_ * bdf->b * nu) * second_int_;
  } else {
    const double theta = std::get<ThetaScheme>(scheme_).theta;
    c.topRows(m_int) = value_int_ - (theta * dt_ * nu) * second_int_;
  }
  c.bottomRows(2) = value_bnd_;
  return c;
}

Eigen::VectorXd StepAssembler::rhs(const WeightHistory& history, double t_new) const {
  const std::size_t k = static_cast<std::size_t>(step_count(scheme_));
  if (history.size() != k)
    throw std::invalid_argument("step rhs: history holds " + std::to_string(history.size()) +
                                " entries, scheme needs " + std::to_string(k));
  const double expected = history.newest_time() + dt_;
  if (std::abs(t_new - expected) > 1e-10 * std::max(std::abs(t_new), dt_))
    throw std::invalid_argument("step rhs: t_new does not follow the history by dt");

  const auto& xs = grid_->interior;
  const Eigen::Index m_int = value_int_.rows();
  const double nu = problem_->nu;
  Eigen::VectorXd r(m_int + 2);

  if (const auto* bdf = std::get_if<BdfScheme>(&scheme_)) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m_int);
    for (std::size_t j = 0; j < k; ++j) acc -= bdf->a[j] * (value_int_ * history.weights(j));
    const double scale = dt_ * bdf->b;
    for (Eigen::Index i = 0; i < m_int; ++i)
      acc[i] += scale * problem_->source(t_new, xs[static_cast<std::size_t>(i)]);
    r.head(m_int) = acc;
  } else {
    const double theta = std::get<ThetaScheme>(scheme_).theta;
    const double t_old = history.newest_time();
    const Eigen::VectorXd& w = history.newest();
    Eigen::VectorXd acc = value_int_ * w + ((1.0 - theta) * dt_ * nu) * (second_int_ * w);
    for (Eigen::Index i = 0; i < m_int; ++i) {
      const double x = xs[static_cast<std::size_t>(i)];
      acc[i] += theta * dt_ * problem_->source(t_new, x) +
                (1.0 - theta) * dt_ * problem_->source(t_old, x);
    }
    r.head(m_int) = acc;
  }
  r[m_int] = problem_->g_lo(t_new);
  r[m_int + 1] = problem_->g_hi(t_new);
  return r;
}

DenseMatrix assemble_step_matrix(const Scheme& scheme, double dt, const ElmBasis& basis,
                                 const CollocationGrid& grid, const ProblemSpec& problem) {
  return StepAssembler(scheme, dt, basis, grid, problem).matrix();
}

Eigen::VectorXd assemble_step_rhs(const Scheme& scheme, double dt, const WeightHistory& history,
                                  const ElmBasis& basis, const CollocationGrid& grid,
                                  const ProblemSpec& problem, double t_new) {
  return StepAssembler(scheme, dt, basis, grid, problem).rhs(history, t_new);
}

// ---------------------------------------------------------------------------

namespace {

struct MarchContext {
  const ProblemSpec& problem;
  const ElmBasis& basis;
  const CollocationGrid& grid;
  double rank_tol;
  int m;
  const StepObserver& observer;
};

struct Trajectory {
  std::vector<Eigen::VectorXd> states;  // states[i] at t0 + i h
  long solves = 0;
  std::vector<double> residuals;
};

void append(std::vector<double>& dst, const std::vector<double>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

// Solutions of the j-step BDF with step h at t0 + i h, i = 0..n_out. The first
// j - 1 values come from the (j-1)-step BDF with step h/m, recursively.
Trajectory bdf_trajectory(int j, double h, long n_out, double t0, const Eigen::VectorXd& w0,
                          const MarchContext& ctx) {
  Trajectory out;
  out.states.push_back(w0);
  if (n_out == 0) return out;

  long n_start = 0;
  if (j > 1) {
    n_start = std::min<long>(j - 1, n_out);
    Trajectory sub = bdf_trajectory(j - 1, h / ctx.m, n_start * ctx.m, t0, w0, ctx);
    for (long i = 1; i <= n_start; ++i) out.states.push_back(sub.states[static_cast<std::size_t>(i * ctx.m)]);
    out.solves += sub.solves;
    append(out.residuals, sub.residuals);
  }
  if (n_out > n_start) {
    WeightHistory hist(static_cast<std::size_t>(j));
    for (long i = 0; i < j; ++i) hist.push(out.states[static_cast<std::size_t>(i)], t0 + static_cast<double>(i) * h);
    auto record = [&](double t, const Eigen::VectorXd& w, double res) {
      out.states.push_back(w);
      if (ctx.observer) ctx.observer(t, w, res);
    };
    LoopResult lr = march(bdf_coefficients(j), ctx.problem, ctx.basis, ctx.grid, h, std::move(hist),
                          n_out - n_start, ctx.rank_tol, record);
    out.solves += lr.solves;
    append(out.residuals, lr.residuals);
  }
  return out;
}

}  // namespace

LoopResult march(const Scheme& scheme, const ProblemSpec& problem, const ElmBasis& basis,
                 const CollocationGrid& grid, double dt, WeightHistory start, long n_steps,
                 double rank_tol, const StepObserver& observer) {
  if (n_steps < 0) throw std::invalid_argument("march: negative step count");
  if (!start.full()) throw std::invalid_argument("march: history underfilled");
  LoopResult out{std::move(start), 0, {}};
  if (n_steps == 0) return out;

  const StepAssembler assembler(scheme, dt, basis, grid, problem);
  const MinNormSolver solver(assembler.matrix(), rank_tol);
  const double origin = out.history.time(0);
  const auto offset = static_cast<double>(out.history.size() - 1);
  out.residuals.reserve(static_cast<std::size_t>(n_steps));
  for (long n = 1; n <= n_steps; ++n) {
    const double t_new = origin + (offset + static_cast<double>(n)) * dt;
    LsSolution sol = solver.solve(assembler.rhs(out.history, t_new));
    ++out.solves;
    out.residuals.push_back(sol.residual_norm);
    if (observer) observer(t_new, sol.weights, sol.residual_norm);
    out.history.push(std::move(sol.weights), t_new);
  }
  return out;
}

StartResult starting_procedure(int k, int m, double dt, const ProblemSpec& problem,
                               const ElmBasis& basis, const CollocationGrid& grid,
                               const Eigen::VectorXd& w0, double rank_tol,
                               const StepObserver& observer) {
  if (k < 2) throw std::invalid_argument("starting procedure: k must be >= 2");
  if (m < 1) throw std::invalid_argument("starting procedure: m must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("starting procedure: dt must be positive");
  const MarchContext ctx{problem, basis, grid, rank_tol, m, observer};
  Trajectory sub = bdf_trajectory(k - 1, dt / m, static_cast<long>(k - 1) * m, problem.t0, w0, ctx);
  StartResult out{WeightHistory(static_cast<std::size_t>(k)), sub.solves};
  for (int i = 0; i < k; ++i)
    out.history.push(sub.states[static_cast<std::size_t>(i * m)], problem.t0 + i * dt);
  return out;
}

long step_total(double t0, double t_final, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double span = t_final - t0;
  if (span < 0.0) throw std::invalid_argument("final time precedes the initial time");
  const double ratio = span / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-10 * std::max(1.0, ratio))
    throw std::invalid_argument("time horizon is not an integer multiple of dt");
  return static_cast<long>(n);
}

LoopResult run_time_loop(const Scheme& scheme, const ProblemSpec& problem, const ElmBasis& basis,
                         const CollocationGrid& grid, double dt, double t_final,
                         const Eigen::VectorXd& w0, const MarchOptions& options,
                         const StepObserver& observer) {
  const long n_steps = step_total(problem.t0, t_final, dt);
  const int k = step_count(scheme);

  if (std::holds_alternative<ThetaScheme>(scheme)) {
    WeightHistory start(1);
    start.push(w0, problem.t0);
    return march(scheme, problem, basis, grid, dt, std::move(start), n_steps, options.rank_tol,
                 observer);
  }
  if (options.m_start < 1) throw std::invalid_argument("starting procedure: m must be >= 1");

  const MarchContext ctx{problem, basis, grid, options.rank_tol, options.m_start, observer};
  Trajectory traj = bdf_trajectory(k, dt, n_steps, problem.t0, w0, ctx);
  // Fewer steps than the history depth: keep what exists.
  const long total = static_cast<long>(traj.states.size());
  const long keep = std::min<long>(k, total);
  LoopResult out{WeightHistory(static_cast<std::size_t>(keep)), traj.solves, std::move(traj.residuals)};
  for (long i = total - keep; i < total; ++i)
    out.history.push(std::move(traj.states[static_cast<std::size_t>(i)]), problem.t0 + static_cast<double>(i) * dt);
  return out;
}

}  // namespace elmpde
