#include "elmpde/study.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace elmpde {

std::vector<StudyRow> convergence_study(const ProblemSpec& problem, const StudySpec& spec) {
  if (spec.schemes.empty() || spec.neurons.empty() || spec.dts.empty())
    throw std::invalid_argument("convergence study: empty sweep");
  for (const auto& s : spec.schemes) parse_scheme(s);

  std::vector<SolveConfig> configs;
  for (const auto& s : spec.schemes)
    for (std::size_t n : spec.neurons)
      for (double dt : spec.dts) {
        SolveConfig c;
        c.scheme_id = s;
        c.n_neurons = n;
        c.dt = dt;
        c.seed = spec.seed;
        c.m_start = spec.m_start;
        c.rank_tol = spec.rank_tol;
        c.n_error_points = spec.n_error_points;
        c.grid = spec.grid;
        configs.push_back(c);
      }

  const unsigned jobs = spec.jobs != 0 ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<StudyRow> rows(configs.size());
  auto run_one = [&](std::size_t i) {
    const SolveReport rep = solve(problem, configs[i]);
    StudyRow& r = rows[i];
    r.scheme = configs[i].scheme_id;
    r.n_neurons = configs[i].n_neurons;
    r.dt = configs[i].dt;
    r.nt = rep.nt;
    r.linf_error = rep.linf_error;
    r.walltime_s = rep.walltime_s;
    r.seed = configs[i].seed;
  };
  for (std::size_t begin = 0; begin < configs.size(); begin += jobs) {
    const std::size_t end = std::min(configs.size(), begin + jobs);
    std::vector<std::future<void>> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, run_one, i));
    for (auto& f : batch) f.get();
  }
  fill_observed_orders(rows);
  return rows;
}

void fill_observed_orders(std::vector<StudyRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].observed_order.reset();
    if (i == 0) continue;
    const StudyRow& prev = rows[i - 1];
    StudyRow& cur = rows[i];
    if (prev.scheme != cur.scheme || prev.n_neurons != cur.n_neurons || prev.dt == cur.dt) continue;
    if (!prev.linf_error || !cur.linf_error || *prev.linf_error <= 0.0 || *cur.linf_error <= 0.0) continue;
    cur.observed_order = std::log(*prev.linf_error / *cur.linf_error) / std::log(prev.dt / cur.dt);
  }
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace elmpde
