#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elmpde/pde_problems.hpp"
#include "elmpde/solver.hpp"

namespace elmpde {

struct StudyRow {
  std::string scheme;
  std::size_t n_neurons = 0;
  double dt = 0.0;
  long nt = 0;
  std::optional<double> linf_error;
  double walltime_s = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> observed_order;  // against the previous row of the same series
};

struct StudySpec {
  std::vector<std::string> schemes;
  std::vector<std::size_t> neurons;
  std::vector<double> dts;
  std::uint64_t seed = kDefaultSeed;
  int m_start = 8;
  double rank_tol = kDefaultRankTol;
  std::size_t n_error_points = 5000;
  GridConvention grid = GridConvention::total;
  unsigned jobs = 0;  // 0: hardware concurrency
};

/// Runs every (scheme, N, dt) combination; rows ordered by scheme, then N,
/// then dt as given. Runs execute in parallel, results are merged in order.
std::vector<StudyRow> convergence_study(const ProblemSpec& problem, const StudySpec& spec);

/// log(e_prev / e) / log(dt_prev / dt) between consecutive rows of one
/// (scheme, N) series, i.e. log2 of the error ratio for dyadic dt refinement.
void fill_observed_orders(std::vector<StudyRow>& rows);

double median(std::vector<double> values);

}  // namespace elmpde
