// Command-line front end: single solves, convergence studies, figure presets
// and the fast self-check suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elmpde/pde_problems.hpp"
#include "elmpde/presets.hpp"
#include "elmpde/report_io.hpp"
#include "elmpde/solver.hpp"
#include "elmpde/study.hpp"
#include "elmpde/verify.hpp"

#ifndef ELMPDE_PRESET_DIR
#define ELMPDE_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace elmpde;

namespace {

struct ProblemArgs {
  std::string name = "a";
  std::optional<double> gamma;
  std::optional<int> n_terms;

  std::string catalog_name() const {
    if (name.find('(') != std::string::npos) {
      if (gamma || n_terms) throw std::invalid_argument("give problem arguments either inline or by flag, not both");
      return name;
    }
    if (gamma) {
      if (name != "a") throw std::invalid_argument("--gamma applies to problem a only");
      return "a(gamma=" + format_double(*gamma) + ")";
    }
    if (n_terms) {
      if (name != "b") throw std::invalid_argument("--n-terms applies to problem b only");
      return "b(n_terms=" + std::to_string(*n_terms) + ")";
    }
    return name;
  }
};

struct CommonArgs {
  std::uint64_t seed = kDefaultSeed;
  int m_start = 8;
  double rank_tol = kDefaultRankTol;
  std::size_t error_points = 5000;
  std::string grid = "total";
  bool no_timestamp = false;

  GridConvention convention() const {
    return grid == "interior" ? GridConvention::interior : GridConvention::total;
  }
};

void add_problem_flags(CLI::App* cmd, ProblemArgs& p) {
  cmd->add_option("--problem", p.name, "Problem: a, b, c or a catalog name such as a(gamma=10)");
  cmd->add_option("--gamma", p.gamma, "Frequency parameter of problem a");
  cmd->add_option("--n-terms", p.n_terms, "Series terms of the exact solution of problem b");
}

void add_common_flags(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--seed", c.seed, "Seed of the random internal parameters");
  cmd->add_option("--m-start", c.m_start, "Step reduction factor of the BDF starting procedure")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rank-tol", c.rank_tol, "Relative rank tolerance of the least-squares solves")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--error-points", c.error_points, "Equispaced points for the final-time max error");
  cmd->add_option("--grid", c.grid, "Row convention: 'total' (M = N/2 rows) or 'interior' (M interior points)")
      ->check(CLI::IsMember({"total", "interior"}));
  cmd->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp line and timings (byte-stable output)");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_solve(const ProblemArgs& pa, const CommonArgs& ca, const std::string& scheme, std::size_t neurons,
              double dt, std::optional<double> t_final, const std::string& format, const std::string& out) {
  const ProblemSpec problem = problem_by_name(pa.catalog_name());
  SolveConfig cfg;
  cfg.scheme_id = scheme;
  cfg.n_neurons = neurons;
  cfg.dt = dt;
  cfg.seed = ca.seed;
  cfg.m_start = ca.m_start;
  cfg.rank_tol = ca.rank_tol;
  cfg.n_error_points = ca.error_points;
  cfg.t_final = t_final;
  cfg.grid = ca.convention();
  const SolveReport rep = solve(problem, cfg);

  std::ostringstream os;
  if (format == "json") {
    os << report_json(rep, !ca.no_timestamp) << '\n';
  } else {
    write_csv(os, {row_from_report(rep)}, {!ca.no_timestamp, !ca.no_timestamp});
  }
  if (out.empty())
    std::cout << os.str();
  else
    write_text(out, os.str());
  return 0;
}

struct StudyArgs {
  std::string preset;
  std::string preset_file;
  std::string preset_dir = ELMPDE_PRESET_DIR;
  std::vector<std::string> schemes;
  std::vector<std::size_t> neurons;
  std::vector<double> dts;
  std::string out_dir = ".";
  std::string name = "study";
  bool plot = false;
  bool to_stdout = false;
  unsigned jobs = 0;
};

int cmd_study(const ProblemArgs& pa, const CommonArgs& ca, const StudyArgs& sa) {
  ExperimentPreset preset;
  if (!sa.preset.empty() || !sa.preset_file.empty()) {
    if (!sa.schemes.empty() || !sa.neurons.empty() || !sa.dts.empty())
      throw std::invalid_argument("explicit sweep lists cannot be combined with a preset");
    preset = !sa.preset_file.empty() ? load_preset_file(sa.preset_file) : load_preset(sa.preset, sa.preset_dir);
  } else {
    if (sa.schemes.empty()) throw std::invalid_argument("study: --scheme is required without a preset");
    if (sa.dts.empty()) throw std::invalid_argument("study: --dt-list is required without a preset");
    PresetPanel panel;
    panel.name = "main";
    panel.problem = pa.catalog_name();
    panel.schemes = sa.schemes;
    panel.neurons = sa.neurons.empty() ? std::vector<std::size_t>{40} : sa.neurons;
    panel.dts = sa.dts;
    panel.axis = panel.neurons.size() > 1 && panel.dts.size() <= panel.neurons.size() ? PlotAxis::neurons
                                                                                      : PlotAxis::nt;
    preset.name = sa.name;
    preset.panels.push_back(panel);
  }

  for (const auto& panel : preset.panels) {
    const ProblemSpec problem = problem_by_name(panel.problem);
    StudySpec spec;
    spec.schemes = panel.schemes;
    spec.neurons = panel.neurons;
    spec.dts = panel.dts;
    spec.seed = ca.seed;
    spec.m_start = ca.m_start;
    spec.rank_tol = ca.rank_tol;
    spec.n_error_points = ca.error_points;
    spec.grid = ca.convention();
    spec.jobs = sa.jobs;
    const auto rows = convergence_study(problem, spec);

    std::ostringstream csv;
    write_csv(csv, rows, {!ca.no_timestamp, !ca.no_timestamp});
    const std::string stem = preset.name + "_" + panel.name;
    if (sa.to_stdout) {
      std::cout << csv.str();
    } else {
      const fs::path path = fs::path(sa.out_dir) / (stem + ".csv");
      write_text(path, csv.str());
      std::cerr << "wrote " << path.string() << '\n';
    }
    if (sa.plot) {
      // Rendered from the CSV text so the figure is a function of the table.
      std::istringstream in(csv.str());
      const fs::path path = fs::path(sa.out_dir) / (stem + ".svg");
      write_text(path, render_svg(read_csv(in), panel.problem + " " + panel.name, panel.axis));
      std::cerr << "wrote " << path.string() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ELM collocation solver for 1D linear parabolic problems"};
  app.require_subcommand(1);

  ProblemArgs pa;
  CommonArgs ca;

  auto* solve_cmd = app.add_subcommand("solve", "Run one solve and print its report");
  std::string scheme = "BDF2", format = "csv", out;
  std::size_t neurons = 40;
  double dt = 0.1;
  std::optional<double> t_final;
  add_problem_flags(solve_cmd, pa);
  solve_cmd->add_option("--scheme", scheme, "BE, TR, FE, theta(x) or BDF1..BDF6");
  solve_cmd->add_option("--neurons", neurons, "Number of neurons N");
  solve_cmd->add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tfinal", t_final, "Override the problem's final time");
  solve_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  solve_cmd->add_option("--out", out, "Output file (default: stdout)");
  add_common_flags(solve_cmd, ca);

  auto* study_cmd = app.add_subcommand("study", "Convergence study from a preset or explicit sweep lists");
  StudyArgs sa;
  add_problem_flags(study_cmd, pa);
  study_cmd->add_option("--preset", sa.preset, "Preset name: fig1, fig2, fig3, fig4");
  study_cmd->add_option("--preset-file", sa.preset_file, "Path to a preset JSON file");
  study_cmd->add_option("--preset-dir", sa.preset_dir, "Directory holding <preset>.json files");
  study_cmd->add_option("--scheme", sa.schemes, "Schemes of an explicit sweep")->delimiter(',');
  study_cmd->add_option("--neurons", sa.neurons, "Neuron counts of an explicit sweep")->delimiter(',');
  study_cmd->add_option("--dt-list", sa.dts, "Time steps of an explicit sweep")->delimiter(',');
  study_cmd->add_option("--out-dir", sa.out_dir, "Directory for <name>_<panel>.csv/.svg");
  study_cmd->add_option("--name", sa.name, "File stem of an explicit sweep");
  study_cmd->add_flag("--plot", sa.plot, "Also write an SVG log-log plot per panel");
  study_cmd->add_flag("--stdout", sa.to_stdout, "Print CSV to stdout instead of writing files");
  study_cmd->add_option("--jobs", sa.jobs, "Maximum concurrent runs (default: all cores)");
  add_common_flags(study_cmd, ca);

  auto* verify_cmd = app.add_subcommand("verify", "Run the fast invariant suite");
  std::string group;
  bool mutate = false;
  verify_cmd->add_option("--group", group, "Run one group only")->check(CLI::IsMember(verify_groups()));
  verify_cmd->add_flag("--mutate-bdf-table", mutate,
                       "Corrupt one BDF coefficient first; the bdf-order group must then fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(pa, ca, scheme, neurons, dt, t_final, format, out);
    if (study_cmd->parsed()) return cmd_study(pa, ca, sa);
    if (verify_cmd->parsed()) {
      VerifyOptions opts;
      if (!group.empty()) opts.group = group;
      opts.corrupt_bdf_table = mutate;
      return run_verify(opts, std::cout) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
