#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "elmpde/solver.hpp"
#include "elmpde/study.hpp"

namespace elmpde {

/// Column order of every CSV this project writes (schema version 1).
inline constexpr const char* kCsvHeader = "scheme,N,dt,Nt,linf_error,walltime_s,seed,observed_order";

struct CsvOptions {
  bool timestamp = true;  // leading "# generated ..." comment line
  bool timing = true;     // false leaves walltime_s empty so output is byte-stable
};

void write_csv(std::ostream& os, const std::vector<StudyRow>& rows, const CsvOptions& options = {});

/// Inverse of write_csv; comment lines are skipped.
std::vector<StudyRow> read_csv(std::istream& is);

StudyRow row_from_report(const SolveReport& report);

/// Single-run record with residual history and basis digest.
std::string report_json(const SolveReport& report, bool timing = true);

enum class PlotAxis { nt, neurons };

/// Log-log error plot, one polyline per series. Series are keyed by scheme
/// (and N when several appear) for PlotAxis::nt, by (scheme, dt) for
/// PlotAxis::neurons. Depends only on the rows passed in.
std::string render_svg(const std::vector<StudyRow>& rows, const std::string& title, PlotAxis axis);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace elmpde
