#include "elmpde/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace elmpde {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<StudyRow>& rows, const CsvOptions& options) {
  if (options.timestamp) os << "# generated " << now_utc() << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.n_neurons << ',' << format_double(r.dt) << ',' << r.nt << ','
       << opt(r.linf_error) << ',' << (options.timing ? format_double(r.walltime_s) : std::string())
       << ',' << r.seed << ',' << opt(r.observed_order) << '\n';
  }
}

std::vector<StudyRow> read_csv(std::istream& is) {
  std::vector<StudyRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("CSV row has " + std::to_string(f.size()) + " fields");
    StudyRow r;
    r.scheme = f[0];
    r.n_neurons = std::stoul(f[1]);
    r.dt = std::stod(f[2]);
    r.nt = std::stol(f[3]);
    r.linf_error = parse_opt(f[4]);
    r.walltime_s = f[5].empty() ? 0.0 : std::stod(f[5]);
    r.seed = std::stoull(f[6]);
    r.observed_order = parse_opt(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

StudyRow row_from_report(const SolveReport& report) {
  StudyRow r;
  r.scheme = report.config.scheme_id;
  r.n_neurons = report.config.n_neurons;
  r.dt = report.config.dt;
  r.nt = report.nt;
  r.linf_error = report.linf_error;
  r.walltime_s = report.walltime_s;
  r.seed = report.config.seed;
  return r;
}

std::string report_json(const SolveReport& report, bool timing) {
  nlohmann::ordered_json j;
  j["problem"] = report.problem_label;
  j["scheme"] = report.config.scheme_id;
  j["N"] = report.config.n_neurons;
  j["dt"] = report.config.dt;
  j["t_final"] = report.t_final;
  j["seed"] = report.config.seed;
  j["m_start"] = report.config.m_start;
  j["rank_tol"] = report.config.rank_tol;
  j["n_error_points"] = report.config.n_error_points;
  j["grid"] = report.config.grid == GridConvention::total ? "total" : "interior";
  j["Nt"] = report.nt;
  j["linf_error"] = report.linf_error ? nlohmann::ordered_json(*report.linf_error) : nlohmann::ordered_json();
  if (timing) j["walltime_s"] = report.walltime_s;
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(report.basis_digest));
  j["basis_digest"] = digest;
  j["max_residual"] = report.residuals.empty()
                          ? 0.0
                          : *std::max_element(report.residuals.begin(), report.residuals.end());
  j["residuals"] = report.residuals;
  j["final_weights"] = std::vector<double>(report.final_weights.data(),
                                           report.final_weights.data() + report.final_weights.size());
  return j.dump(2);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<StudyRow>& rows, const std::string& title, PlotAxis axis) {
  bool many_n = false;
  for (const auto& r : rows) many_n |= r.n_neurons != rows.front().n_neurons;

  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    if (!r.linf_error || !(*r.linf_error > 0.0)) continue;
    std::string key = r.scheme;
    double x = static_cast<double>(r.nt);
    if (axis == PlotAxis::neurons) {
      key += " dt=" + format_double(r.dt);
      x = static_cast<double>(r.n_neurons);
    } else if (many_n) {
      key += " N=" + std::to_string(r.n_neurons);
    }
    auto [it, inserted] = index.emplace(key, series.size());
    if (inserted) series.push_back({key, {}});
    series[it->second].points.emplace_back(x, *r.linf_error);
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  if (series.empty()) xmin = 0, xmax = 1, ymin = -1, ymax = 0;
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (std::log10(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - std::log10(y)) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int xstep = std::max(1, static_cast<int>((xmax - xmin) / 8) + 1);
  for (int e = static_cast<int>(xmin); e <= static_cast<int>(xmax); e += xstep) {
    const double x = px(std::pow(10.0, e));
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << kTop << "\" x2=\"" << fixed(x) << "\" y2=\""
       << kTop + ph << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">1e" << e
       << "</text>\n";
  }
  const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 10) + 1);
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
    const double y = py(std::pow(10.0, e));
    os << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(y) << "\" x2=\"" << kLeft + pw << "\" y2=\""
       << fixed(y) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">1e" << e
       << "</text>\n";
  }
  os << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
     << (axis == PlotAxis::nt ? "Nt (stationary solves)" : "N (neurons)") << "</text>\n";
  os << "<text transform=\"translate(20," << fixed(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">max error at final time</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[s].points) os << fixed(px(x)) << ',' << fixed(py(y)) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : series[s].points)
      os << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(s);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << fixed(ly - 4) << "\" x2=\"" << kLeft + pw + 32
       << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << fixed(ly) << "\">" << escape(series[s].label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace elmpde
