#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elmpde/report_io.hpp"

namespace elmpde {

/// One panel of a figure experiment: a problem and a sweep over dt or N.
struct PresetPanel {
  std::string name;
  std::string problem;  // catalog name, e.g. "a(gamma=3)"
  std::vector<std::string> schemes;
  std::vector<std::size_t> neurons;
  std::vector<double> dts;
  PlotAxis axis = PlotAxis::nt;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  std::vector<PresetPanel> panels;
};

ExperimentPreset parse_preset(const std::string& json_text);
ExperimentPreset load_preset_file(const std::filesystem::path& path);

/// <dir>/<name>.json
ExperimentPreset load_preset(const std::string& name, const std::filesystem::path& dir);

}  // namespace elmpde
