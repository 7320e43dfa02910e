#include "elmpde/presets.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace elmpde {

ExperimentPreset parse_preset(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  ExperimentPreset p;
  p.name = j.at("name").get<std::string>();
  p.description = j.value("description", "");
  for (const auto& jp : j.at("panels")) {
    PresetPanel panel;
    panel.name = jp.at("name").get<std::string>();
    panel.problem = jp.at("problem").get<std::string>();
    panel.schemes = jp.at("schemes").get<std::vector<std::string>>();
    panel.neurons = jp.at("neurons").get<std::vector<std::size_t>>();
    panel.dts = jp.at("dt").get<std::vector<double>>();
    const std::string sweep = jp.value("sweep", "dt");
    if (sweep == "dt")
      panel.axis = PlotAxis::nt;
    else if (sweep == "neurons")
      panel.axis = PlotAxis::neurons;
    else
      throw std::invalid_argument("preset panel '" + panel.name + "': sweep must be 'dt' or 'neurons'");
    if (panel.schemes.empty() || panel.neurons.empty() || panel.dts.empty())
      throw std::invalid_argument("preset panel '" + panel.name + "' has an empty sweep");
    p.panels.push_back(std::move(panel));
  }
  if (p.panels.empty()) throw std::invalid_argument("preset '" + p.name + "' has no panels");
  return p;
}

ExperimentPreset load_preset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open preset file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_preset(ss.str());
}

ExperimentPreset load_preset(const std::string& name, const std::filesystem::path& dir) {
  return load_preset_file(dir / (name + ".json"));
}

}  // namespace elmpde
