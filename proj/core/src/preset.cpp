#include "privshade/preset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "privshade/error.hpp"
#include "privshade/mask.hpp"

namespace privshade {

const char* chart_type_name(ChartType type) noexcept {
  switch (type) {
    case ChartType::bar: return "bar";
    case ChartType::pie: return "pie";
    case ChartType::scatter: return "scatter";
    case ChartType::line: return "line";
  }
  return "unknown";
}

std::vector<std::string> chart_type_names() { return {"bar", "pie", "scatter", "line"}; }

ChartType chart_type_from_name(const std::string& name) {
  if (name == "bar") return ChartType::bar;
  if (name == "pie") return ChartType::pie;
  if (name == "scatter") return ChartType::scatter;
  if (name == "line") return ChartType::line;
  raise(Errc::invalid_preset,
        "unknown chart type \"" + name + "\"; valid types: bar, pie, scatter, line");
}

std::vector<std::string> preset_names() { return {"bar", "pie", "scatter", "line", "pie-study1"}; }

namespace {

// Headline (mask area, contrast) pairs follow the calibration studies:
// bar (13, 75), scatter (5, 75), line (21, 25), pie (7, 25); pie-study1
// keeps the study-1 selection (7, 75). Secondary mask sizes are tuned so
// axes/borders stay legible at 30 cm and drop out by 90 cm.
ChartPreset builtin(const std::string& name) {
  if (name == "bar") return {"bar", ChartType::bar, 13, 13, 75.0};
  if (name == "scatter") return {"scatter", ChartType::scatter, 5, 13, 75.0};
  if (name == "line") return {"line", ChartType::line, 7, 21, 25.0};
  if (name == "pie") return {"pie", ChartType::pie, 7, 13, 25.0};
  if (name == "pie-study1") return {"pie-study1", ChartType::pie, 7, 13, 75.0};
  raise(Errc::invalid_preset, "unknown preset \"" + name +
                                  "\"; valid presets: bar, pie, scatter, line, pie-study1");
}

void check_mask_size(const char* field, int n) {
  if (n < 1 || n % 2 == 0)
    raise(Errc::invalid_preset, std::string(field) + " must be a positive odd integer (parity), got " +
                                    std::to_string(n));
}

}  // namespace

std::vector<std::string> validate_preset(const ChartPreset& preset) {
  check_mask_size("areaMaskN", preset.area_mask_n);
  check_mask_size("lineMaskN", preset.line_mask_n);
  if (!(preset.contrast >= 0.0 && preset.contrast <= 100.0))
    raise(Errc::invalid_preset,
          "contrast must lie in [0, 100], got " + std::to_string(preset.contrast));

  std::vector<std::string> warnings;
  if (!in_tested_range(MaskKind::area, preset.area_mask_n))
    warnings.push_back("areaMaskN " + std::to_string(preset.area_mask_n) +
                       " is outside the calibrated range {1,3,...,13}");
  if (!in_tested_range(MaskKind::line, preset.line_mask_n))
    warnings.push_back("lineMaskN " + std::to_string(preset.line_mask_n) +
                       " is outside the calibrated range {1,5,...,25}");
  return warnings;
}

ChartPreset preset_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::invalid_preset, std::string("preset JSON parse error: ") + e.what());
  }
  if (!j.is_object()) raise(Errc::invalid_preset, "preset JSON must be an object");

  ChartPreset preset = builtin(j.value("chartType", std::string("bar")));
  if (j.contains("name")) preset.name = j["name"].get<std::string>();
  if (j.contains("areaMaskN")) preset.area_mask_n = j["areaMaskN"].get<int>();
  if (j.contains("lineMaskN")) preset.line_mask_n = j["lineMaskN"].get<int>();
  if (j.contains("contrast")) preset.contrast = j["contrast"].get<double>();
  validate_preset(preset);
  return preset;
}

std::string preset_to_json(const ChartPreset& preset) {
  nlohmann::json j{{"name", preset.name},
                   {"chartType", chart_type_name(preset.chart_type)},
                   {"areaMaskN", preset.area_mask_n},
                   {"lineMaskN", preset.line_mask_n},
                   {"contrast", preset.contrast}};
  return j.dump();
}

ChartPreset load_preset(const std::string& name_or_path) {
  for (const std::string& name : preset_names())
    if (name == name_or_path) return builtin(name);

  if (std::filesystem::exists(name_or_path)) {
    std::ifstream in(name_or_path);
    if (!in) raise(Errc::io_error, "cannot open preset file " + name_or_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return preset_from_json(ss.str());
  }
  raise(Errc::invalid_preset, "unknown preset or chart type \"" + name_or_path +
                                  "\"; valid values: bar, pie, scatter, line, pie-study1");
}

}  // namespace privshade
