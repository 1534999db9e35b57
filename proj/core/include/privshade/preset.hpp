#pragma once

#include <string>
#include <vector>

namespace privshade {

enum class ChartType { bar, pie, scatter, line };

const char* chart_type_name(ChartType type) noexcept;
ChartType chart_type_from_name(const std::string& name);
std::vector<std::string> chart_type_names();

/// Mask sizes and contrast for one chart family. The headline mask area
/// (the single number the calibration studies report per chart type) is
/// the line mask for line charts and the area mask otherwise.
struct ChartPreset {
  std::string name;
  ChartType chart_type = ChartType::bar;
  int area_mask_n = 13;
  int line_mask_n = 13;
  double contrast = 75.0;

  int headline_mask_n() const noexcept {
    return chart_type == ChartType::line ? line_mask_n : area_mask_n;
  }
};

/// bar, pie, scatter, line, pie-study1.
std::vector<std::string> preset_names();

/// Shipped preset by name, or a JSON preset file when `name_or_path`
/// is not a known name. Unknown names raise Errc::invalid_preset and
/// list the valid chart types.
ChartPreset load_preset(const std::string& name_or_path);

/// {"chartType":"bar","areaMaskN":13,"lineMaskN":13,"contrast":75};
/// all fields except chartType are optional overrides of the shipped
/// preset. Parity and range rules are enforced.
ChartPreset preset_from_json(const std::string& json_text);

std::string preset_to_json(const ChartPreset& preset);

/// Raises Errc::invalid_preset on even/non-positive masks or contrast
/// outside [0, 100]; returns warnings for sizes outside the tested ranges.
std::vector<std::string> validate_preset(const ChartPreset& preset);

}  // namespace privshade
