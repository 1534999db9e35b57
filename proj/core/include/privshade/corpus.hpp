#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "privshade/preset.hpp"
#include "privshade/raster.hpp"
#include "privshade/segment.hpp"

namespace privshade {

/// Deterministic chart rendering knobs. All rasterization is integer or
/// fixed arithmetic so the same spec and seed give identical bytes on any
/// platform.
struct ChartStyle {
  int canvas_width = 1080;
  int canvas_height = 1080;
  Rgb8 background = {250, 250, 250};
  Rgb8 ink = {30, 30, 30};  // axes and text
  int axis_width = 2;
  int font_scale = 2;
  int bar_count = 5;
  int pie_slices = 4;
  int scatter_points = 12;
  int dot_radius = 6;
  int line_points = 8;
  int line_width = 3;
};

struct ChartSpec {
  ChartType type = ChartType::bar;
  ChartStyle style;
  /// Explicit data values; empty means derive them from the seed.
  /// Values must lie in (0, 1] for bar/line/scatter and be positive
  /// weights for pie; anything else raises Errc::range_error.
  std::vector<double> values;
};

struct GtComponent {
  MarkLabel label = MarkLabel::background;
  TextBox bbox;
  long pixel_count = 0;
  double stroke_width = 0.0;
};

struct GroundTruth {
  int width = 0;
  int height = 0;
  std::vector<MarkLabel> labels;
  std::vector<TextBox> text_boxes;
  std::vector<GtComponent> components;
  Rgb8 background;

  MarkLabel label(int x, int y) const {
    return labels[static_cast<size_t>(y) * width + x];
  }
  long count(MarkLabel l) const;
};

std::pair<RasterImage, GroundTruth> generate(const ChartSpec& spec, uint64_t seed);

/// Mark fill colors, distinct hues near L* 50.
const std::vector<Rgb8>& corpus_palette();

std::string ground_truth_to_json(const GroundTruth& gt);

/// Label image with one flat color per mark class, for visual inspection.
RasterImage ground_truth_to_label_image(const GroundTruth& gt);

}  // namespace privshade
