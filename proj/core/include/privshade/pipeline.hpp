#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privshade/contrast.hpp"
#include "privshade/mask.hpp"
#include "privshade/perception.hpp"
#include "privshade/preset.hpp"
#include "privshade/raster.hpp"
#include "privshade/segment.hpp"
#include "privshade/spectral.hpp"

namespace privshade {

enum class Granularity { coarse, fine };

const char* granularity_name(Granularity g) noexcept;

struct PipelineOptions {
  Granularity granularity = Granularity::fine;
  SegmentConfig segment;
  CsfModel csf;
  PerceptionOptions perception;
  double ppi = 394.6;
  std::vector<double> report_distances_cm = {30.0, 60.0, 90.0};
  std::optional<TextAnnotation> text;
};

struct LabelStats {
  MarkLabel label = MarkLabel::background;
  long pixels = 0;
  long retained = 0;
};

struct TransformReport {
  std::string input_path;
  std::string output_path;
  ChartPreset preset;
  Granularity granularity = Granularity::fine;
  Rgb8 background;
  double background_lightness = 100.0;
  std::vector<LabelStats> labels;
  long clamped_pixels = 0;
  FrequencyStats before;
  FrequencyStats after;
  std::vector<VisibilityReport> visibility;
};

/// Segmentation -> mark classification -> per-label mask plan -> tiled
/// masking -> contrast reduction, with a frequency/visibility report.
/// An image with no marks raises Errc::no_marks.
std::pair<RasterImage, TransformReport> transform(const RasterImage& img,
                                                  const ChartPreset& preset,
                                                  const PipelineOptions& options = {});

/// The plan `transform` derives from a preset: coarse mode tiles the area
/// mask over every label, fine mode applies line masks to lines, borders
/// and adaptively sized ones to text.
MaskPlan plan_for_preset(const ChartPreset& preset, Granularity granularity);

struct BatchItem {
  std::string input_path;
  std::string output_path;
};

/// Processes files on up to `threads` workers; reports come back in input
/// order and outputs are independent of the worker count.
std::vector<TransformReport> transform_files(const std::vector<BatchItem>& items,
                                             const ChartPreset& preset,
                                             const PipelineOptions& options, int threads);

}  // namespace privshade
