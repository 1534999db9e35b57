#pragma once

#include <vector>

#include "privshade/mask.hpp"
#include "privshade/preset.hpp"
#include "privshade/raster.hpp"
#include "privshade/segment.hpp"

namespace privshade {

struct ViewingGeometry {
  double distance_cm = 30.0;
  double ppi = 394.6;
};

/// Band-pass contrast sensitivity S(f) = scale * (offset + b*f) * exp(-(b*f)^exponent),
/// f in cycles/degree. Defaults are calibrated so the four shipped chart
/// presets are predicted visible at 30 cm and invisible at 90 cm on a
/// 394.6 ppi screen.
struct CsfModel {
  double scale = 413.0;
  double offset = 0.01;
  double frequency_scale = 0.25;
  double exponent = 1.1;

  double sensitivity(double frequency_cpd) const noexcept;
  double threshold_contrast(double frequency_cpd) const noexcept;
  /// Location of the single interior maximum, found numerically.
  double peak_frequency() const noexcept;
};

/// Cycles per degree of a grating with period mask_n device pixels seen at
/// the given geometry: theta = 2*atan(period / 2d), f = 1/theta(deg).
double spatial_frequency(int mask_n, const ViewingGeometry& geom);

/// (Ymax - Ymin) / (Ymax + Ymin) over relative luminances of two L* values.
double michelson_contrast(double mark_lightness, double background_lightness);

struct PerceptionOptions {
  /// Scale the mark/background contrast by the mask pattern's first
  /// harmonic amplitude (sparser tiles carry less fundamental energy).
  bool pattern_contrast_correction = true;
  double background_lightness = 100.0;
  /// Stroke width assumed for the text label when no image is at hand.
  double assumed_text_stroke_width = 2.0;
  TextMaskTable text_table;
};

/// Michelson contrast of the mask pattern's fundamental grating for marks
/// at mark_lightness tiled over background_lightness. With correction off
/// this is the plain mark/background Michelson contrast.
double effective_pattern_contrast(MaskKind kind, int n, double mark_lightness,
                                  double background_lightness, bool correction);

struct LabelVisibility {
  MarkLabel label = MarkLabel::area_mark;
  MaskKind kind = MaskKind::area;
  int mask_n = 1;
  double frequency_cpd = 0.0;
  double contrast = 0.0;
  double threshold = 0.0;
  double margin = 0.0;  // contrast / threshold
  bool visible = false;
};

struct VisibilityReport {
  double distance_cm = 0.0;
  double ppi = 0.0;
  std::vector<LabelVisibility> labels;
  /// Verdict & margin of the preset's dominant mark label (area marks for
  /// bar/pie/scatter, line marks for line charts).
  bool visible = false;
  double margin = 0.0;
};

VisibilityReport predict_visibility(const ChartPreset& preset, const ViewingGeometry& geom,
                                    const CsfModel& csf = {},
                                    const PerceptionOptions& options = {});

/// Percept at distance: frequencies above the CSF peak are attenuated by
/// S(f)/S(peak) in all three Lab channels; everything at or below the peak
/// passes through.
RasterImage simulate_view(const RasterImage& img, const ViewingGeometry& geom,
                          const CsfModel& csf = {});

}  // namespace privshade
