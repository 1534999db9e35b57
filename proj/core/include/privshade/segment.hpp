#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "privshade/raster.hpp"

namespace privshade {

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool at(int x, int y) const { return cells_[static_cast<size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) { cells_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }

  /// False for out-of-bounds coordinates.
  bool test(int x, int y) const noexcept {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
    return cells_[static_cast<size_t>(y) * width_ + x] != 0;
  }

  long count() const noexcept;
  const std::vector<uint8_t>& cells() const noexcept { return cells_; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> cells_;
};

enum class MarkLabel : uint8_t {
  background = 0,
  area_mark = 1,
  area_border = 2,
  line_mark = 3,
  text = 4,
};

const char* mark_label_name(MarkLabel label) noexcept;

struct TextBox {
  int x = 0, y = 0, w = 0, h = 0;
  bool operator==(const TextBox&) const = default;
};

enum class TextSource { external, heuristic };

struct TextAnnotation {
  std::vector<TextBox> boxes;
  TextSource source = TextSource::heuristic;
};

struct ComponentInfo {
  int id = -1;
  MarkLabel label = MarkLabel::background;
  int min_x = 0, min_y = 0, max_x = -1, max_y = -1;
  long pixel_count = 0;
  /// Skeleton-median stroke width for line/text components; for area
  /// components this is the cheap 2*max(EDT)-1 thickness estimate.
  double stroke_width = 0.0;
};

/// Per-pixel mark labels plus the component inventory. Labels partition
/// the grid; component_id is -1 on background pixels.
class MarkMap {
 public:
  MarkMap() = default;
  MarkMap(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  MarkLabel label(int x, int y) const { return labels_[static_cast<size_t>(y) * width_ + x]; }
  void set_label(int x, int y, MarkLabel l) { labels_[static_cast<size_t>(y) * width_ + x] = l; }

  int component_id(int x, int y) const { return ids_[static_cast<size_t>(y) * width_ + x]; }
  void set_component_id(int x, int y, int id) { ids_[static_cast<size_t>(y) * width_ + x] = id; }

  std::vector<ComponentInfo>& components() noexcept { return components_; }
  const std::vector<ComponentInfo>& components() const noexcept { return components_; }

  std::array<long, 5> label_counts() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<MarkLabel> labels_;
  std::vector<int32_t> ids_;
  std::vector<ComponentInfo> components_;
};

struct SegmentConfig {
  /// Stroke-width boundary between line-based and area-based marks (px).
  double line_width_threshold = 8.0;
  /// Inner-border thickness carved out of area marks (px).
  int border_thickness = 2;
  /// Text heuristic: maximum component pixel count.
  long text_max_component_area = 400;
  /// Text heuristic: vertical center alignment tolerance, fraction of box height.
  double text_align_tolerance = 0.5;
  /// Text heuristic: maximum horizontal gap between glyphs, fraction of box height.
  double text_gap_factor = 1.0;
  /// Max per-channel color difference for two foreground pixels to share a component.
  int color_tolerance = 24;
};

std::vector<uint8_t> to_gray(const RasterImage& img);

/// Minimum-cross-entropy threshold over a 256-bin histogram. Returns the
/// smallest t minimizing the criterion with classes [0, t) and [t, 255];
/// equals the exhaustive scan by construction. A histogram with fewer than
/// two occupied bins raises Errc::degenerate_histogram.
int li_threshold(const std::array<int64_t, 256>& histogram);
int li_threshold(const std::vector<uint8_t>& gray);

/// Li-threshold the luminance; foreground is the side away from the
/// modal border-row gray value.
BinaryMask foreground_mask(const RasterImage& img);

/// Zhang-Suen two-subiteration thinning. Idempotent, never adds pixels.
BinaryMask skeletonize(const BinaryMask& mask);

/// Exact Euclidean distance to the nearest false cell; out-of-image counts
/// as false. Entries on false cells are 0.
std::vector<double> distance_transform(const BinaryMask& mask);

/// 2 * median(EDT at skeleton pixels) - 1. Raises Errc::undefined_width
/// when the skeleton (or component) is empty.
double stroke_width(const BinaryMask& component, const BinaryMask& skeleton);
double stroke_width(const BinaryMask& component);

/// 8-connected labeling; with `img` given, adjacency additionally requires
/// max per-channel difference <= color_tolerance. Returns per-pixel ids
/// (-1 outside the mask) and sets component_count.
std::vector<int32_t> label_components(const BinaryMask& mask, int* component_count,
                                      const RasterImage* img = nullptr,
                                      int color_tolerance = 0);

int count_components(const BinaryMask& mask);

/// Pixels of `component` within `thickness` (Chebyshev) of its complement;
/// out-of-image counts as complement.
BinaryMask inner_border(const BinaryMask& component, int thickness);

/// Cluster small thin components into horizontally aligned text boxes.
TextAnnotation detect_text_heuristic(const RasterImage& img, const BinaryMask& fg,
                                     const SegmentConfig& config = {});

/// Assign every foreground pixel one of {area_mark, area_border, line_mark,
/// text}: annotation boxes win, then stroke width <= threshold selects line
/// marks, and area components donate their inner boundary as border.
MarkMap classify_marks(const RasterImage& img, const BinaryMask& fg,
                       const TextAnnotation& text, const SegmentConfig& config = {});

/// Sidecar JSON: {"boxes":[{"x":..,"y":..,"w":..,"h":..}]}.
TextAnnotation text_annotation_from_json(const std::string& json_text, int image_width,
                                         int image_height);
std::string text_annotation_to_json(const TextAnnotation& annotation);

}  // namespace privshade
