#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privshade/raster.hpp"
#include "privshade/segment.hpp"

namespace privshade {

enum class MaskKind { area, line };

/// An n x n keep tile. Area masks keep only the center pixel; line masks
/// keep a 3-px-wide center cross (full band of rows and columns), which
/// guarantees every thin mark keeps a dash within each tile regardless of
/// its position or orientation.
class MaskPattern {
 public:
  MaskPattern() = default;

  static MaskPattern area(int n);
  static MaskPattern line(int n);

  int size() const noexcept { return n_; }
  MaskKind kind() const noexcept { return kind_; }

  bool keep(int tx, int ty) const { return keep_[static_cast<size_t>(ty) * n_ + tx] != 0; }

  /// Tiling predicate anchored at the image origin.
  bool keeps_pixel(int x, int y) const {
    return keep(x % n_, y % n_);
  }

  int kept_count() const noexcept;

 private:
  int n_ = 1;
  MaskKind kind_ = MaskKind::area;
  std::vector<uint8_t> keep_;
};

/// Rejects even or non-positive n with Errc::invalid_mask_size.
MaskPattern make_area_mask(int n);
MaskPattern make_line_mask(int n);

/// Mask areas the calibration studies actually exercised.
bool in_tested_range(MaskKind kind, int n) noexcept;

struct TextMaskTable {
  double thin_max_width = 2.0;
  double medium_max_width = 4.0;
  int thin_n = 9;
  int medium_n = 13;
  int thick_n = 17;
};

/// Line mask sized from the measured text stroke width. Width < 1 raises
/// Errc::invalid_width.
MaskPattern adaptive_text_mask(double stroke_width, const TextMaskTable& table = {});

/// One pattern per non-background label; text defaults to per-component
/// adaptive sizing via `text_table` and falls back to `text` when
/// adaptive_text is false.
struct MaskPlan {
  MaskPattern area_mark;
  MaskPattern line_mark;
  MaskPattern area_border;
  MaskPattern text;
  bool adaptive_text = true;
  TextMaskTable text_table;
};

std::string mask_plan_to_json(const MaskPlan& plan);

/// Parses {"area_mark":{"kind":"area","n":13},...,"text":"adaptive"}.
/// A missing label raises Errc::incomplete_plan.
MaskPlan mask_plan_from_json(const std::string& json_text);

/// Keep-or-background per tile over every labeled mark pixel; background
/// pixels are bit-identical to the input.
RasterImage apply_masking(const RasterImage& img, const MarkMap& marks, const MaskPlan& plan,
                          Rgb8 background);

/// Mark pixels that survive `plan`'s tiling.
BinaryMask retained_mask(const MarkMap& marks, const MaskPlan& plan);

/// Copy of `marks` with non-retained pixels relabeled background, so the
/// contrast stage only touches surviving pixels.
MarkMap masked_markmap(const MarkMap& marks, const MaskPlan& plan);

}  // namespace privshade
