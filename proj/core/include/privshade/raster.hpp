#pragma once

#include <cstdint>
#include <vector>

namespace privshade {

struct Rgb8 {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb8&) const = default;
};

/// 8-bit RGB pixel grid, row-major. Alpha is composited away on decode.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb8 fill = {255, 255, 255});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  long pixel_count() const noexcept { return static_cast<long>(width_) * height_; }

  Rgb8& at(int x, int y) { return pixels_[static_cast<size_t>(y) * width_ + x]; }
  const Rgb8& at(int x, int y) const { return pixels_[static_cast<size_t>(y) * width_ + x]; }

  std::vector<Rgb8>& pixels() noexcept { return pixels_; }
  const std::vector<Rgb8>& pixels() const noexcept { return pixels_; }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  bool operator==(const RasterImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb8> pixels_;
};

struct Lab {
  double L = 0, a = 0, b = 0;
};

/// Per-pixel CIELAB (D65), L in [0, 100].
class LabImage {
 public:
  LabImage() = default;
  LabImage(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Lab& at(int x, int y) { return pixels_[static_cast<size_t>(y) * width_ + x]; }
  const Lab& at(int x, int y) const { return pixels_[static_cast<size_t>(y) * width_ + x]; }

  std::vector<Lab>& pixels() noexcept { return pixels_; }
  const std::vector<Lab>& pixels() const noexcept { return pixels_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Lab> pixels_;
};

// sRGB transfer function, channel in [0, 1].
double srgb_to_linear(double c) noexcept;
double linear_to_srgb(double c) noexcept;

/// CIE L* <-> relative luminance Y (Y of white = 1).
double lightness_to_luminance(double lightness) noexcept;
double luminance_to_lightness(double luminance) noexcept;

Lab rgb_to_lab(Rgb8 c) noexcept;

/// Inverse conversion; out-of-gamut channels clamp to [0, 255].
/// If `clamped` is non-null it is set to true when any channel clamped.
Rgb8 lab_to_rgb(const Lab& lab, bool* clamped = nullptr) noexcept;

LabImage rgb_to_lab(const RasterImage& img);

struct GamutStats {
  long clamped_pixels = 0;
};

RasterImage lab_to_rgb(const LabImage& img, GamutStats* stats = nullptr);

/// Rec. 709 luma of the sRGB-encoded values, rounded to [0, 255].
uint8_t gray_level(Rgb8 c) noexcept;

/// Modal color of the top and bottom image rows; ties resolve to the
/// smallest (r, g, b) tuple. Charts are assumed to put background there.
Rgb8 estimate_background_color(const RasterImage& img);

}  // namespace privshade
