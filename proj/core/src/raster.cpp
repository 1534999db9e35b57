#include "privshade/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "privshade/error.hpp"

namespace privshade {

namespace {

// sRGB -> XYZ (D65) and back.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kLabEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;     // (29/3)^3

double lab_f(double t) noexcept {
  return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double t) noexcept {
  double t3 = t * t * t;
  return t3 > kLabEpsilon ? t3 : (116.0 * t - 16.0) / kLabKappa;
}

}  // namespace

RasterImage::RasterImage(int width, int height, Rgb8 fill) : width_(width), height_(height) {
  if (width < 1 || height < 1)
    raise(Errc::invalid_argument, "image dimensions must be at least 1x1");
  pixels_.assign(static_cast<size_t>(width) * height, fill);
}

LabImage::LabImage(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1)
    raise(Errc::invalid_argument, "image dimensions must be at least 1x1");
  pixels_.assign(static_cast<size_t>(width) * height, Lab{});
}

double srgb_to_linear(double c) noexcept {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) noexcept {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lightness_to_luminance(double lightness) noexcept {
  if (lightness > kLabKappa * kLabEpsilon) {
    double t = (lightness + 16.0) / 116.0;
    return t * t * t;
  }
  return lightness / kLabKappa;
}

double luminance_to_lightness(double luminance) noexcept {
  return 116.0 * lab_f(luminance) - 16.0;
}

Lab rgb_to_lab(Rgb8 c) noexcept {
  double rl = srgb_to_linear(c.r / 255.0);
  double gl = srgb_to_linear(c.g / 255.0);
  double bl = srgb_to_linear(c.b / 255.0);

  double x = kRgbToXyz[0][0] * rl + kRgbToXyz[0][1] * gl + kRgbToXyz[0][2] * bl;
  double y = kRgbToXyz[1][0] * rl + kRgbToXyz[1][1] * gl + kRgbToXyz[1][2] * bl;
  double z = kRgbToXyz[2][0] * rl + kRgbToXyz[2][1] * gl + kRgbToXyz[2][2] * bl;

  double fx = lab_f(x / kWhiteX);
  double fy = lab_f(y / kWhiteY);
  double fz = lab_f(z / kWhiteZ);

  return Lab{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb8 lab_to_rgb(const Lab& lab, bool* clamped) noexcept {
  double fy = (lab.L + 16.0) / 116.0;
  double fx = fy + lab.a / 500.0;
  double fz = fy - lab.b / 200.0;

  double x = kWhiteX * lab_f_inv(fx);
  double y = kWhiteY * lightness_to_luminance(lab.L);
  double z = kWhiteZ * lab_f_inv(fz);

  bool any_clamped = false;
  uint8_t out[3];
  for (int i = 0; i < 3; ++i) {
    double lin = kXyzToRgb[i][0] * x + kXyzToRgb[i][1] * y + kXyzToRgb[i][2] * z;
    double v = linear_to_srgb(lin) * 255.0;
    double rounded = std::round(v);
    if (rounded < 0.0) {
      rounded = 0.0;
      any_clamped = true;
    } else if (rounded > 255.0) {
      rounded = 255.0;
      any_clamped = true;
    }
    out[i] = static_cast<uint8_t>(rounded);
  }
  if (clamped) *clamped = any_clamped;
  return Rgb8{out[0], out[1], out[2]};
}

LabImage rgb_to_lab(const RasterImage& img) {
  LabImage out(img.width(), img.height());
  const auto& src = img.pixels();
  auto& dst = out.pixels();
  for (size_t i = 0; i < src.size(); ++i) dst[i] = rgb_to_lab(src[i]);
  return out;
}

RasterImage lab_to_rgb(const LabImage& img, GamutStats* stats) {
  RasterImage out(img.width(), img.height());
  const auto& src = img.pixels();
  auto& dst = out.pixels();
  long clamped_pixels = 0;
  for (size_t i = 0; i < src.size(); ++i) {
    bool clamped = false;
    dst[i] = lab_to_rgb(src[i], &clamped);
    if (clamped) ++clamped_pixels;
  }
  if (stats) stats->clamped_pixels = clamped_pixels;
  return out;
}

uint8_t gray_level(Rgb8 c) noexcept {
  double v = 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b;
  long rounded = std::lround(v);
  return static_cast<uint8_t>(std::clamp(rounded, 0L, 255L));
}

Rgb8 estimate_background_color(const RasterImage& img) {
  std::map<std::array<uint8_t, 3>, long> counts;
  auto tally = [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      Rgb8 c = img.at(x, y);
      ++counts[{c.r, c.g, c.b}];
    }
  };
  tally(0);
  if (img.height() > 1) tally(img.height() - 1);

  std::array<uint8_t, 3> best{255, 255, 255};
  long best_count = -1;
  for (const auto& [color, count] : counts) {
    if (count > best_count) {
      best = color;
      best_count = count;
    }
  }
  return Rgb8{best[0], best[1], best[2]};
}

}  // namespace privshade
