#include "privshade/contrast.hpp"

#include <algorithm>

#include "privshade/error.hpp"

namespace privshade {

RasterImage reduce_contrast(const RasterImage& img, const MarkMap& marks, double contrast,
                            double background_lightness, long* clamped_pixels) {
  if (!(contrast >= 0.0 && contrast <= 100.0))
    raise(Errc::invalid_contrast,
          "contrast must lie in [0, 100], got " + std::to_string(contrast));
  if (img.width() != marks.width() || img.height() != marks.height())
    raise(Errc::invalid_argument, "image and mark map dimensions differ");

  double target = std::clamp(background_lightness - contrast, 0.0, 100.0);
  RasterImage out = img;
  long clamped_count = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      if (marks.label(x, y) == MarkLabel::background) continue;
      Lab lab = rgb_to_lab(img.at(x, y));
      lab.L = target;
      bool clamped = false;
      out.at(x, y) = lab_to_rgb(lab, &clamped);
      if (clamped) ++clamped_count;
    }
  if (clamped_pixels) *clamped_pixels = clamped_count;
  return out;
}

}  // namespace privshade
