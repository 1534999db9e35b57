#pragma once

#include "privshade/raster.hpp"
#include "privshade/segment.hpp"

namespace privshade {

/// Set every labeled mark pixel's L* to clamp(background_lightness - contrast, 0, 100)
/// in CIELAB, preserving a*/b*, then convert back with per-channel gamut
/// clamping. Background pixels are copied untouched. `contrast` outside
/// [0, 100] raises Errc::invalid_contrast. `clamped_pixels`, when given,
/// receives the number of mark pixels whose conversion clamped.
RasterImage reduce_contrast(const RasterImage& img, const MarkMap& marks, double contrast,
                            double background_lightness, long* clamped_pixels = nullptr);

}  // namespace privshade
