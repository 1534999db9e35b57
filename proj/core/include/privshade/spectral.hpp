#pragma once

#include <complex>
#include <vector>

#include "privshade/raster.hpp"

namespace privshade {

/// Centered 2-D DFT magnitudes; DC sits at (width/2, height/2).
class FrequencySpectrum {
 public:
  FrequencySpectrum() = default;
  FrequencySpectrum(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int dc_x() const noexcept { return width_ / 2; }
  int dc_y() const noexcept { return height_ / 2; }

  double at(int kx, int ky) const { return mag_[static_cast<size_t>(ky) * width_ + kx]; }
  double& at(int kx, int ky) { return mag_[static_cast<size_t>(ky) * width_ + kx]; }

  /// Sum of squared magnitudes over all bins.
  double total_energy() const noexcept;
  double dc_energy() const noexcept;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> mag_;
};

/// Magnitude spectrum of the CIELAB L channel (unnormalized DFT, so
/// sum |F|^2 / N equals the spatial sum of squares).
FrequencySpectrum magnitude_spectrum(const RasterImage& img);
FrequencySpectrum magnitude_spectrum(const std::vector<double>& samples, int width, int height);

/// Energy-weighted mean distance of non-DC bins from the center, with bin
/// (kx, ky) at radius hypot(kx/W, ky/H) normalized so the spectrum corner
/// is 1. Zero non-DC energy yields 0.
double radial_energy_centroid(const FrequencySpectrum& spectrum);

struct FrequencyStats {
  double non_dc_energy_fraction = 0.0;
  double radial_centroid = 0.0;
};

/// Stats of the background-relative luminance (bgL* - L*), so the DC bin
/// carries only the mean deviation from background and masking strictly
/// raises the non-DC fraction.
FrequencyStats analyze_frequency(const RasterImage& img);

/// Log-magnitude rendering, normalized to [0, 255] gray.
RasterImage spectrum_to_image(const FrequencySpectrum& spectrum);

namespace detail {
/// Forward/inverse 2-D DFT (FFTW behind a plan cache; inverse is scaled by 1/N).
void dft2d(std::vector<std::complex<double>>& data, int width, int height, bool inverse);
}  // namespace detail

}  // namespace privshade
