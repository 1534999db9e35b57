#include "privshade/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "privshade/error.hpp"

namespace privshade {

namespace detail {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan(int width, int height, bool inverse) {
  static std::map<std::tuple<int, int, bool>, fftw_plan> cache;
  auto key = std::make_tuple(width, height, inverse);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<fftw_complex> scratch(size_t(width) * height);
  fftw_plan plan = fftw_plan_dft_2d(height, width, scratch.data(), scratch.data(),
                                    inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache[key] = plan;
  return plan;
}

}  // namespace

void dft2d(std::vector<std::complex<double>>& data, int width, int height, bool inverse) {
  if (long(width) * height != long(data.size()))
    raise(Errc::invalid_argument, "dft2d: buffer size does not match dimensions");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = cached_plan(width, height, inverse);
  }
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, raw, raw);
  if (inverse) {
    double scale = 1.0 / (double(width) * height);
    for (auto& c : data) c *= scale;
  }
}

}  // namespace detail

FrequencySpectrum::FrequencySpectrum(int width, int height) : width_(width), height_(height) {
  mag_.assign(size_t(width) * height, 0.0);
}

double FrequencySpectrum::total_energy() const noexcept {
  double sum = 0.0;
  for (double m : mag_) sum += m * m;
  return sum;
}

double FrequencySpectrum::dc_energy() const noexcept {
  double m = at(dc_x(), dc_y());
  return m * m;
}

FrequencySpectrum magnitude_spectrum(const std::vector<double>& samples, int width, int height) {
  if (width < 1 || height < 1 || long(width) * height != long(samples.size()))
    raise(Errc::invalid_argument, "magnitude_spectrum: bad dimensions");

  std::vector<std::complex<double>> buf(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) buf[i] = samples[i];
  detail::dft2d(buf, width, height, false);

  // Shift DC to (w/2, h/2).
  FrequencySpectrum spec(width, height);
  int cx = width / 2, cy = height / 2;
  for (int y = 0; y < height; ++y) {
    int sy = (y + cy) % height;
    for (int x = 0; x < width; ++x) {
      int sx = (x + cx) % width;
      spec.at(sx, sy) = std::abs(buf[size_t(y) * width + x]);
    }
  }
  return spec;
}

FrequencySpectrum magnitude_spectrum(const RasterImage& img) {
  std::vector<double> lum(img.pixels().size());
  const auto& px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i) lum[i] = rgb_to_lab(px[i]).L;
  return magnitude_spectrum(lum, img.width(), img.height());
}

double radial_energy_centroid(const FrequencySpectrum& spectrum) {
  const int w = spectrum.width();
  const int h = spectrum.height();
  const int cx = spectrum.dc_x();
  const int cy = spectrum.dc_y();
  const double corner = std::hypot(0.5, 0.5);

  double energy = 0.0, weighted = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (x == cx && y == cy) continue;
      double m = spectrum.at(x, y);
      double e = m * m;
      if (e <= 0.0) continue;
      double fx = double(x - cx) / w;
      double fy = double(y - cy) / h;
      energy += e;
      weighted += e * std::hypot(fx, fy) / corner;
    }
  if (energy <= 0.0) return 0.0;
  return weighted / energy;
}

FrequencyStats analyze_frequency(const RasterImage& img) {
  Rgb8 bg = estimate_background_color(img);
  double bg_lightness = rgb_to_lab(bg).L;

  std::vector<double> deviation(img.pixels().size());
  const auto& px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i) deviation[i] = bg_lightness - rgb_to_lab(px[i]).L;

  FrequencySpectrum spec = magnitude_spectrum(deviation, img.width(), img.height());
  FrequencyStats stats;
  double total = spec.total_energy();
  stats.non_dc_energy_fraction = total > 0.0 ? (total - spec.dc_energy()) / total : 0.0;
  stats.radial_centroid = radial_energy_centroid(spec);
  return stats;
}

RasterImage spectrum_to_image(const FrequencySpectrum& spectrum) {
  RasterImage out(spectrum.width(), spectrum.height());
  double max_log = 0.0;
  for (int y = 0; y < spectrum.height(); ++y)
    for (int x = 0; x < spectrum.width(); ++x)
      max_log = std::max(max_log, std::log1p(spectrum.at(x, y)));
  for (int y = 0; y < spectrum.height(); ++y)
    for (int x = 0; x < spectrum.width(); ++x) {
      double v = max_log > 0.0 ? std::log1p(spectrum.at(x, y)) / max_log : 0.0;
      auto g = uint8_t(std::lround(v * 255.0));
      out.at(x, y) = {g, g, g};
    }
  return out;
}

}  // namespace privshade
