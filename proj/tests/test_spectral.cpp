#include <doctest.h>

#include <cmath>
#include <random>

#include "privshade/corpus.hpp"
#include "privshade/mask.hpp"
#include "privshade/pipeline.hpp"
#include "privshade/spectral.hpp"

using namespace privshade;

namespace {

RasterImage solid_rect_image(int canvas, int x0, int y0, int w, int h, Rgb8 color) {
  RasterImage img(canvas, canvas, {255, 255, 255});
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) img.at(x, y) = color;
  return img;
}

MarkMap rect_marks(int canvas, int x0, int y0, int w, int h) {
  MarkMap mm(canvas, canvas);
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) mm.set_label(x, y, MarkLabel::area_mark);
  return mm;
}

MaskPlan area_plan(int n) {
  MaskPlan plan;
  plan.area_mark = make_area_mask(n);
  plan.line_mark = make_area_mask(n);
  plan.area_border = make_area_mask(n);
  plan.text = make_area_mask(n);
  plan.adaptive_text = false;
  return plan;
}

}  // namespace

TEST_CASE("constant image concentrates all energy at DC") {
  RasterImage img(32, 24, {128, 128, 128});
  FrequencySpectrum spec = magnitude_spectrum(img);
  double total = spec.total_energy();
  REQUIRE(total > 0.0);
  for (int y = 0; y < spec.height(); ++y)
    for (int x = 0; x < spec.width(); ++x) {
      if (x == spec.dc_x() && y == spec.dc_y()) continue;
      CHECK(spec.at(x, y) * spec.at(x, y) < 1e-9 * total);
    }
  CHECK(radial_energy_centroid(spec) == 0.0);
}

TEST_CASE("square grating of period 8 peaks at bin N/8") {
  const int n = 64;
  std::vector<double> samples(n * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) samples[size_t(y) * n + x] = (x % 8 < 4) ? 1.0 : -1.0;
  FrequencySpectrum spec = magnitude_spectrum(samples, n, n);

  double best = -1.0;
  int best_x = -1, best_y = -1;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (x == spec.dc_x() && y == spec.dc_y()) continue;
      if (spec.at(x, y) > best) {
        best = spec.at(x, y);
        best_x = x;
        best_y = y;
      }
    }
  // fundamental of the period-8 square wave: +-N/8 off the DC column
  CHECK(best_y == spec.dc_y());
  CHECK(std::abs(best_x - spec.dc_x()) == n / 8);
}

TEST_CASE("Parseval's identity holds to 1e-6 relative") {
  std::mt19937 rng(17);
  for (auto [w, h] : {std::pair{33, 17}, {64, 64}, {81, 50}}) {
    std::vector<double> samples(size_t(w) * h);
    double spatial = 0.0;
    for (double& s : samples) {
      s = double(rng() % 1000) / 500.0 - 1.0;
      spatial += s * s;
    }
    FrequencySpectrum spec = magnitude_spectrum(samples, w, h);
    double freq = spec.total_energy() / (double(w) * h);
    CHECK(freq == doctest::Approx(spatial).epsilon(1e-6));
  }
}

TEST_CASE("spectrum magnitude is invariant under cyclic shifts") {
  const int w = 40, h = 30;
  std::mt19937 rng(3);
  RasterImage img(w, h);
  for (auto& p : img.pixels())
    p = {uint8_t(rng() % 256), uint8_t(rng() % 256), uint8_t(rng() % 256)};

  RasterImage shifted(w, h);
  const int sx = 13, sy = 7;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) shifted.at((x + sx) % w, (y + sy) % h) = img.at(x, y);

  FrequencySpectrum a = magnitude_spectrum(img);
  FrequencySpectrum b = magnitude_spectrum(shifted);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      CHECK(a.at(x, y) == doctest::Approx(b.at(x, y)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("white-noise image has radial centroid above 0.4") {
  std::mt19937 rng(11);
  const int n = 128;
  std::vector<double> samples(size_t(n) * n);
  for (double& s : samples) s = double(rng() % 2000) / 1000.0 - 1.0;
  FrequencySpectrum spec = magnitude_spectrum(samples, n, n);
  CHECK(radial_energy_centroid(spec) > 0.4);
}

TEST_CASE("any mask area pushes a solid rectangle's centroid far outward") {
  // The centroid saturates once the comb harmonics dominate (n >= 3); the
  // load-bearing fact is the jump from the unmasked rectangle into that
  // saturated band, and that no mask size ever falls back toward DC.
  const int canvas = 128;
  RasterImage img = solid_rect_image(canvas, 16, 16, 96, 96, {40, 40, 40});
  MarkMap mm = rect_marks(canvas, 16, 16, 96, 96);

  double unmasked = analyze_frequency(img).radial_centroid;
  CHECK(analyze_frequency(apply_masking(img, mm, area_plan(1), {255, 255, 255}))
            .radial_centroid == doctest::Approx(unmasked));

  double band_low = 1e9, band_high = -1e9;
  for (int n : {3, 5, 7, 9, 11, 13}) {
    RasterImage masked = apply_masking(img, mm, area_plan(n), {255, 255, 255});
    double centroid = analyze_frequency(masked).radial_centroid;
    CHECK(centroid > 4.0 * unmasked);
    band_low = std::min(band_low, centroid);
    band_high = std::max(band_high, centroid);
  }
  CHECK(band_high - band_low < 0.05);
}

TEST_CASE("masking a corpus chart raises both frequency statistics") {
  ChartSpec spec;
  spec.type = ChartType::bar;
  spec.style.canvas_width = 540;
  spec.style.canvas_height = 540;
  auto [img, gt] = generate(spec, 5);

  FrequencyStats before = analyze_frequency(img);

  ChartPreset preset = load_preset("bar");
  auto [out, report] = transform(img, preset, {});
  FrequencyStats after = analyze_frequency(out);

  CHECK(after.non_dc_energy_fraction > before.non_dc_energy_fraction);
  CHECK(after.radial_centroid > before.radial_centroid);

  // mask area 5 alone (no contrast change) also shifts the centroid up
  BinaryMask fg = foreground_mask(img);
  MarkMap marks = classify_marks(img, fg, detect_text_heuristic(img, fg));
  RasterImage masked5 = apply_masking(img, marks, area_plan(5), {250, 250, 250});
  CHECK(analyze_frequency(masked5).radial_centroid > before.radial_centroid);
  CHECK(analyze_frequency(masked5).non_dc_energy_fraction > before.non_dc_energy_fraction);
}

TEST_CASE("spectrum image rendering normalizes to the gray range") {
  RasterImage img(32, 32, {255, 255, 255});
  for (int i = 8; i < 24; ++i) img.at(i, 16) = {0, 0, 0};
  RasterImage rendered = spectrum_to_image(magnitude_spectrum(img));
  CHECK(rendered.width() == 32);
  uint8_t max_v = 0;
  for (const Rgb8& p : rendered.pixels()) {
    CHECK(p.r == p.g);
    CHECK(p.g == p.b);
    max_v = std::max(max_v, p.r);
  }
  CHECK(max_v == 255);
}
