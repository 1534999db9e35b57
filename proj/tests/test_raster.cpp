#include <doctest.h>

#include <cmath>
#include <random>

#include "privshade/raster.hpp"

using namespace privshade;

TEST_CASE("white maps to the Lab white point") {
  Lab lab = rgb_to_lab({255, 255, 255});
  CHECK(lab.L == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(std::abs(lab.a) < 0.01);
  CHECK(std::abs(lab.b) < 0.01);
}

TEST_CASE("black maps to L* = 0") {
  Lab lab = rgb_to_lab({0, 0, 0});
  CHECK(lab.L == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("pure red against the reference conversion") {
  Lab lab = rgb_to_lab({255, 0, 0});
  CHECK(lab.L == doctest::Approx(53.24).epsilon(0.002));
  CHECK(lab.a == doctest::Approx(80.09).epsilon(0.002));
  CHECK(lab.b == doctest::Approx(67.20).epsilon(0.002));
}

TEST_CASE("round trip through Lab stays within one 8-bit step per channel") {
  // Stride-3 sweep over the 8-bit cube plus the extremes: 630k colors.
  auto check_color = [](int r, int g, int b) {
    Rgb8 c{uint8_t(r), uint8_t(g), uint8_t(b)};
    Rgb8 back = lab_to_rgb(rgb_to_lab(c));
    bool ok = std::abs(int(back.r) - r) <= 1 && std::abs(int(back.g) - g) <= 1 &&
              std::abs(int(back.b) - b) <= 1;
    if (!ok) {
      CAPTURE(r);
      CAPTURE(g);
      CAPTURE(b);
      CHECK(ok);
    }
  };
  for (int r = 0; r < 256; r += 3)
    for (int g = 0; g < 256; g += 3)
      for (int b = 0; b < 256; b += 3) check_color(r, g, b);
  check_color(255, 255, 255);
  check_color(0, 0, 0);
  check_color(255, 0, 255);
  check_color(0, 255, 0);
}

TEST_CASE("L* is monotonic in gray level") {
  double prev = -1.0;
  for (int g = 0; g < 256; ++g) {
    double L = rgb_to_lab({uint8_t(g), uint8_t(g), uint8_t(g)}).L;
    CHECK(L > prev);
    prev = L;
  }
}

TEST_CASE("saturated red hue at low L* clamps and is counted") {
  bool clamped = false;
  lab_to_rgb(Lab{25.0, 80.09, 67.20}, &clamped);
  CHECK(clamped);

  LabImage img(2, 1);
  img.at(0, 0) = Lab{25.0, 80.09, 67.20};
  img.at(1, 0) = Lab{50.0, 0.0, 0.0};
  GamutStats stats;
  lab_to_rgb(img, &stats);
  CHECK(stats.clamped_pixels == 1);
}

TEST_CASE("conversion is per-pixel pure: permuting pixels permutes outputs") {
  std::mt19937 rng(7);
  RasterImage img(13, 9);
  for (auto& p : img.pixels())
    p = {uint8_t(rng() % 256), uint8_t(rng() % 256), uint8_t(rng() % 256)};

  LabImage lab = rgb_to_lab(img);

  RasterImage reversed(13, 9);
  for (size_t i = 0; i < img.pixels().size(); ++i)
    reversed.pixels()[i] = img.pixels()[img.pixels().size() - 1 - i];
  LabImage lab_reversed = rgb_to_lab(reversed);

  for (size_t i = 0; i < lab.pixels().size(); ++i) {
    const Lab& a = lab.pixels()[lab.pixels().size() - 1 - i];
    const Lab& b = lab_reversed.pixels()[i];
    CHECK(a.L == b.L);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
  }
}

TEST_CASE("background estimate picks the modal border-row color") {
  RasterImage img(10, 10, {250, 250, 250});
  for (int x = 0; x < 10; ++x) img.at(x, 9) = {20, 20, 20};
  // 10 dark px (bottom row) vs 10 light px (top row): tie resolves to the
  // smaller tuple.
  CHECK(estimate_background_color(img) == Rgb8{20, 20, 20});

  RasterImage img2(10, 10, {250, 250, 250});
  for (int x = 2; x < 8; ++x) img2.at(x, 0) = {10, 10, 10};
  CHECK(estimate_background_color(img2) == Rgb8{250, 250, 250});
}

TEST_CASE("lightness to luminance round trip") {
  for (double L = 0.0; L <= 100.0; L += 2.5) {
    double y = lightness_to_luminance(L);
    CHECK(luminance_to_lightness(y) == doctest::Approx(L).epsilon(1e-9));
  }
  CHECK(lightness_to_luminance(25.0) == doctest::Approx(0.04415).epsilon(1e-3));
}
