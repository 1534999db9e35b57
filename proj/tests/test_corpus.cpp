#include <doctest.h>

#include <cmath>

#include "privshade/corpus.hpp"
#include "privshade/error.hpp"
#include "privshade/png_io.hpp"
#include "privshade/segment.hpp"

using namespace privshade;

TEST_CASE("same spec and seed give bit-identical output") {
  for (ChartType type : {ChartType::bar, ChartType::pie, ChartType::scatter, ChartType::line}) {
    ChartSpec spec;
    spec.type = type;
    spec.style.canvas_width = 480;
    spec.style.canvas_height = 480;
    auto [img1, gt1] = generate(spec, 42);
    auto [img2, gt2] = generate(spec, 42);
    CHECK(img1 == img2);
    CHECK(gt1.labels == gt2.labels);
    CHECK(encode_png(img1) == encode_png(img2));

    auto [img3, gt3] = generate(spec, 43);
    CHECK(img3 != img1);  // different seed, different chart
  }
}

TEST_CASE("bar chart ground truth has one area component per bar") {
  ChartSpec spec;
  spec.type = ChartType::bar;
  spec.style.bar_count = 5;
  auto [img, gt] = generate(spec, 7);

  int area_components = 0;
  for (const GtComponent& c : gt.components)
    if (c.label == MarkLabel::area_mark) ++area_components;
  CHECK(area_components == 5);
}

TEST_CASE("pie slice pixel counts are proportional to the weights") {
  ChartSpec spec;
  spec.type = ChartType::pie;
  spec.values = {1.0, 2.0, 3.0, 4.0};
  auto [img, gt] = generate(spec, 1);

  std::vector<long> slice_counts;
  for (const GtComponent& c : gt.components)
    if (c.label == MarkLabel::area_mark) slice_counts.push_back(c.pixel_count);
  REQUIRE(slice_counts.size() == 4);

  long disc_total = 0;
  for (long c : slice_counts) disc_total += c;
  double weight_total = 10.0;
  for (size_t i = 0; i < 4; ++i) {
    double expected = spec.values[i] / weight_total * double(disc_total);
    CHECK(std::abs(double(slice_counts[i]) - expected) <= 0.015 * double(disc_total));
  }
}

TEST_CASE("scatter dots measure their diameter as stroke width") {
  ChartSpec spec;
  spec.type = ChartType::scatter;
  spec.style.dot_radius = 6;
  auto [img, gt] = generate(spec, 9);
  BinaryMask fg = foreground_mask(img);

  int checked = 0;
  for (const GtComponent& c : gt.components) {
    if (c.label != MarkLabel::area_mark) continue;
    BinaryMask window(c.bbox.w, c.bbox.h);
    for (int y = 0; y < c.bbox.h; ++y)
      for (int x = 0; x < c.bbox.w; ++x)
        if (fg.at(c.bbox.x + x, c.bbox.y + y)) window.set(x, y, true);
    double w = stroke_width(window);
    CHECK(w >= 11.0);
    CHECK(w <= 13.0);
    ++checked;
  }
  CHECK(checked == spec.style.scatter_points);
}

TEST_CASE("explicit out-of-range data raises a range error") {
  ChartSpec spec;
  spec.type = ChartType::bar;
  spec.values = {0.5, 1.4, 0.2};
  CHECK_THROWS_AS(generate(spec, 1), Error);
  try {
    generate(spec, 1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::range_error);
  }

  ChartSpec pie;
  pie.type = ChartType::pie;
  pie.values = {1.0, -2.0};
  CHECK_THROWS_AS(generate(pie, 1), Error);
}

TEST_CASE("palette hues sit at L* 50") {
  for (const Rgb8& c : corpus_palette()) {
    double L = rgb_to_lab(c).L;
    CHECK(L > 45.0);
    CHECK(L < 55.0);
  }
}

TEST_CASE("ground truth labels match the rendered pixels") {
  for (ChartType type : {ChartType::scatter, ChartType::line}) {
    ChartSpec spec;
    spec.type = type;
    auto [img, gt] = generate(spec, 31);
    // every labeled pixel differs from background; every background pixel is background-colored
    long mismatches = 0;
    for (int y = 0; y < gt.height; ++y)
      for (int x = 0; x < gt.width; ++x) {
        bool labeled = gt.label(x, y) != MarkLabel::background;
        bool colored = !(img.at(x, y) == gt.background);
        if (labeled != colored) ++mismatches;
      }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("ground truth JSON and label image render") {
  ChartSpec spec;
  spec.type = ChartType::pie;
  spec.style.canvas_width = 420;
  spec.style.canvas_height = 420;
  auto [img, gt] = generate(spec, 2);
  std::string json = ground_truth_to_json(gt);
  CHECK(json.find("\"components\"") != std::string::npos);
  CHECK(json.find("area_mark") != std::string::npos);
  RasterImage labels = ground_truth_to_label_image(gt);
  CHECK(labels.width() == 420);
}
