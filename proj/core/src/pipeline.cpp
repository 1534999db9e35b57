#include "privshade/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "privshade/error.hpp"
#include "privshade/png_io.hpp"

namespace privshade {

const char* granularity_name(Granularity g) noexcept {
  return g == Granularity::coarse ? "coarse" : "fine";
}

MaskPlan plan_for_preset(const ChartPreset& preset, Granularity granularity) {
  MaskPlan plan;
  if (granularity == Granularity::coarse) {
    // The baseline scheme: one area mask over every mark class.
    MaskPattern area = MaskPattern::area(preset.area_mask_n);
    plan.area_mark = area;
    plan.line_mark = area;
    plan.area_border = area;
    plan.text = area;
    plan.adaptive_text = false;
  } else {
    plan.area_mark = MaskPattern::area(preset.area_mask_n);
    plan.line_mark = MaskPattern::line(preset.line_mask_n);
    plan.area_border = MaskPattern::line(preset.line_mask_n);
    plan.text = MaskPattern::line(plan.text_table.thin_n);
    plan.adaptive_text = true;
  }
  return plan;
}

std::pair<RasterImage, TransformReport> transform(const RasterImage& img,
                                                  const ChartPreset& preset,
                                                  const PipelineOptions& options) {
  validate_preset(preset);

  BinaryMask fg;
  try {
    fg = foreground_mask(img);
  } catch (const Error& e) {
    if (e.code() == Errc::degenerate_histogram)
      raise(Errc::no_marks, "image has no marks to transform (uniform content)");
    throw;
  }
  if (fg.count() == 0) raise(Errc::no_marks, "image has no marks to transform");

  TextAnnotation text = options.text ? *options.text
                                     : detect_text_heuristic(img, fg, options.segment);
  MarkMap marks = classify_marks(img, fg, text, options.segment);

  Rgb8 background = estimate_background_color(img);
  double background_lightness = rgb_to_lab(background).L;

  MaskPlan plan = plan_for_preset(preset, options.granularity);
  RasterImage masked = apply_masking(img, marks, plan, background);
  MarkMap retained = masked_markmap(marks, plan);

  TransformReport report;
  report.preset = preset;
  report.granularity = options.granularity;
  report.background = background;
  report.background_lightness = background_lightness;
  report.before = analyze_frequency(img);

  long clamped = 0;
  RasterImage out = reduce_contrast(masked, retained, preset.contrast, background_lightness,
                                    &clamped);
  report.clamped_pixels = clamped;
  report.after = analyze_frequency(out);

  auto full_counts = marks.label_counts();
  auto retained_counts = retained.label_counts();
  for (MarkLabel label : {MarkLabel::area_mark, MarkLabel::area_border, MarkLabel::line_mark,
                          MarkLabel::text}) {
    LabelStats stats;
    stats.label = label;
    stats.pixels = full_counts[size_t(label)];
    stats.retained = retained_counts[size_t(label)];
    report.labels.push_back(stats);
  }

  for (double distance : options.report_distances_cm) {
    ViewingGeometry geom{distance, options.ppi};
    report.visibility.push_back(
        predict_visibility(preset, geom, options.csf, options.perception));
  }

  return {std::move(out), std::move(report)};
}

std::vector<TransformReport> transform_files(const std::vector<BatchItem>& items,
                                             const ChartPreset& preset,
                                             const PipelineOptions& options, int threads) {
  if (threads < 1) threads = 1;
  std::vector<TransformReport> reports(items.size());
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      try {
        RasterImage img = load_png(items[i].input_path);
        auto [out, report] = transform(img, preset, options);
        save_png(items[i].output_path, out);
        report.input_path = items[i].input_path;
        report.output_path = items[i].output_path;
        reports[i] = std::move(report);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  int n_workers = std::min<size_t>(threads, std::max<size_t>(items.size(), 1));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

}  // namespace privshade
