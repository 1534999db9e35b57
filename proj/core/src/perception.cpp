#include "privshade/perception.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "privshade/error.hpp"
#include "privshade/spectral.hpp"

namespace privshade {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_geometry(const ViewingGeometry& geom) {
  if (!(geom.distance_cm > 0.0) || !(geom.ppi > 0.0))
    raise(Errc::invalid_argument, "viewing distance and ppi must be positive");
}

}  // namespace

double CsfModel::sensitivity(double frequency_cpd) const noexcept {
  double u = frequency_scale * frequency_cpd;
  return scale * (offset + u) * std::exp(-std::pow(u, exponent));
}

double CsfModel::threshold_contrast(double frequency_cpd) const noexcept {
  return 1.0 / sensitivity(frequency_cpd);
}

double CsfModel::peak_frequency() const noexcept {
  // Golden-section search; the form has a single interior maximum.
  double lo = 1e-4, hi = 60.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double fa = sensitivity(a), fb = sensitivity(b);
  for (int i = 0; i < 120; ++i) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = sensitivity(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = sensitivity(a);
    }
  }
  return 0.5 * (lo + hi);
}

double spatial_frequency(int mask_n, const ViewingGeometry& geom) {
  if (mask_n < 1) raise(Errc::invalid_argument, "mask size must be >= 1");
  check_geometry(geom);
  double period_cm = mask_n * 2.54 / geom.ppi;
  double theta_deg = 2.0 * std::atan(period_cm / (2.0 * geom.distance_cm)) * 180.0 / kPi;
  return 1.0 / theta_deg;
}

double michelson_contrast(double mark_lightness, double background_lightness) {
  if (mark_lightness < 0.0 || mark_lightness > 100.0 || background_lightness < 0.0 ||
      background_lightness > 100.0)
    raise(Errc::invalid_argument, "L* values must lie in [0, 100]");
  double y1 = lightness_to_luminance(mark_lightness);
  double y2 = lightness_to_luminance(background_lightness);
  double hi = std::max(y1, y2), lo = std::min(y1, y2);
  if (hi + lo <= 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

double effective_pattern_contrast(MaskKind kind, int n, double mark_lightness,
                                  double background_lightness, bool correction) {
  if (!correction || n <= 1)
    return michelson_contrast(mark_lightness, background_lightness);

  double y_mark = lightness_to_luminance(mark_lightness);
  double y_bg = lightness_to_luminance(background_lightness);
  double delta = std::abs(y_bg - y_mark);

  // First-harmonic amplitude and mean of the keep tile. Line masks model a
  // k-px-wide dashed stroke: a k-of-n 1-D comb diluted by k/n across it.
  double alpha, duty;
  if (kind == MaskKind::area) {
    alpha = 1.0 / (double(n) * n);
    duty = alpha;
  } else {
    int k = std::min(3, n);
    double dirichlet = std::sin(k * kPi / n) / std::sin(kPi / n);
    alpha = (double(k) / n) * (dirichlet / n);
    duty = double(k) * k / (double(n) * n);
  }
  double mean = y_bg + duty * (y_mark - y_bg);
  if (mean <= 0.0) return 0.0;
  return std::min(1.0, 2.0 * alpha * delta / mean);
}

VisibilityReport predict_visibility(const ChartPreset& preset, const ViewingGeometry& geom,
                                    const CsfModel& csf, const PerceptionOptions& options) {
  check_geometry(geom);
  double mark_lightness = std::clamp(options.background_lightness - preset.contrast, 0.0, 100.0);

  MaskPattern text_pattern =
      adaptive_text_mask(std::max(1.0, options.assumed_text_stroke_width), options.text_table);

  struct Entry {
    MarkLabel label;
    MaskKind kind;
    int n;
  };
  const Entry entries[] = {
      {MarkLabel::area_mark, MaskKind::area, preset.area_mask_n},
      {MarkLabel::line_mark, MaskKind::line, preset.line_mask_n},
      {MarkLabel::area_border, MaskKind::line, preset.line_mask_n},
      {MarkLabel::text, MaskKind::line, text_pattern.size()},
  };

  VisibilityReport report;
  report.distance_cm = geom.distance_cm;
  report.ppi = geom.ppi;

  for (const Entry& e : entries) {
    LabelVisibility lv;
    lv.label = e.label;
    lv.kind = e.kind;
    lv.mask_n = e.n;
    lv.frequency_cpd = spatial_frequency(e.n, geom);
    lv.contrast = effective_pattern_contrast(e.kind, e.n, mark_lightness,
                                             options.background_lightness,
                                             options.pattern_contrast_correction);
    lv.threshold = csf.threshold_contrast(lv.frequency_cpd);
    lv.margin = lv.threshold > 0.0 ? lv.contrast / lv.threshold : 0.0;
    lv.visible = lv.margin >= 1.0;
    report.labels.push_back(lv);
  }

  // Chart verdict follows the dominant mark class, the one the study's
  // per-chart mask area refers to.
  MarkLabel dominant =
      preset.chart_type == ChartType::line ? MarkLabel::line_mark : MarkLabel::area_mark;
  for (const LabelVisibility& lv : report.labels)
    if (lv.label == dominant) {
      report.visible = lv.visible;
      report.margin = lv.margin;
    }
  return report;
}

RasterImage simulate_view(const RasterImage& img, const ViewingGeometry& geom,
                          const CsfModel& csf) {
  check_geometry(geom);
  const int w = img.width();
  const int h = img.height();

  LabImage lab = rgb_to_lab(img);

  double pixel_cm = 2.54 / geom.ppi;
  double deg_per_px = 2.0 * std::atan(pixel_cm / (2.0 * geom.distance_cm)) * 180.0 / kPi;
  double px_per_deg = 1.0 / deg_per_px;

  double peak = csf.peak_frequency();
  double peak_sensitivity = csf.sensitivity(peak);

  // Attenuation per bin: unity through the pass band (f <= peak, including
  // DC), S(f)/S(peak) beyond it.
  std::vector<double> attenuation(size_t(w) * h);
  for (int y = 0; y < h; ++y) {
    double fy = (y <= h / 2 ? y : y - h) / double(h);
    for (int x = 0; x < w; ++x) {
      double fx = (x <= w / 2 ? x : x - w) / double(w);
      double cycles_per_deg = std::hypot(fx, fy) * px_per_deg;
      double a = 1.0;
      if (cycles_per_deg > peak) a = csf.sensitivity(cycles_per_deg) / peak_sensitivity;
      attenuation[size_t(y) * w + x] = a;
    }
  }

  auto filter_channel = [&](auto getter, auto setter) {
    std::vector<std::complex<double>> buf(size_t(w) * h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) buf[size_t(y) * w + x] = getter(lab.at(x, y));
    detail::dft2d(buf, w, h, false);
    for (size_t i = 0; i < buf.size(); ++i) buf[i] *= attenuation[i];
    detail::dft2d(buf, w, h, true);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) setter(lab.at(x, y), buf[size_t(y) * w + x].real());
  };

  filter_channel([](const Lab& p) { return p.L; },
                 [](Lab& p, double v) { p.L = std::clamp(v, 0.0, 100.0); });
  filter_channel([](const Lab& p) { return p.a; }, [](Lab& p, double v) { p.a = v; });
  filter_channel([](const Lab& p) { return p.b; }, [](Lab& p, double v) { p.b = v; });

  return lab_to_rgb(lab);
}

}  // namespace privshade
