#include "privshade/mask.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "privshade/error.hpp"

namespace privshade {

namespace {

void check_size(int n) {
  if (n < 1 || n % 2 == 0)
    raise(Errc::invalid_mask_size,
          "mask area must be a positive odd integer, got " + std::to_string(n));
}

}  // namespace

MaskPattern MaskPattern::area(int n) {
  check_size(n);
  MaskPattern p;
  p.n_ = n;
  p.kind_ = MaskKind::area;
  p.keep_.assign(size_t(n) * n, 0);
  p.keep_[size_t(n / 2) * n + n / 2] = 1;
  return p;
}

MaskPattern MaskPattern::line(int n) {
  check_size(n);
  MaskPattern p;
  p.n_ = n;
  p.kind_ = MaskKind::line;
  p.keep_.assign(size_t(n) * n, 0);
  // A band of min(3, n) center rows and columns. Unlike a center block,
  // the cross leaves a dash on every thin mark in each tile no matter
  // where the mark sits, so lines, axes and glyph strokes never vanish.
  int k = std::min(3, n);
  int lo = n / 2 - k / 2;
  int hi = lo + k - 1;
  for (int ty = 0; ty < n; ++ty)
    for (int tx = 0; tx < n; ++tx)
      if ((tx >= lo && tx <= hi) || (ty >= lo && ty <= hi)) p.keep_[size_t(ty) * n + tx] = 1;
  return p;
}

int MaskPattern::kept_count() const noexcept {
  int n = 0;
  for (uint8_t k : keep_) n += k;
  return n;
}

MaskPattern make_area_mask(int n) { return MaskPattern::area(n); }
MaskPattern make_line_mask(int n) { return MaskPattern::line(n); }

bool in_tested_range(MaskKind kind, int n) noexcept {
  if (kind == MaskKind::area) return n >= 1 && n <= 13 && n % 2 == 1;
  return n == 1 || n == 5 || n == 9 || n == 13 || n == 17 || n == 21 || n == 25;
}

MaskPattern adaptive_text_mask(double stroke_width, const TextMaskTable& table) {
  if (!(stroke_width >= 1.0))
    raise(Errc::invalid_width,
          "text stroke width must be >= 1, got " + std::to_string(stroke_width));
  int n;
  if (stroke_width <= table.thin_max_width)
    n = table.thin_n;
  else if (stroke_width <= table.medium_max_width)
    n = table.medium_n;
  else
    n = table.thick_n;
  return MaskPattern::line(n);
}

namespace {

const MaskPattern& pattern_for(const MaskPlan& plan, MarkLabel label) {
  switch (label) {
    case MarkLabel::area_mark: return plan.area_mark;
    case MarkLabel::line_mark: return plan.line_mark;
    case MarkLabel::area_border: return plan.area_border;
    case MarkLabel::text: return plan.text;
    default: raise(Errc::incomplete_plan, "no pattern for background");
  }
}

// Per-component adaptive text patterns, memoized by mask size.
class PlanResolver {
 public:
  PlanResolver(const MaskPlan& plan, const MarkMap& marks) : plan_(plan) {
    if (plan.adaptive_text) {
      for (const ComponentInfo& comp : marks.components()) {
        if (comp.label != MarkLabel::text) continue;
        double sw = std::max(1.0, comp.stroke_width);
        text_patterns_[comp.id] = adaptive_text_mask(sw, plan.text_table);
      }
    }
  }

  const MaskPattern& at(const MarkMap& marks, int x, int y) const {
    MarkLabel label = marks.label(x, y);
    if (label == MarkLabel::text && plan_.adaptive_text) {
      auto it = text_patterns_.find(marks.component_id(x, y));
      if (it != text_patterns_.end()) return it->second;
    }
    return pattern_for(plan_, label);
  }

 private:
  const MaskPlan& plan_;
  std::map<int, MaskPattern> text_patterns_;
};

}  // namespace

RasterImage apply_masking(const RasterImage& img, const MarkMap& marks, const MaskPlan& plan,
                          Rgb8 background) {
  if (img.width() != marks.width() || img.height() != marks.height())
    raise(Errc::invalid_argument, "image and mark map dimensions differ");

  PlanResolver resolver(plan, marks);
  RasterImage out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      if (marks.label(x, y) == MarkLabel::background) continue;
      if (!resolver.at(marks, x, y).keeps_pixel(x, y)) out.at(x, y) = background;
    }
  return out;
}

BinaryMask retained_mask(const MarkMap& marks, const MaskPlan& plan) {
  PlanResolver resolver(plan, marks);
  BinaryMask out(marks.width(), marks.height());
  for (int y = 0; y < marks.height(); ++y)
    for (int x = 0; x < marks.width(); ++x) {
      if (marks.label(x, y) == MarkLabel::background) continue;
      if (resolver.at(marks, x, y).keeps_pixel(x, y)) out.set(x, y, true);
    }
  return out;
}

MarkMap masked_markmap(const MarkMap& marks, const MaskPlan& plan) {
  PlanResolver resolver(plan, marks);
  MarkMap out = marks;
  for (int y = 0; y < marks.height(); ++y)
    for (int x = 0; x < marks.width(); ++x) {
      if (marks.label(x, y) == MarkLabel::background) continue;
      if (!resolver.at(marks, x, y).keeps_pixel(x, y)) {
        out.set_label(x, y, MarkLabel::background);
        out.set_component_id(x, y, -1);
      }
    }
  return out;
}

namespace {

nlohmann::json pattern_json(const MaskPattern& p) {
  return {{"kind", p.kind() == MaskKind::area ? "area" : "line"}, {"n", p.size()}};
}

MaskPattern pattern_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key))
    raise(Errc::incomplete_plan, std::string("mask plan is missing label \"") + key + "\"");
  const auto& entry = j[key];
  if (!entry.is_object() || !entry.contains("kind") || !entry.contains("n"))
    raise(Errc::incomplete_plan, std::string("mask plan entry \"") + key +
                                     "\" needs {\"kind\",\"n\"}");
  std::string kind = entry["kind"].get<std::string>();
  int n = entry["n"].get<int>();
  if (kind == "area") return MaskPattern::area(n);
  if (kind == "line") return MaskPattern::line(n);
  raise(Errc::incomplete_plan, "unknown mask kind \"" + kind + "\"");
}

}  // namespace

std::string mask_plan_to_json(const MaskPlan& plan) {
  nlohmann::json j;
  j["area_mark"] = pattern_json(plan.area_mark);
  j["line_mark"] = pattern_json(plan.line_mark);
  j["area_border"] = pattern_json(plan.area_border);
  if (plan.adaptive_text)
    j["text"] = "adaptive";
  else
    j["text"] = pattern_json(plan.text);
  return j.dump();
}

MaskPlan mask_plan_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::incomplete_plan, std::string("mask plan JSON parse error: ") + e.what());
  }
  MaskPlan plan;
  plan.area_mark = pattern_from_json(j, "area_mark");
  plan.line_mark = pattern_from_json(j, "line_mark");
  plan.area_border = pattern_from_json(j, "area_border");
  if (!j.contains("text"))
    raise(Errc::incomplete_plan, "mask plan is missing label \"text\"");
  if (j["text"].is_string() && j["text"].get<std::string>() == "adaptive") {
    plan.adaptive_text = true;
    plan.text = MaskPattern::line(9);
  } else {
    plan.adaptive_text = false;
    plan.text = pattern_from_json(j, "text");
  }
  return plan;
}

}  // namespace privshade
