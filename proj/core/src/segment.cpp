#include "privshade/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "privshade/error.hpp"

namespace privshade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Large finite "unreached" value for the distance transform: 1e15 + any
// squared pixel distance is still exactly representable, so parabola
// intersections stay exact instead of producing inf - inf = NaN.
constexpr double kFarSquared = 1e15;

struct Box {
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = -1;
  int max_y = -1;

  void add(int x, int y) {
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  }
  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
};

// 1-D squared distance transform (lower envelope of parabolas).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z, int n) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    int p = v[k];
    d[q] = double(q - p) * (q - p) + f[p];
  }
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BinaryMask extract_window(const BinaryMask& mask, const std::vector<int32_t>& ids, int id,
                          const Box& box) {
  BinaryMask out(box.width(), box.height());
  for (int y = box.min_y; y <= box.max_y; ++y)
    for (int x = box.min_x; x <= box.max_x; ++x)
      if (mask.at(x, y) && ids[size_t(y) * mask.width() + x] == id)
        out.set(x - box.min_x, y - box.min_y, true);
  return out;
}

bool colors_close(Rgb8 a, Rgb8 b, int tol) {
  return std::abs(int(a.r) - int(b.r)) <= tol && std::abs(int(a.g) - int(b.g)) <= tol &&
         std::abs(int(a.b) - int(b.b)) <= tol;
}

}  // namespace

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 1 || height < 1)
    raise(Errc::invalid_argument, "mask dimensions must be at least 1x1");
  cells_.assign(static_cast<size_t>(width) * height, fill ? 1 : 0);
}

long BinaryMask::count() const noexcept {
  long n = 0;
  for (uint8_t c : cells_) n += c;
  return n;
}

const char* mark_label_name(MarkLabel label) noexcept {
  switch (label) {
    case MarkLabel::background: return "background";
    case MarkLabel::area_mark: return "area_mark";
    case MarkLabel::area_border: return "area_border";
    case MarkLabel::line_mark: return "line_mark";
    case MarkLabel::text: return "text";
  }
  return "unknown";
}

MarkMap::MarkMap(int width, int height) : width_(width), height_(height) {
  labels_.assign(static_cast<size_t>(width) * height, MarkLabel::background);
  ids_.assign(static_cast<size_t>(width) * height, -1);
}

std::array<long, 5> MarkMap::label_counts() const {
  std::array<long, 5> counts{};
  for (MarkLabel l : labels_) ++counts[static_cast<size_t>(l)];
  return counts;
}

std::vector<uint8_t> to_gray(const RasterImage& img) {
  std::vector<uint8_t> gray(img.pixels().size());
  const auto& px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i) gray[i] = gray_level(px[i]);
  return gray;
}

int li_threshold(const std::array<int64_t, 256>& histogram) {
  int occupied = 0;
  for (int64_t h : histogram)
    if (h > 0) ++occupied;
  if (occupied < 2)
    raise(Errc::degenerate_histogram,
          "histogram has fewer than two occupied gray levels; no threshold separates it");

  // Prefix moments let each candidate evaluate in O(1).
  std::array<double, 257> count{}, moment{};
  for (int g = 0; g < 256; ++g) {
    count[g + 1] = count[g] + double(histogram[g]);
    moment[g + 1] = moment[g] + double(histogram[g]) * g;
  }

  double best = kInf;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    // low class [0, t), high class [t, 255]
    double m0_low = count[t], m1_low = moment[t];
    double m0_high = count[256] - m0_low, m1_high = moment[256] - m1_low;
    double eta = 0.0;
    if (m1_low > 0) eta -= m1_low * std::log(m1_low / m0_low);
    if (m1_high > 0) eta -= m1_high * std::log(m1_high / m0_high);
    if (eta < best) {
      best = eta;
      best_t = t;
    }
  }
  return best_t;
}

int li_threshold(const std::vector<uint8_t>& gray) {
  std::array<int64_t, 256> hist{};
  for (uint8_t g : gray) ++hist[g];
  return li_threshold(hist);
}

BinaryMask foreground_mask(const RasterImage& img) {
  std::vector<uint8_t> gray = to_gray(img);
  int t = li_threshold(gray);

  // Background gray: mode over the top and bottom rows.
  std::array<long, 256> border_hist{};
  for (int x = 0; x < img.width(); ++x) {
    ++border_hist[gray[x]];
    ++border_hist[gray[size_t(img.height() - 1) * img.width() + x]];
  }
  int bg_gray = int(std::max_element(border_hist.begin(), border_hist.end()) -
                    border_hist.begin());

  bool fg_is_low = bg_gray >= t;
  BinaryMask mask(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      uint8_t g = gray[size_t(y) * img.width() + x];
      mask.set(x, y, fg_is_low ? g < t : g >= t);
    }
  return mask;
}

BinaryMask skeletonize(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask cur = mask;
  std::vector<std::pair<int, int>> to_delete;

  auto neighbors = [&](int x, int y, int p[8]) {
    // p2..p9 clockwise from north
    p[0] = cur.test(x, y - 1);
    p[1] = cur.test(x + 1, y - 1);
    p[2] = cur.test(x + 1, y);
    p[3] = cur.test(x + 1, y + 1);
    p[4] = cur.test(x, y + 1);
    p[5] = cur.test(x - 1, y + 1);
    p[6] = cur.test(x - 1, y);
    p[7] = cur.test(x - 1, y - 1);
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int phase = 0; phase < 2; ++phase) {
      to_delete.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!cur.at(x, y)) continue;
          int p[8];
          neighbors(x, y, p);
          int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
          if (b < 2 || b > 6) continue;
          int a = 0;
          for (int i = 0; i < 8; ++i)
            if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
          if (a != 1) continue;
          if (phase == 0) {
            if (p[0] * p[2] * p[4] != 0) continue;
            if (p[2] * p[4] * p[6] != 0) continue;
          } else {
            if (p[0] * p[2] * p[6] != 0) continue;
            if (p[0] * p[4] * p[6] != 0) continue;
          }
          to_delete.emplace_back(x, y);
        }
      }
      if (!to_delete.empty()) changed = true;
      for (auto [x, y] : to_delete) cur.set(x, y, false);
    }
  }
  return cur;
}

std::vector<double> distance_transform(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  // Pad with a background ring so the image edge counts as background.
  const int pw = w + 2, ph = h + 2;
  std::vector<double> grid(size_t(pw) * ph, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      grid[size_t(y + 1) * pw + (x + 1)] = mask.at(x, y) ? kFarSquared : 0.0;

  int n_max = std::max(pw, ph);
  std::vector<double> f(n_max), d(n_max), z(n_max + 1);
  std::vector<int> v(n_max);

  for (int x = 0; x < pw; ++x) {
    for (int y = 0; y < ph; ++y) f[y] = grid[size_t(y) * pw + x];
    dt_1d(f, d, v, z, ph);
    for (int y = 0; y < ph; ++y) grid[size_t(y) * pw + x] = d[y];
  }
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < pw; ++x) f[x] = grid[size_t(y) * pw + x];
    dt_1d(f, d, v, z, pw);
    for (int x = 0; x < pw; ++x) grid[size_t(y) * pw + x] = d[x];
  }

  std::vector<double> out(size_t(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[size_t(y) * w + x] = std::sqrt(grid[size_t(y + 1) * pw + (x + 1)]);
  return out;
}

double stroke_width(const BinaryMask& component, const BinaryMask& skeleton) {
  if (component.width() != skeleton.width() || component.height() != skeleton.height())
    raise(Errc::invalid_argument, "component and skeleton dimensions differ");
  std::vector<double> dt = distance_transform(component);
  std::vector<double> samples;
  for (int y = 0; y < skeleton.height(); ++y)
    for (int x = 0; x < skeleton.width(); ++x)
      if (skeleton.at(x, y)) samples.push_back(dt[size_t(y) * skeleton.width() + x]);
  if (samples.empty())
    raise(Errc::undefined_width, "stroke width undefined: empty skeleton");
  return 2.0 * median_of(std::move(samples)) - 1.0;
}

double stroke_width(const BinaryMask& component) {
  return stroke_width(component, skeletonize(component));
}

std::vector<int32_t> label_components(const BinaryMask& mask, int* component_count,
                                      const RasterImage* img, int color_tolerance) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int32_t> ids(size_t(w) * h, -1);
  std::vector<std::pair<int, int>> stack;
  int next_id = 0;

  static constexpr int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (!mask.at(sx, sy) || ids[size_t(sy) * w + sx] >= 0) continue;
      int id = next_id++;
      stack.emplace_back(sx, sy);
      ids[size_t(sy) * w + sx] = id;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          int nx = x + dx[k], ny = y + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          size_t ni = size_t(ny) * w + nx;
          if (!mask.at(nx, ny) || ids[ni] >= 0) continue;
          if (img && !colors_close(img->at(x, y), img->at(nx, ny), color_tolerance)) continue;
          ids[ni] = id;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  if (component_count) *component_count = next_id;
  return ids;
}

int count_components(const BinaryMask& mask) {
  int n = 0;
  label_components(mask, &n);
  return n;
}

BinaryMask inner_border(const BinaryMask& component, int thickness) {
  BinaryMask remaining = component;
  BinaryMask border(component.width(), component.height());
  for (int layer = 0; layer < thickness; ++layer) {
    std::vector<std::pair<int, int>> peel;
    for (int y = 0; y < remaining.height(); ++y) {
      for (int x = 0; x < remaining.width(); ++x) {
        if (!remaining.at(x, y)) continue;
        bool boundary = false;
        for (int ddy = -1; ddy <= 1 && !boundary; ++ddy)
          for (int ddx = -1; ddx <= 1 && !boundary; ++ddx)
            if ((ddx || ddy) && !remaining.test(x + ddx, y + ddy)) boundary = true;
        if (boundary) peel.emplace_back(x, y);
      }
    }
    for (auto [x, y] : peel) {
      border.set(x, y, true);
      remaining.set(x, y, false);
    }
  }
  return border;
}

TextAnnotation detect_text_heuristic(const RasterImage& img, const BinaryMask& fg,
                                     const SegmentConfig& config) {
  struct Candidate {
    Box box;
    double cy = 0;
  };

  int count = 0;
  std::vector<int32_t> ids = label_components(fg, &count, &img, config.color_tolerance);
  std::vector<Box> boxes(count);
  std::vector<long> sizes(count, 0);
  for (int y = 0; y < fg.height(); ++y)
    for (int x = 0; x < fg.width(); ++x) {
      int id = ids[size_t(y) * fg.width() + x];
      if (id < 0) continue;
      boxes[id].add(x, y);
      ++sizes[id];
    }

  std::vector<Candidate> candidates;
  for (int id = 0; id < count; ++id) {
    if (sizes[id] >= config.text_max_component_area) continue;
    BinaryMask window = extract_window(fg, ids, id, boxes[id]);
    double sw;
    try {
      sw = stroke_width(window);
    } catch (const Error&) {
      continue;
    }
    if (sw > config.line_width_threshold) continue;
    candidates.push_back({boxes[id], 0.5 * (boxes[id].min_y + boxes[id].max_y)});
  }

  // Group into rows by vertical center, then split rows on horizontal gaps.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.cy != b.cy) return a.cy < b.cy;
    return a.box.min_x < b.box.min_x;
  });

  std::vector<std::vector<const Candidate*>> rows;
  std::vector<char> used(candidates.size(), 0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (used[i]) continue;
    std::vector<const Candidate*> row{&candidates[i]};
    used[i] = 1;
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (used[j]) continue;
      double tol = config.text_align_tolerance *
                   std::max(candidates[i].box.height(), candidates[j].box.height());
      if (std::abs(candidates[j].cy - candidates[i].cy) <= tol) {
        row.push_back(&candidates[j]);
        used[j] = 1;
      }
    }
    rows.push_back(std::move(row));
  }

  TextAnnotation out;
  out.source = TextSource::heuristic;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const Candidate* a, const Candidate* b) { return a->box.min_x < b->box.min_x; });
    size_t start = 0;
    while (start < row.size()) {
      Box merged = row[start]->box;
      size_t member_count = 1;
      size_t next = start + 1;
      while (next < row.size()) {
        int max_h = std::max(merged.height(), row[next]->box.height());
        int gap = row[next]->box.min_x - merged.max_x - 1;
        if (gap > config.text_gap_factor * max_h) break;
        merged.add(row[next]->box.min_x, row[next]->box.min_y);
        merged.add(row[next]->box.max_x, row[next]->box.max_y);
        ++member_count;
        ++next;
      }
      if (member_count >= 2)
        out.boxes.push_back(TextBox{merged.min_x, merged.min_y, merged.width(), merged.height()});
      start = next;
    }
  }
  return out;
}

MarkMap classify_marks(const RasterImage& img, const BinaryMask& fg, const TextAnnotation& text,
                       const SegmentConfig& config) {
  const int w = img.width();
  const int h = img.height();
  if (fg.width() != w || fg.height() != h)
    raise(Errc::invalid_argument, "image and foreground mask dimensions differ");

  MarkMap mm(w, h);
  int next_id = 0;

  // Text boxes win outright; boxes are intersected with the foreground.
  for (const TextBox& box : text.boxes) {
    int x0 = std::max(0, box.x), y0 = std::max(0, box.y);
    int x1 = std::min(w - 1, box.x + box.w - 1), y1 = std::min(h - 1, box.y + box.h - 1);
    if (x0 > x1 || y0 > y1) continue;

    Box actual;
    long pixels = 0;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        if (!fg.at(x, y) || mm.label(x, y) != MarkLabel::background) continue;
        mm.set_label(x, y, MarkLabel::text);
        mm.set_component_id(x, y, next_id);
        actual.add(x, y);
        ++pixels;
      }
    if (pixels == 0) continue;

    BinaryMask window(actual.width(), actual.height());
    for (int y = actual.min_y; y <= actual.max_y; ++y)
      for (int x = actual.min_x; x <= actual.max_x; ++x)
        if (mm.component_id(x, y) == next_id) window.set(x - actual.min_x, y - actual.min_y, true);
    double sw = 1.0;
    try {
      sw = stroke_width(window);
    } catch (const Error&) {
    }
    mm.components().push_back(ComponentInfo{next_id, MarkLabel::text, actual.min_x, actual.min_y,
                                            actual.max_x, actual.max_y, pixels, sw});
    ++next_id;
  }

  // Remaining foreground: color-aware components.
  BinaryMask rest(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      rest.set(x, y, fg.at(x, y) && mm.label(x, y) == MarkLabel::background);

  int count = 0;
  std::vector<int32_t> ids = label_components(rest, &count, &img, config.color_tolerance);
  std::vector<Box> boxes(count);
  std::vector<long> sizes(count, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int id = ids[size_t(y) * w + x];
      if (id < 0) continue;
      boxes[id].add(x, y);
      ++sizes[id];
    }

  std::vector<int> mapped_id(count);
  for (int id = 0; id < count; ++id) {
    BinaryMask window = extract_window(rest, ids, id, boxes[id]);
    std::vector<double> dt = distance_transform(window);
    double max_dt = 0.0;
    for (double v : dt) max_dt = std::max(max_dt, v);
    double quick_width = 2.0 * max_dt - 1.0;

    MarkLabel label;
    double sw = quick_width;
    if (quick_width > config.line_width_threshold) {
      label = MarkLabel::area_mark;
    } else {
      try {
        sw = stroke_width(window, skeletonize(window));
      } catch (const Error&) {
        sw = quick_width;
      }
      label = sw <= config.line_width_threshold ? MarkLabel::line_mark : MarkLabel::area_mark;
    }

    mapped_id[id] = next_id;
    mm.components().push_back(ComponentInfo{next_id, label, boxes[id].min_x, boxes[id].min_y,
                                            boxes[id].max_x, boxes[id].max_y, sizes[id], sw});
    ++next_id;

    if (label == MarkLabel::area_mark) {
      BinaryMask border = inner_border(window, config.border_thickness);
      for (int y = 0; y < window.height(); ++y)
        for (int x = 0; x < window.width(); ++x) {
          if (!window.at(x, y)) continue;
          int gx = x + boxes[id].min_x, gy = y + boxes[id].min_y;
          mm.set_label(gx, gy,
                       border.at(x, y) ? MarkLabel::area_border : MarkLabel::area_mark);
          mm.set_component_id(gx, gy, mapped_id[id]);
        }
    } else {
      for (int y = boxes[id].min_y; y <= boxes[id].max_y; ++y)
        for (int x = boxes[id].min_x; x <= boxes[id].max_x; ++x)
          if (ids[size_t(y) * w + x] == id) {
            mm.set_label(x, y, MarkLabel::line_mark);
            mm.set_component_id(x, y, mapped_id[id]);
          }
    }
  }
  return mm;
}

TextAnnotation text_annotation_from_json(const std::string& json_text, int image_width,
                                         int image_height) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::invalid_annotation, std::string("annotation JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("boxes") || !j["boxes"].is_array())
    raise(Errc::invalid_annotation, "annotation JSON must be {\"boxes\": [...]}");

  TextAnnotation out;
  out.source = TextSource::external;
  for (const auto& item : j["boxes"]) {
    if (!item.is_object() || !item.contains("x") || !item.contains("y") || !item.contains("w") ||
        !item.contains("h"))
      raise(Errc::invalid_annotation, "each box needs integer x, y, w, h");
    TextBox box{item["x"].get<int>(), item["y"].get<int>(), item["w"].get<int>(),
                item["h"].get<int>()};
    if (box.w < 1 || box.h < 1 || box.x < 0 || box.y < 0 || box.x + box.w > image_width ||
        box.y + box.h > image_height)
      raise(Errc::invalid_annotation,
            "box (" + std::to_string(box.x) + "," + std::to_string(box.y) + "," +
                std::to_string(box.w) + "," + std::to_string(box.h) + ") outside image bounds");
    out.boxes.push_back(box);
  }
  return out;
}

std::string text_annotation_to_json(const TextAnnotation& annotation) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const TextBox& b : annotation.boxes)
    boxes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
  nlohmann::json j{{"boxes", boxes}};
  return j.dump();
}

}  // namespace privshade
