#include "privshade/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include <nlohmann/json.hpp>

#include "privshade/error.hpp"

namespace privshade {

namespace {

constexpr double kPi = 3.14159265358979323846;

// --- deterministic helpers (no libm, identical bits everywhere) ----------

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(uint64_t& state) {
  return double(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Taylor sine on a range-reduced argument; plain arithmetic only, so the
// result does not depend on the platform's libm.
double det_sin(double x) {
  x = std::fmod(x, 2.0 * kPi);
  if (x > kPi) x -= 2.0 * kPi;
  if (x < -kPi) x += 2.0 * kPi;
  double x2 = x * x;
  double term = x;
  double sum = x;
  for (int k = 1; k <= 11; ++k) {
    term *= -x2 / double((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

double det_cos(double x) { return det_sin(x + kPi / 2.0); }

// --- 5x7 bitmap font ------------------------------------------------------

struct Glyph {
  char ch;
  const char* rows[7];
};

constexpr Glyph kFont[] = {
    {'A', {" ### ", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"}},
    {'B', {"#### ", "#   #", "#   #", "#### ", "#   #", "#   #", "#### "}},
    {'C', {" ### ", "#   #", "#    ", "#    ", "#    ", "#   #", " ### "}},
    {'D', {"#### ", "#   #", "#   #", "#   #", "#   #", "#   #", "#### "}},
    {'E', {"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#####"}},
    {'F', {"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#    "}},
    {'G', {" ### ", "#   #", "#    ", "# ###", "#   #", "#   #", " ### "}},
    {'H', {"#   #", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"}},
    {'I', {" ### ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "}},
    {'J', {"  ###", "   # ", "   # ", "   # ", "   # ", "#  # ", " ##  "}},
    {'K', {"#   #", "#  # ", "# #  ", "##   ", "# #  ", "#  # ", "#   #"}},
    {'L', {"#    ", "#    ", "#    ", "#    ", "#    ", "#    ", "#####"}},
    {'M', {"#   #", "## ##", "# # #", "# # #", "#   #", "#   #", "#   #"}},
    {'N', {"#   #", "##  #", "# # #", "#  ##", "#   #", "#   #", "#   #"}},
    {'O', {" ### ", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "}},
    {'P', {"#### ", "#   #", "#   #", "#### ", "#    ", "#    ", "#    "}},
    {'Q', {" ### ", "#   #", "#   #", "#   #", "# # #", "#  # ", " ## #"}},
    {'R', {"#### ", "#   #", "#   #", "#### ", "# #  ", "#  # ", "#   #"}},
    {'S', {" ####", "#    ", "#    ", " ### ", "    #", "    #", "#### "}},
    {'T', {"#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  "}},
    {'U', {"#   #", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "}},
    {'V', {"#   #", "#   #", "#   #", "#   #", "#   #", " # # ", "  #  "}},
    {'W', {"#   #", "#   #", "#   #", "# # #", "# # #", "## ##", "#   #"}},
    {'X', {"#   #", "#   #", " # # ", "  #  ", " # # ", "#   #", "#   #"}},
    {'Y', {"#   #", "#   #", " # # ", "  #  ", "  #  ", "  #  ", "  #  "}},
    {'Z', {"#####", "    #", "   # ", "  #  ", " #   ", "#    ", "#####"}},
    {'0', {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "}},
    {'1', {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "}},
    {'2', {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"}},
    {'3', {" ### ", "#   #", "    #", "  ## ", "    #", "#   #", " ### "}},
    {'4', {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "}},
    {'5', {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "}},
    {'6', {" ### ", "#    ", "#    ", "#### ", "#   #", "#   #", " ### "}},
    {'7', {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "}},
    {'8', {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "}},
    {'9', {" ### ", "#   #", "#   #", " ####", "    #", "    #", " ### "}},
};

const Glyph* find_glyph(char c) {
  for (const Glyph& g : kFont)
    if (g.ch == c) return &g;
  return nullptr;
}

const char* kCategoryNames[] = {"JAN", "FEB", "MAR", "APR", "MAY", "JUN",
                                "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};

// --- drawing surface -------------------------------------------------------

struct Surface {
  RasterImage img;
  std::vector<MarkLabel> labels;
  std::vector<int32_t> comp;
  int w, h;

  Surface(int width, int height, Rgb8 bg)
      : img(width, height, bg),
        labels(size_t(width) * height, MarkLabel::background),
        comp(size_t(width) * height, -1),
        w(width),
        h(height) {}

  void put(int x, int y, Rgb8 color, MarkLabel label, int id) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    size_t i = size_t(y) * w + x;
    img.at(x, y) = color;
    labels[i] = label;
    comp[i] = id;
  }

  void fill_rect(int x0, int y0, int x1, int y1, Rgb8 color, MarkLabel label, int id) {
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) put(x, y, color, label, id);
  }
};

struct Builder {
  Surface surface;
  std::vector<GtComponent> components;

  explicit Builder(const ChartStyle& style)
      : surface(style.canvas_width, style.canvas_height, style.background) {}

  int new_component(MarkLabel label, double stroke) {
    components.push_back(GtComponent{label, TextBox{0, 0, 0, 0}, 0, stroke});
    return int(components.size()) - 1;
  }
};

void draw_string(Builder& b, int x, int y, const std::string& text, int scale, Rgb8 color) {
  int cursor = x;
  int word_id = -1;
  for (char c : text) {
    if (c == ' ') {
      cursor += 6 * scale;
      word_id = -1;
      continue;
    }
    const Glyph* g = find_glyph(c);
    if (g) {
      if (word_id < 0) word_id = b.new_component(MarkLabel::text, double(scale));
      for (int row = 0; row < 7; ++row)
        for (int col = 0; col < 5; ++col)
          if (g->rows[row][col] == '#')
            b.surface.fill_rect(cursor + col * scale, y + row * scale, cursor + col * scale + scale - 1,
                                y + row * scale + scale - 1, color, MarkLabel::text, word_id);
    }
    cursor += 6 * scale;
  }
}

int string_width(const std::string& text, int scale) {
  if (text.empty()) return 0;
  return int(text.size()) * 6 * scale - scale;
}

void draw_segment(Builder& b, int x1, int y1, int x2, int y2, int width, Rgb8 color,
                  MarkLabel label, int id) {
  long abx = x2 - x1, aby = y2 - y1;
  long ab2 = abx * abx + aby * aby;
  int r = (width + 1) / 2 + 1;
  int x0 = std::min(x1, x2) - r, xe = std::max(x1, x2) + r;
  int y0 = std::min(y1, y2) - r, ye = std::max(y1, y2) + r;
  long w2 = long(width) * width;
  for (int y = y0; y <= ye; ++y)
    for (int x = x0; x <= xe; ++x) {
      long apx = x - x1, apy = y - y1;
      long dot = apx * abx + apy * aby;
      bool inside;
      if (ab2 == 0 || dot <= 0) {
        inside = 4 * (apx * apx + apy * apy) <= w2;
      } else if (dot >= ab2) {
        long bpx = x - x2, bpy = y - y2;
        inside = 4 * (bpx * bpx + bpy * bpy) <= w2;
      } else {
        long ap2 = apx * apx + apy * apy;
        inside = 4 * (ap2 * ab2 - dot * dot) <= w2 * ab2;
      }
      if (inside) b.surface.put(x, y, color, label, id);
    }
}

struct Layout {
  int left, right, top, bottom;  // plot rectangle
};

Layout layout_for(const ChartStyle& s) {
  return Layout{140, s.canvas_width - 40, 120, s.canvas_height - 140};
}

void draw_axes(Builder& b, const ChartStyle& style, const Layout& l) {
  int aw = style.axis_width;
  int id_y = b.new_component(MarkLabel::line_mark, double(aw));
  b.surface.fill_rect(l.left - aw, l.top, l.left - 1, l.bottom + aw - 1, style.ink,
                      MarkLabel::line_mark, id_y);
  int id_x = b.new_component(MarkLabel::line_mark, double(aw));
  b.surface.fill_rect(l.left - aw, l.bottom, l.right - 1, l.bottom + aw - 1, style.ink,
                      MarkLabel::line_mark, id_x);
}

void draw_title(Builder& b, const ChartStyle& style, const std::string& title) {
  draw_string(b, 140, 44, title, style.font_scale + 1, style.ink);
}

std::vector<double> seeded_values(uint64_t& rng, int count, double lo, double hi) {
  std::vector<double> values(count);
  for (double& v : values) v = lo + (hi - lo) * uniform01(rng);
  return values;
}

void check_unit_range(const std::vector<double>& values) {
  for (double v : values)
    if (!(v > 0.0 && v <= 1.0))
      raise(Errc::range_error,
            "data value " + std::to_string(v) + " outside plot range (0, 1]");
}

// --- chart renderers -------------------------------------------------------

void render_bar(Builder& b, const ChartStyle& style, std::vector<double> values, uint64_t& rng) {
  Layout l = layout_for(style);
  if (values.empty()) values = seeded_values(rng, style.bar_count, 0.15, 1.0);
  check_unit_range(values);

  int n = int(values.size());
  int slot = (l.right - l.left) / n;
  int bar_w = std::max(8, slot * 3 / 5);
  const auto& palette = corpus_palette();

  for (int i = 0; i < n; ++i) {
    int height = std::max(4, int(std::lround(values[i] * (l.bottom - l.top - 20))));
    int x0 = l.left + i * slot + (slot - bar_w) / 2;
    int id = b.new_component(MarkLabel::area_mark, double(std::min(bar_w, height)));
    b.surface.fill_rect(x0, l.bottom - height, x0 + bar_w - 1, l.bottom - 1,
                        palette[i % palette.size()], MarkLabel::area_mark, id);
    std::string name = kCategoryNames[i % 12];
    int tw = string_width(name, style.font_scale);
    draw_string(b, x0 + (bar_w - tw) / 2, l.bottom + style.axis_width + 10, name,
                style.font_scale, style.ink);
  }
  draw_axes(b, style, l);
  draw_title(b, style, "BAR CHART");
}

void render_pie(Builder& b, const ChartStyle& style, std::vector<double> values, uint64_t& rng) {
  if (values.empty()) values = seeded_values(rng, style.pie_slices, 0.5, 1.5);
  double total = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) raise(Errc::range_error, "pie weights must be positive");
    total += v;
  }

  int cx = style.canvas_width / 2;
  int cy = style.canvas_height / 2 + 40;
  int radius = std::min(style.canvas_width, style.canvas_height) * 3 / 10;
  long r2 = long(radius) * radius;
  int n = int(values.size());

  // Slice boundary rays, counter-clockwise from 12 o'clock.
  std::vector<double> rx(n + 1), ry(n + 1);
  double cum = 0.0;
  for (int i = 0; i <= n; ++i) {
    double angle = -kPi / 2.0 + 2.0 * kPi * (i == n ? 1.0 : cum / total);
    rx[i] = det_cos(angle);
    ry[i] = det_sin(angle);
    if (i < n) cum += values[i];
  }

  auto cross = [](double ux, double uy, double vx, double vy) { return ux * vy - uy * vx; };
  auto in_sector = [&](int i, double px, double py) {
    double ax = rx[i], ay = ry[i], bx = rx[i + 1], by = ry[i + 1];
    if (cross(ax, ay, bx, by) >= 0.0)
      return cross(ax, ay, px, py) >= 0.0 && cross(bx, by, px, py) < 0.0;
    return !(cross(bx, by, px, py) >= 0.0 && cross(ax, ay, px, py) < 0.0);
  };

  const auto& palette = corpus_palette();
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i)
    ids[i] = b.new_component(MarkLabel::area_mark, double(radius));

  for (int y = cy - radius; y <= cy + radius; ++y)
    for (int x = cx - radius; x <= cx + radius; ++x) {
      long dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy > r2) continue;
      int slice = 0;
      if (dx != 0 || dy != 0) {
        for (int i = 0; i < n; ++i)
          if (in_sector(i, double(dx), double(dy))) {
            slice = i;
            break;
          }
      }
      b.surface.put(x, y, palette[slice % palette.size()], MarkLabel::area_mark, ids[slice]);
    }

  // Legend: stacked names at the top right.
  int lx = style.canvas_width - 240;
  for (int i = 0; i < n; ++i)
    draw_string(b, lx, 130 + i * 14 * style.font_scale, kCategoryNames[i % 12],
                style.font_scale, style.ink);
  draw_title(b, style, "PIE CHART");
}

void render_scatter(Builder& b, const ChartStyle& style, std::vector<double> values,
                    uint64_t& rng) {
  Layout l = layout_for(style);
  int n = style.scatter_points;
  if (!values.empty()) {
    if (values.size() % 2 != 0)
      raise(Errc::range_error, "scatter values must come as x,y pairs");
    check_unit_range(values);
    n = int(values.size()) / 2;
  }

  int cols = 4, rows = (n + cols - 1) / cols;
  int cell_w = (l.right - l.left) / cols;
  int cell_h = (l.bottom - l.top) / rows;
  int r = style.dot_radius;
  long rr = long(r) * r;
  const auto& palette = corpus_palette();

  for (int i = 0; i < n; ++i) {
    int cx, cy;
    if (!values.empty()) {
      cx = l.left + r + 2 + int(std::lround(values[2 * i] * (l.right - l.left - 2 * r - 4)));
      cy = l.bottom - r - 2 - int(std::lround(values[2 * i + 1] * (l.bottom - l.top - 2 * r - 4)));
    } else {
      int gx = i % cols, gy = i / cols;
      int jitter_x = std::max(1, cell_w / 2 - r - 8);
      int jitter_y = std::max(1, cell_h / 2 - r - 8);
      cx = l.left + gx * cell_w + cell_w / 2 +
           int(splitmix64(rng) % uint64_t(2 * jitter_x + 1)) - jitter_x;
      cy = l.top + gy * cell_h + cell_h / 2 +
           int(splitmix64(rng) % uint64_t(2 * jitter_y + 1)) - jitter_y;
    }
    int id = b.new_component(MarkLabel::area_mark, double(2 * r + 1));
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (long(dx) * dx + long(dy) * dy <= rr)
          b.surface.put(cx + dx, cy + dy, palette[i % palette.size()], MarkLabel::area_mark, id);
  }

  // Tick labels along the x axis.
  for (int i = 0; i < 4; ++i) {
    std::string name = std::to_string(20 + i * 20);
    int x = l.left + (l.right - l.left) * (i + 1) / 5;
    draw_string(b, x - string_width(name, style.font_scale) / 2,
                l.bottom + style.axis_width + 10, name, style.font_scale, style.ink);
  }
  draw_axes(b, style, l);
  draw_title(b, style, "SCATTER PLOT");
}

void render_line(Builder& b, const ChartStyle& style, std::vector<double> values, uint64_t& rng) {
  Layout l = layout_for(style);
  if (values.empty()) values = seeded_values(rng, style.line_points, 0.1, 0.95);
  check_unit_range(values);

  int n = int(values.size());
  if (n < 2) raise(Errc::range_error, "line charts need at least two points");
  std::vector<int> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = l.left + 24 + (l.right - l.left - 48) * i / (n - 1);
    ys[i] = l.bottom - 12 - int(std::lround(values[i] * (l.bottom - l.top - 36)));
  }

  const auto& palette = corpus_palette();
  int id = b.new_component(MarkLabel::line_mark, double(style.line_width));
  for (int i = 0; i + 1 < n; ++i)
    draw_segment(b, xs[i], ys[i], xs[i + 1], ys[i + 1], style.line_width, palette[3],
                 MarkLabel::line_mark, id);

  for (int i = 0; i < std::min(n, 6); ++i) {
    std::string name = kCategoryNames[i % 12];
    int x = l.left + (l.right - l.left) * (2 * i + 1) / 12;
    draw_string(b, x - string_width(name, style.font_scale) / 2,
                l.bottom + style.axis_width + 10, name, style.font_scale, style.ink);
  }
  draw_axes(b, style, l);
  draw_title(b, style, "LINE CHART");
}

}  // namespace

const std::vector<Rgb8>& corpus_palette() {
  // Distinct hues, all measured at L* within 0.2 of 50.
  static const std::vector<Rgb8> palette = {
      {182, 92, 92}, {133, 119, 48}, {22, 135, 100},
      {30, 127, 171}, {129, 108, 175}, {169, 103, 64},
  };
  return palette;
}

long GroundTruth::count(MarkLabel l) const {
  long n = 0;
  for (MarkLabel v : labels)
    if (v == l) ++n;
  return n;
}

std::pair<RasterImage, GroundTruth> generate(const ChartSpec& spec, uint64_t seed) {
  const ChartStyle& style = spec.style;
  if (style.canvas_width < 400 || style.canvas_height < 400)
    raise(Errc::invalid_argument, "corpus canvas must be at least 400x400");

  Builder b(style);
  uint64_t rng = seed ^ 0xC0FFEE123456789ULL;

  switch (spec.type) {
    case ChartType::bar: render_bar(b, style, spec.values, rng); break;
    case ChartType::pie: render_pie(b, style, spec.values, rng); break;
    case ChartType::scatter: render_scatter(b, style, spec.values, rng); break;
    case ChartType::line: render_line(b, style, spec.values, rng); break;
  }

  Surface& s = b.surface;

  // Carve the 2-px inner border out of every area component.
  for (size_t id = 0; id < b.components.size(); ++id) {
    if (b.components[id].label != MarkLabel::area_mark) continue;
    int min_x = s.w, min_y = s.h, max_x = -1, max_y = -1;
    for (int y = 0; y < s.h; ++y)
      for (int x = 0; x < s.w; ++x)
        if (s.comp[size_t(y) * s.w + x] == int(id)) {
          min_x = std::min(min_x, x);
          min_y = std::min(min_y, y);
          max_x = std::max(max_x, x);
          max_y = std::max(max_y, y);
        }
    if (max_x < 0) continue;
    BinaryMask window(max_x - min_x + 1, max_y - min_y + 1);
    for (int y = min_y; y <= max_y; ++y)
      for (int x = min_x; x <= max_x; ++x)
        if (s.comp[size_t(y) * s.w + x] == int(id)) window.set(x - min_x, y - min_y, true);
    BinaryMask border = inner_border(window, 2);
    for (int y = 0; y < window.height(); ++y)
      for (int x = 0; x < window.width(); ++x)
        if (border.at(x, y))
          s.labels[size_t(y + min_y) * s.w + (x + min_x)] = MarkLabel::area_border;
  }

  GroundTruth gt;
  gt.width = s.w;
  gt.height = s.h;
  gt.labels = s.labels;
  gt.background = style.background;
  gt.components = std::move(b.components);

  // Recompute bounding boxes and counts from the final surface (later
  // draws may have overwritten earlier components).
  std::vector<long> counts(gt.components.size(), 0);
  std::vector<int> bx0(gt.components.size(), s.w), by0(gt.components.size(), s.h);
  std::vector<int> bx1(gt.components.size(), -1), by1(gt.components.size(), -1);
  for (int y = 0; y < s.h; ++y)
    for (int x = 0; x < s.w; ++x) {
      int id = s.comp[size_t(y) * s.w + x];
      if (id < 0) continue;
      ++counts[id];
      bx0[id] = std::min(bx0[id], x);
      by0[id] = std::min(by0[id], y);
      bx1[id] = std::max(bx1[id], x);
      by1[id] = std::max(by1[id], y);
    }
  std::vector<GtComponent> kept;
  for (size_t id = 0; id < gt.components.size(); ++id) {
    if (counts[id] == 0) continue;
    GtComponent c = gt.components[id];
    c.pixel_count = counts[id];
    c.bbox = TextBox{bx0[id], by0[id], bx1[id] - bx0[id] + 1, by1[id] - by0[id] + 1};
    kept.push_back(c);
    if (c.label == MarkLabel::text) gt.text_boxes.push_back(c.bbox);
  }
  gt.components = std::move(kept);

  return {std::move(s.img), std::move(gt)};
}

std::string ground_truth_to_json(const GroundTruth& gt) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const TextBox& b : gt.text_boxes)
    boxes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});

  nlohmann::json comps = nlohmann::json::array();
  for (const GtComponent& c : gt.components)
    comps.push_back({{"label", mark_label_name(c.label)},
                     {"bbox", {{"x", c.bbox.x}, {"y", c.bbox.y}, {"w", c.bbox.w}, {"h", c.bbox.h}}},
                     {"pixel_count", c.pixel_count},
                     {"stroke_width", c.stroke_width}});

  nlohmann::json j{{"width", gt.width},
                   {"height", gt.height},
                   {"background", {gt.background.r, gt.background.g, gt.background.b}},
                   {"text_boxes", boxes},
                   {"components", comps},
                   {"label_colors",
                    {{"background", {255, 255, 255}},
                     {"area_mark", {200, 60, 60}},
                     {"area_border", {60, 60, 200}},
                     {"line_mark", {60, 160, 60}},
                     {"text", {160, 60, 160}}}}};
  return j.dump(2);
}

RasterImage ground_truth_to_label_image(const GroundTruth& gt) {
  RasterImage out(gt.width, gt.height, {255, 255, 255});
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x) {
      switch (gt.label(x, y)) {
        case MarkLabel::background: break;
        case MarkLabel::area_mark: out.at(x, y) = {200, 60, 60}; break;
        case MarkLabel::area_border: out.at(x, y) = {60, 60, 200}; break;
        case MarkLabel::line_mark: out.at(x, y) = {60, 160, 60}; break;
        case MarkLabel::text: out.at(x, y) = {160, 60, 160}; break;
      }
    }
  return out;
}

}  // namespace privshade
