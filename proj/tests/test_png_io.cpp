#include <doctest.h>

#include <zlib.h>

#include <cstring>
#include <random>

#include "privshade/corpus.hpp"
#include "privshade/error.hpp"
#include "privshade/png_io.hpp"

using namespace privshade;

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

void append_chunk(std::vector<uint8_t>& out, const char type[4],
                  const std::vector<uint8_t>& data) {
  put_u32(out, uint32_t(data.size()));
  size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uLong crc = crc32(0, out.data() + type_pos, uInt(4 + data.size()));
  put_u32(out, uint32_t(crc));
}

// Minimal PNG writer used as a test fixture so the decoder can be fed
// arbitrary color types, depths and interlace settings.
std::vector<uint8_t> make_png(uint32_t w, uint32_t h, int bit_depth, int color_type,
                              int interlace, const std::vector<uint8_t>& scanline_bytes) {
  std::vector<uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<uint8_t> ihdr;
  put_u32(ihdr, w);
  put_u32(ihdr, h);
  ihdr.push_back(uint8_t(bit_depth));
  ihdr.push_back(uint8_t(color_type));
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(uint8_t(interlace));
  append_chunk(out, "IHDR", ihdr);

  uLong bound = compressBound(uLong(scanline_bytes.size()));
  std::vector<uint8_t> compressed(bound);
  uLongf size = bound;
  REQUIRE(compress2(compressed.data(), &size, scanline_bytes.data(),
                    uLong(scanline_bytes.size()), 6) == Z_OK);
  compressed.resize(size);
  append_chunk(out, "IDAT", compressed);
  append_chunk(out, "IEND", {});
  return out;
}

RasterImage random_image(int w, int h, uint32_t seed) {
  std::mt19937 rng(seed);
  RasterImage img(w, h);
  for (auto& p : img.pixels())
    p = {uint8_t(rng() % 256), uint8_t(rng() % 256), uint8_t(rng() % 256)};
  return img;
}

}  // namespace

TEST_CASE("1x1 white RGB round trip") {
  RasterImage img(1, 1, {255, 255, 255});
  RasterImage back = decode_png(encode_png(img));
  CHECK(back == img);
}

TEST_CASE("fully transparent RGBA composites to white") {
  std::vector<uint8_t> row = {0, 0, 0, 0, 0};  // filter 0, rgba(0,0,0,0)
  RasterImage img = decode_png(make_png(1, 1, 8, 6, 0, row));
  CHECK(img.at(0, 0) == Rgb8{255, 255, 255});
}

TEST_CASE("half-transparent red composites over white") {
  std::vector<uint8_t> row = {0, 255, 0, 0, 128};
  RasterImage img = decode_png(make_png(1, 1, 8, 6, 0, row));
  CHECK(img.at(0, 0) == Rgb8{255, 127, 127});
}

TEST_CASE("grayscale expands to RGB") {
  std::vector<uint8_t> rows = {0, 7, 200, 0, 31, 255};  // two rows of two pixels
  RasterImage img = decode_png(make_png(2, 2, 8, 0, 0, rows));
  CHECK(img.at(0, 0) == Rgb8{7, 7, 7});
  CHECK(img.at(1, 0) == Rgb8{200, 200, 200});
  CHECK(img.at(0, 1) == Rgb8{31, 31, 31});
  CHECK(img.at(1, 1) == Rgb8{255, 255, 255});
}

TEST_CASE("decode(encode(img)) is the identity on random images") {
  for (auto [w, h] : {std::pair{1, 1}, {3, 2}, {17, 5}, {64, 64}, {2, 100}}) {
    RasterImage img = random_image(w, h, uint32_t(w * 1000 + h));
    CHECK(decode_png(encode_png(img)) == img);
  }
}

TEST_CASE("encode is deterministic") {
  RasterImage img = random_image(33, 21, 99);
  CHECK(encode_png(img) == encode_png(img));
}

TEST_CASE("100x100 white encodes and decodes to all-white") {
  RasterImage img(100, 100, {255, 255, 255});
  RasterImage back = decode_png(encode_png(img));
  for (const Rgb8& p : back.pixels()) CHECK(p == Rgb8{255, 255, 255});
}

TEST_CASE("corpus-generated chart survives the PNG round trip pixel-exact") {
  ChartSpec spec;
  spec.type = ChartType::bar;
  spec.style.canvas_width = 420;
  spec.style.canvas_height = 420;
  auto [img, gt] = generate(spec, 7);
  CHECK(decode_png(encode_png(img)) == img);
}

TEST_CASE("all five row filters decode correctly") {
  const int w = 9, h = 6, bpp = 3;
  RasterImage img = random_image(w, h, 4242);

  auto paeth = [](int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
  };

  std::vector<uint8_t> raw(size_t(w) * h * bpp);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Rgb8 c = img.at(x, y);
      raw[(size_t(y) * w + x) * bpp + 0] = c.r;
      raw[(size_t(y) * w + x) * bpp + 1] = c.g;
      raw[(size_t(y) * w + x) * bpp + 2] = c.b;
    }

  std::vector<uint8_t> scanlines;
  for (int y = 0; y < h; ++y) {
    int filter = y % 5;
    scanlines.push_back(uint8_t(filter));
    for (int i = 0; i < w * bpp; ++i) {
      int cur = raw[size_t(y) * w * bpp + i];
      int left = i >= bpp ? raw[size_t(y) * w * bpp + i - bpp] : 0;
      int up = y > 0 ? raw[size_t(y - 1) * w * bpp + i] : 0;
      int up_left = (y > 0 && i >= bpp) ? raw[size_t(y - 1) * w * bpp + i - bpp] : 0;
      int encoded;
      switch (filter) {
        case 0: encoded = cur; break;
        case 1: encoded = cur - left; break;
        case 2: encoded = cur - up; break;
        case 3: encoded = cur - (left + up) / 2; break;
        default: encoded = cur - paeth(left, up, up_left); break;
      }
      scanlines.push_back(uint8_t(encoded & 0xFF));
    }
  }

  RasterImage decoded = decode_png(make_png(w, h, 8, 2, 0, scanlines));
  CHECK(decoded == img);
}

TEST_CASE("malformed PNGs report the failing byte offset") {
  SUBCASE("bad signature") {
    std::vector<uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK_THROWS_WITH_AS(decode_png(junk), doctest::Contains("offset 0"), Error);
  }
  SUBCASE("corrupted chunk CRC") {
    RasterImage img(4, 4, {10, 20, 30});
    std::vector<uint8_t> bytes = encode_png(img);
    bytes[20] ^= 0xFF;  // inside IHDR payload
    try {
      decode_png(bytes);
      FAIL("expected decode error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::decode_error);
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  }
  SUBCASE("truncated file") {
    RasterImage img(4, 4);
    std::vector<uint8_t> bytes = encode_png(img);
    bytes.resize(bytes.size() / 2);
    CHECK_THROWS_AS(decode_png(bytes), Error);
  }
}

TEST_CASE("unsupported formats are rejected as such") {
  SUBCASE("16-bit depth") {
    std::vector<uint8_t> row(1 + 6, 0);
    try {
      decode_png(make_png(1, 1, 16, 2, 0, row));
      FAIL("expected unsupported_format");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unsupported_format);
    }
  }
  SUBCASE("palette color type") {
    std::vector<uint8_t> row = {0, 0};
    try {
      decode_png(make_png(1, 1, 8, 3, 0, row));
      FAIL("expected unsupported_format");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unsupported_format);
    }
  }
  SUBCASE("interlaced") {
    std::vector<uint8_t> row = {0, 1, 2, 3};
    try {
      decode_png(make_png(1, 1, 8, 2, 1, row));
      FAIL("expected unsupported_format");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unsupported_format);
    }
  }
}
