#include "privshade/png_io.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "privshade/error.hpp"

namespace privshade {

namespace {

constexpr uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
constexpr long kMaxPixels = 1L << 28;

uint32_t read_u32(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

[[noreturn]] void decode_fail(size_t offset, const std::string& what) {
  raise(Errc::decode_error, what + " at offset " + std::to_string(offset));
}

uint8_t paeth(uint8_t a, uint8_t b, uint8_t c) {
  int p = int(a) + int(b) - int(c);
  int pa = std::abs(p - int(a));
  int pb = std::abs(p - int(b));
  int pc = std::abs(p - int(c));
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

std::vector<uint8_t> inflate_all(const std::vector<uint8_t>& in, size_t expected,
                                 size_t stream_offset) {
  std::vector<uint8_t> out(expected);
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) raise(Errc::decode_error, "zlib init failed");
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  size_t produced = out.size() - zs.avail_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected)
    decode_fail(stream_offset, "corrupt or truncated image data stream");
  return out;
}

uint8_t composite_over_white(uint8_t value, uint8_t alpha) {
  unsigned v = unsigned(alpha) * value + unsigned(255 - alpha) * 255;
  return uint8_t((v + 127) / 255);
}

void append_chunk(std::vector<uint8_t>& out, const char type[4], const uint8_t* data,
                  size_t size) {
  put_u32(out, static_cast<uint32_t>(size));
  size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  if (size) out.insert(out.end(), data, data + size);
  uLong crc = crc32(0, out.data() + type_pos, static_cast<uInt>(4 + size));
  put_u32(out, static_cast<uint32_t>(crc));
}

}  // namespace

RasterImage decode_png(const std::vector<uint8_t>& bytes) {
  return decode_png(bytes.data(), bytes.size());
}

RasterImage decode_png(const uint8_t* data, size_t size) {
  if (size < 8 || std::memcmp(data, kSignature, 8) != 0)
    decode_fail(0, "not a PNG (bad signature)");

  size_t pos = 8;
  bool have_header = false;
  bool done = false;
  uint32_t width = 0, height = 0;
  int color_type = 0;
  std::vector<uint8_t> idat;
  size_t first_idat_offset = 0;

  while (!done) {
    if (pos + 8 > size) decode_fail(pos, "truncated chunk header");
    uint32_t length = read_u32(data + pos);
    if (length > (1u << 30)) decode_fail(pos, "implausible chunk length");
    if (pos + 12 + size_t(length) > size) decode_fail(pos, "truncated chunk");
    const uint8_t* type = data + pos + 4;
    const uint8_t* payload = data + pos + 8;
    uint32_t stored_crc = read_u32(data + pos + 8 + length);
    uint32_t actual_crc =
        static_cast<uint32_t>(crc32(0, data + pos + 4, static_cast<uInt>(4 + length)));
    if (stored_crc != actual_crc) decode_fail(pos + 8 + length, "chunk CRC mismatch");

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (length != 13) decode_fail(pos, "bad IHDR length");
      width = read_u32(payload);
      height = read_u32(payload + 4);
      int bit_depth = payload[8];
      color_type = payload[9];
      int compression = payload[10];
      int filter = payload[11];
      int interlace = payload[12];
      if (width == 0 || height == 0) decode_fail(pos, "zero image dimension");
      if (long(width) * long(height) > kMaxPixels) decode_fail(pos, "image too large");
      if (bit_depth != 8)
        raise(Errc::unsupported_format,
              "unsupported bit depth " + std::to_string(bit_depth) + " (only 8-bit supported)");
      if (color_type == 3)
        raise(Errc::unsupported_format, "palette PNGs are not supported");
      if (color_type != 0 && color_type != 2 && color_type != 4 && color_type != 6)
        raise(Errc::unsupported_format, "unsupported color type " + std::to_string(color_type));
      if (compression != 0 || filter != 0) decode_fail(pos, "bad compression/filter method");
      if (interlace != 0)
        raise(Errc::unsupported_format, "interlaced PNGs are not supported");
      have_header = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      if (!have_header) decode_fail(pos, "IDAT before IHDR");
      if (idat.empty()) first_idat_offset = pos;
      idat.insert(idat.end(), payload, payload + length);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      done = true;
    }
    pos += 12 + length;
    if (!done && pos >= size) decode_fail(pos, "missing IEND");
  }

  if (!have_header) decode_fail(8, "missing IHDR");
  if (idat.empty()) decode_fail(pos, "missing IDAT");

  int channels = color_type == 0 ? 1 : color_type == 2 ? 3 : color_type == 4 ? 2 : 4;
  size_t stride = size_t(width) * channels;
  size_t raw_size = (stride + 1) * height;
  std::vector<uint8_t> raw = inflate_all(idat, raw_size, first_idat_offset);

  // Undo per-row filters in place.
  std::vector<uint8_t> prev_row(stride, 0);
  RasterImage img{int(width), int(height)};
  for (uint32_t y = 0; y < height; ++y) {
    uint8_t* row = raw.data() + size_t(y) * (stride + 1);
    uint8_t filter = row[0];
    uint8_t* cur = row + 1;
    switch (filter) {
      case 0:
        break;
      case 1:
        for (size_t i = channels; i < stride; ++i) cur[i] = uint8_t(cur[i] + cur[i - channels]);
        break;
      case 2:
        for (size_t i = 0; i < stride; ++i) cur[i] = uint8_t(cur[i] + prev_row[i]);
        break;
      case 3:
        for (size_t i = 0; i < stride; ++i) {
          unsigned left = i >= size_t(channels) ? cur[i - channels] : 0;
          cur[i] = uint8_t(cur[i] + (left + prev_row[i]) / 2);
        }
        break;
      case 4:
        for (size_t i = 0; i < stride; ++i) {
          uint8_t left = i >= size_t(channels) ? cur[i - channels] : 0;
          uint8_t up_left = i >= size_t(channels) ? prev_row[i - channels] : 0;
          cur[i] = uint8_t(cur[i] + paeth(left, prev_row[i], up_left));
        }
        break;
      default:
        decode_fail(first_idat_offset, "unknown row filter " + std::to_string(filter));
    }
    std::memcpy(prev_row.data(), cur, stride);

    for (uint32_t x = 0; x < width; ++x) {
      const uint8_t* px = cur + size_t(x) * channels;
      Rgb8 out;
      switch (color_type) {
        case 0:
          out = {px[0], px[0], px[0]};
          break;
        case 2:
          out = {px[0], px[1], px[2]};
          break;
        case 4: {
          uint8_t v = composite_over_white(px[0], px[1]);
          out = {v, v, v};
          break;
        }
        default: {
          out = {composite_over_white(px[0], px[3]), composite_over_white(px[1], px[3]),
                 composite_over_white(px[2], px[3])};
          break;
        }
      }
      img.at(int(x), int(y)) = out;
    }
  }
  return img;
}

std::vector<uint8_t> encode_png(const RasterImage& img) {
  const int width = img.width();
  const int height = img.height();
  size_t stride = size_t(width) * 3;

  std::vector<uint8_t> raw((stride + 1) * height);
  for (int y = 0; y < height; ++y) {
    uint8_t* row = raw.data() + size_t(y) * (stride + 1);
    row[0] = 0;  // filter None on every row keeps the stream deterministic
    for (int x = 0; x < width; ++x) {
      Rgb8 c = img.at(x, y);
      row[1 + size_t(x) * 3] = c.r;
      row[2 + size_t(x) * 3] = c.g;
      row[3 + size_t(x) * 3] = c.b;
    }
  }

  uLong bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> compressed(bound);
  uLongf out_size = bound;
  if (compress2(compressed.data(), &out_size, raw.data(), static_cast<uLong>(raw.size()), 6) !=
      Z_OK)
    raise(Errc::io_error, "zlib compression failed");
  compressed.resize(out_size);

  std::vector<uint8_t> out;
  out.reserve(compressed.size() + 128);
  out.insert(out.end(), kSignature, kSignature + 8);

  uint8_t ihdr[13];
  ihdr[0] = uint8_t(uint32_t(width) >> 24);
  ihdr[1] = uint8_t(uint32_t(width) >> 16);
  ihdr[2] = uint8_t(uint32_t(width) >> 8);
  ihdr[3] = uint8_t(width);
  ihdr[4] = uint8_t(uint32_t(height) >> 24);
  ihdr[5] = uint8_t(uint32_t(height) >> 16);
  ihdr[6] = uint8_t(uint32_t(height) >> 8);
  ihdr[7] = uint8_t(height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // color type RGB
  ihdr[10] = 0;  // compression
  ihdr[11] = 0;  // filter
  ihdr[12] = 0;  // interlace
  append_chunk(out, "IHDR", ihdr, sizeof ihdr);
  append_chunk(out, "IDAT", compressed.data(), compressed.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) raise(Errc::io_error, "read failed for " + path);
  return bytes;
}

void write_file_atomic(const std::string& path, const std::vector<uint8_t>& bytes) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) raise(Errc::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    raise(Errc::io_error, "rename to " + path + " failed: " + ec.message());
  }
}

void write_file_atomic(const std::string& path, const std::string& text) {
  write_file_atomic(path, std::vector<uint8_t>(text.begin(), text.end()));
}

RasterImage load_png(const std::string& path) { return decode_png(read_file(path)); }

void save_png(const std::string& path, const RasterImage& img) {
  write_file_atomic(path, encode_png(img));
}

}  // namespace privshade
