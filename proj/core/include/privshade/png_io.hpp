#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privshade/raster.hpp"

namespace privshade {

/// Decode an 8-bit RGB / RGBA / grayscale / gray+alpha PNG.
/// Alpha composites over opaque white; grayscale expands to RGB.
/// Malformed data raises Errc::decode_error with the byte offset;
/// palette/16-bit/interlaced inputs raise Errc::unsupported_format.
RasterImage decode_png(const std::vector<uint8_t>& bytes);
RasterImage decode_png(const uint8_t* data, size_t size);

/// Deterministic encode: fixed zlib settings, filter None, color type RGB.
/// Identical images produce identical bytes.
std::vector<uint8_t> encode_png(const RasterImage& img);

RasterImage load_png(const std::string& path);

/// Writes via temp file + rename in the destination directory.
void save_png(const std::string& path, const RasterImage& img);

std::vector<uint8_t> read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::vector<uint8_t>& bytes);
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace privshade
