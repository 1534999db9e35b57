#pragma once

#include <stdexcept>
#include <string>

namespace privshade {

enum class Errc {
  decode_error,
  unsupported_format,
  io_error,
  degenerate_histogram,
  undefined_width,
  invalid_mask_size,
  invalid_width,
  incomplete_plan,
  invalid_contrast,
  invalid_preset,
  invalid_annotation,
  no_marks,
  range_error,
  invalid_config,
  invalid_argument,
};

/// Stable machine-readable name ("decode_error", ...) used in CLI error JSON.
const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace privshade
