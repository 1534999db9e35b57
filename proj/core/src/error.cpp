#include "privshade/error.hpp"

namespace privshade {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::decode_error: return "decode_error";
    case Errc::unsupported_format: return "unsupported_format";
    case Errc::io_error: return "io_error";
    case Errc::degenerate_histogram: return "degenerate_histogram";
    case Errc::undefined_width: return "undefined_width";
    case Errc::invalid_mask_size: return "invalid_mask_size";
    case Errc::invalid_width: return "invalid_width";
    case Errc::incomplete_plan: return "incomplete_plan";
    case Errc::invalid_contrast: return "invalid_contrast";
    case Errc::invalid_preset: return "invalid_preset";
    case Errc::invalid_annotation: return "invalid_annotation";
    case Errc::no_marks: return "no_marks";
    case Errc::range_error: return "range_error";
    case Errc::invalid_config: return "invalid_config";
    case Errc::invalid_argument: return "invalid_argument";
  }
  return "error";
}

}  // namespace privshade
