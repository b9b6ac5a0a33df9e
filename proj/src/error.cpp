#include "glvr/error.hpp"

namespace glvr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::format: return "format";
    case ErrorKind::config: return "config";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

const char* to_string(FormatFault fault) {
  switch (fault) {
    case FormatFault::bad_magic: return "bad magic";
    case FormatFault::bad_version: return "version mismatch";
    case FormatFault::truncated: return "truncated";
    case FormatFault::inconsistent: return "dimension inconsistency";
    case FormatFault::invalid: return "invalid";
  }
  return "unknown";
}

DimensionError::DimensionError(const std::string& context, std::size_t expected, std::size_t actual)
    : Error(ErrorKind::dimension, context + ": expected dimension " + std::to_string(expected) +
                                      ", got " + std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

FormatError::FormatError(FormatFault fault, const std::string& detail)
    : Error(ErrorKind::format, std::string(to_string(fault)) + ": " + detail), fault_(fault) {}

}  // namespace glvr
