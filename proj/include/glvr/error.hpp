#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glvr {

enum class ErrorKind { dimension, format, config, numeric, io };

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  DimensionError(const std::string& context, std::size_t expected, std::size_t actual);
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

enum class FormatFault { bad_magic, bad_version, truncated, inconsistent, invalid };

const char* to_string(FormatFault fault);

class FormatError : public Error {
 public:
  FormatError(FormatFault fault, const std::string& detail);
  FormatFault fault() const { return fault_; }

 private:
  FormatFault fault_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace glvr
