#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glvr/tensor.hpp"

namespace glvr {

inline constexpr std::array<std::uint8_t, 4> kTensorMagic{'G', 'L', 'V', 'T'};
inline constexpr std::array<std::uint8_t, 4> kCheckpointMagic{'G', 'L', 'V', 'R'};
inline constexpr std::uint32_t kFormatVersion = 1;

/// Little-endian encoder.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void raw(std::span<const std::uint8_t> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

/// Little-endian decoder; every read past the end throws FormatError(truncated).
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();

  /// Checks the 4-byte magic and the version word.
  void header(const std::array<std::uint8_t, 4>& magic, std::string_view format);
  /// Throws truncated with expected/actual byte counts unless `n` more bytes exist.
  void require(std::size_t n, std::string_view what) const;

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

/// Maps [-1, 1] to a byte by round-half-up of (v + 1) * 127.5, clamped to [0, 255].
std::uint8_t to_pixel(double v);

inline constexpr double kPixelRangeTolerance = 1e-6;

/// Binary PGM (P5) for a rank-2 [H x W] tensor, PPM (P6) for [3 x H x W].
std::vector<std::uint8_t> encode_image(const Tensor& image);
void write_image_pgm(const std::filesystem::path& path, const Tensor& image);

}  // namespace glvr
