#include "glvr/storage.hpp"

#include <algorithm>
#include <cstdint>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <unistd.h>

#include "glvr/error.hpp"

namespace glvr {

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteReader::require(std::size_t n, std::string_view what) const {
  if (remaining() < n) {
    throw FormatError(FormatFault::truncated,
                      std::string(what) + ": expected " + std::to_string(pos_ + n) +
                          " bytes, file has " + std::to_string(bytes_.size()));
  }
}

std::uint8_t ByteReader::u8() {
  require(1, "u8");
  return bytes_[pos_++];
}

std::uint32_t ByteReader::u32() {
  require(4, "u32");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  require(8, "u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

void ByteReader::header(const std::array<std::uint8_t, 4>& magic, std::string_view format) {
  if (remaining() < 4 || !std::equal(magic.begin(), magic.end(), bytes_.begin() + pos_)) {
    throw FormatError(FormatFault::bad_magic, "not a " + std::string(format) + " file");
  }
  pos_ += 4;
  const std::uint32_t version = u32();
  if (version != kFormatVersion) {
    throw FormatError(FormatFault::bad_version, std::string(format) + " version " +
                                                     std::to_string(version) + ", expected " +
                                                     std::to_string(kFormatVersion));
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  if (t.rank() == 0) throw FormatError(FormatFault::invalid, "rank-0 tensors cannot be stored");
  ByteWriter w;
  w.raw(kTensorMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) w.u32(static_cast<std::uint32_t>(d));
  for (double v : t.values()) w.f64(v);
  return std::move(w.bytes());
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.header(kTensorMagic, "GLVT");
  const std::uint32_t rank = r.u32();
  if (rank == 0) throw FormatError(FormatFault::invalid, "rank 0 is not allowed");
  r.require(std::size_t{rank} * 4, "tensor dims");
  std::vector<std::size_t> shape(rank);
  for (auto& d : shape) d = r.u32();
  std::size_t count = 1;
  for (auto d : shape) {
    if (__builtin_mul_overflow(count, d, &count) || count > (SIZE_MAX - r.position()) / 8) {
      throw FormatError(FormatFault::truncated, "tensor data: shape overflows addressable size, file has " +
                                                    std::to_string(r.position() + r.remaining()) + " bytes");
    }
  }
  r.require(count * 8, "tensor data");
  std::vector<double> data(count);
  for (auto& v : data) v = r.f64();
  if (r.remaining() != 0) {
    throw FormatError(FormatFault::inconsistent,
                      std::to_string(r.remaining()) + " trailing bytes after tensor data");
  }
  try {
    return Tensor(std::move(shape), std::move(data));
  } catch (const NumericError& e) {
    throw FormatError(FormatFault::invalid, e.what());
  }
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file_atomic(path, encode_tensor(t));
}

Tensor read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

std::uint8_t to_pixel(double v) {
  const double scaled = std::floor((v + 1.0) * 127.5 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

std::vector<std::uint8_t> encode_image(const Tensor& image) {
  std::size_t height = 0;
  std::size_t width = 0;
  bool color = false;
  if (image.rank() == 2) {
    height = image.dim(0);
    width = image.dim(1);
  } else if (image.rank() == 3 && image.dim(0) == 3) {
    color = true;
    height = image.dim(1);
    width = image.dim(2);
  } else {
    throw FormatError(FormatFault::invalid, "image must be [H x W] or [3 x H x W]");
  }
  for (double v : image.values()) {
    if (v < -1.0 - kPixelRangeTolerance || v > 1.0 + kPixelRangeTolerance) {
      throw FormatError(FormatFault::invalid, "pixel value " + std::to_string(v) + " outside [-1, 1]");
    }
  }
  const std::string header = std::string(color ? "P6" : "P5") + "\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto& data = image.data();
  const std::size_t plane = height * width;
  if (!color) {
    for (double v : data) out.push_back(to_pixel(v));
  } else {
    for (std::size_t p = 0; p < plane; ++p) {
      for (std::size_t c = 0; c < 3; ++c) out.push_back(to_pixel(data[c * plane + p]));
    }
  }
  return out;
}

void write_image_pgm(const std::filesystem::path& path, const Tensor& image) {
  write_file_atomic(path, encode_image(image));
}

}  // namespace glvr
