#pragma once

// Little-endian binary file helpers shared by the GZDS and GZAT containers.
// The reader tracks its byte offset so parse errors can point at the spot.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gaze/errors.hpp"

namespace gaze::detail {

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw io_error("cannot open " + path.string() + " for writing");
  }

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }

  void u32(uint32_t v) { put_uint(v, 4); }
  void u64(uint64_t v) { put_uint(v, 8); }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

  void f64_array(const double* values, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) f64(values[i]);
  }

  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

  void finish() {
    out_.flush();
    if (!out_) throw io_error("failed writing " + path_.string());
  }

 private:
  void put_uint(uint64_t v, int width) {
    unsigned char buf[8];
    for (int i = 0; i < width; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    bytes(buf, static_cast<std::size_t>(width));
  }

  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path_ + " for reading");
    data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  uint64_t offset() const { return offset_; }
  uint64_t remaining() const { return data_.size() - offset_; }

  void bytes(void* out, std::size_t n, const char* what) {
    if (remaining() < n) {
      throw io_error(path_ + ": truncated file, expected " + std::to_string(n) +
                         " bytes of " + what,
                     offset_);
    }
    std::memcpy(out, data_.data() + offset_, n);
    offset_ += n;
  }

  uint32_t u32(const char* what) { return static_cast<uint32_t>(get_uint(4, what)); }
  uint64_t u64(const char* what) { return get_uint(8, what); }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  void f64_array(double* out, std::size_t n, const char* what) {
    uint64_t start = offset_;
    if (remaining() < n * 8) {
      throw io_error(path_ + ": truncated file, expected " + std::to_string(n) +
                         " doubles of " + what,
                     start);
    }
    for (std::size_t i = 0; i < n; ++i) {
      uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) {
        bits |= static_cast<uint64_t>(
                    static_cast<unsigned char>(data_[offset_ + static_cast<std::size_t>(b)]))
                << (8 * b);
      }
      offset_ += 8;
      out[i] = std::bit_cast<double>(bits);
    }
  }

  std::string str(const char* what) {
    uint32_t len = u32(what);
    if (remaining() < len) {
      throw io_error(path_ + ": truncated string for " + std::string(what), offset_);
    }
    std::string s(data_.data() + offset_, len);
    offset_ += len;
    return s;
  }

  void expect_magic(const char expected[4]) {
    char magic[4];
    bytes(magic, 4, "magic");
    if (std::memcmp(magic, expected, 4) != 0) {
      throw io_error(path_ + ": bad magic, expected \"" + std::string(expected, 4) + "\"", 0);
    }
  }

  void expect_end() {
    if (remaining() != 0) {
      throw io_error(path_ + ": " + std::to_string(remaining()) +
                         " trailing bytes after payload",
                     offset_);
    }
  }

  const std::string& path() const { return path_; }

 private:
  uint64_t get_uint(int width, const char* what) {
    unsigned char buf[8] = {0};
    bytes(buf, static_cast<std::size_t>(width), what);
    uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return v;
  }

  std::string path_;
  std::vector<char> data_;
  uint64_t offset_ = 0;
};

}  // namespace gaze::detail
