#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gaze {

// Precondition violations: bad shapes, out-of-range values, malformed flag
// values. The CLI maps this to exit code 1.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable, truncated or malformed files. Carries the byte offset the
// parser had reached. The CLI maps this to exit code 2.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what), offset_(0) {}
  io_error(const std::string& what, uint64_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  uint64_t offset() const noexcept { return offset_; }

 private:
  uint64_t offset_;
};

}  // namespace gaze
