#include <charconv>
#include <fstream>
#include <sstream>

#include "gaze/data.hpp"
#include "gaze/errors.hpp"

namespace gaze {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string& raw, const std::string& csv, std::size_t line_no,
                   const char* column) {
  std::string s = trimmed(raw);
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw validation_error(csv + ":" + std::to_string(line_no) + ": bad " + column +
                           " value '" + raw + "'");
  }
  return value;
}

double parse_f64(const std::string& raw, const std::string& csv, std::size_t line_no,
                 const char* column) {
  std::string s = trimmed(raw);
  try {
    std::size_t used = 0;
    double value = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw validation_error(csv + ":" + std::to_string(line_no) + ": bad " + column +
                           " value '" + raw + "'");
  }
}

}  // namespace

std::vector<RawGazeRecord> parse_gaze_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open gaze csv " + path.string());
  const std::string name = path.string();

  std::string line;
  if (!std::getline(in, line)) throw io_error(name + ": empty file");
  if (trimmed(line) != "frame,participant,x,y,width,height") {
    throw validation_error(name + ": expected header 'frame,participant,x,y,width,height'");
  }

  std::vector<RawGazeRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw validation_error(name + ":" + std::to_string(line_no) + ": expected 6 fields, got " +
                             std::to_string(fields.size()));
    }
    RawGazeRecord rec;
    rec.frame = parse_u64(fields[0], name, line_no, "frame");
    rec.participant = parse_u64(fields[1], name, line_no, "participant");
    rec.frame_width = static_cast<uint32_t>(parse_u64(fields[4], name, line_no, "width"));
    rec.frame_height = static_cast<uint32_t>(parse_u64(fields[5], name, line_no, "height"));
    if (rec.frame_width == 0 || rec.frame_height == 0) {
      throw validation_error(name + ":" + std::to_string(line_no) + ": zero frame size");
    }

    const bool x_empty = trimmed(fields[2]).empty();
    const bool y_empty = trimmed(fields[3]).empty();
    if (x_empty != y_empty) {
      throw validation_error(name + ":" + std::to_string(line_no) +
                             ": x and y must both be present or both empty");
    }
    if (!x_empty) {
      PixelFixation fix;
      fix.x = parse_f64(fields[2], name, line_no, "x");
      fix.y = parse_f64(fields[3], name, line_no, "y");
      // A present but out-of-frame fixation is corrupt input, never filled over.
      if (!(fix.x >= 0.0 && fix.x < rec.frame_width && fix.y >= 0.0 &&
            fix.y < rec.frame_height)) {
        throw validation_error(name + ":" + std::to_string(line_no) + ": fixation (" +
                               fields[2] + ", " + fields[3] + ") outside frame");
      }
      rec.fixation = fix;
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<std::pair<uint64_t, uint32_t>> parse_override_csv(
    const std::filesystem::path& path, std::size_t grid_side) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open override csv " + path.string());
  const std::string name = path.string();

  std::string line;
  if (!std::getline(in, line)) throw io_error(name + ": empty file");
  if (trimmed(line) != "frame,label") {
    throw validation_error(name + ": expected header 'frame,label'");
  }

  std::vector<std::pair<uint64_t, uint32_t>> overrides;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw validation_error(name + ":" + std::to_string(line_no) + ": expected 2 fields");
    }
    uint64_t frame = parse_u64(fields[0], name, line_no, "frame");
    auto label = static_cast<uint32_t>(parse_u64(fields[1], name, line_no, "label"));
    if (label >= grid_side * grid_side) {
      throw validation_error(name + ":" + std::to_string(line_no) + ": label " +
                             std::to_string(label) + " out of range for K=" +
                             std::to_string(grid_side));
    }
    overrides.emplace_back(frame, label);
  }
  return overrides;
}

}  // namespace gaze
