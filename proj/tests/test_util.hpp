#pragma once

// Shared builders for the test binaries: random models/sequences, a scratch
// directory helper, and small numeric utilities.

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gaze/data.hpp"
#include "gaze/model.hpp"
#include "gaze/rng.hpp"

namespace testutil {

inline gaze::FeatureCube random_cube(std::size_t grid, std::size_t depth, gaze::Rng& rng,
                                     double sigma = 1.0) {
  gaze::FeatureCube cube;
  cube.grid_side = grid;
  cube.depth = depth;
  cube.regions = gaze::Matrix(grid * grid, depth);
  for (std::size_t i = 0; i < cube.regions.size(); ++i) {
    cube.regions.data()[i] = rng.normal(0.0, sigma);
  }
  return cube;
}

inline std::vector<gaze::FeatureCube> random_frames(std::size_t count, std::size_t grid,
                                                    std::size_t depth, gaze::Rng& rng) {
  std::vector<gaze::FeatureCube> frames;
  for (std::size_t t = 0; t < count; ++t) frames.push_back(random_cube(grid, depth, rng));
  return frames;
}

inline std::vector<uint32_t> random_labels(std::size_t count, std::size_t cells,
                                           gaze::Rng& rng) {
  std::vector<uint32_t> labels(count);
  for (auto& label : labels) label = static_cast<uint32_t>(rng.uniform_index(cells));
  return labels;
}

inline gaze::ModelParams random_model(std::size_t grid, std::size_t depth,
                                      std::size_t hidden, std::size_t layers,
                                      uint64_t seed, double dropout = 0.0) {
  gaze::ModelConfig cfg;
  cfg.grid_side = grid;
  cfg.depth = depth;
  cfg.hidden = hidden;
  cfg.num_layers = layers;
  cfg.dropout_rate = dropout;
  gaze::Rng rng(seed);
  return gaze::init_model(cfg, rng);
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gazernn_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Relative-error scale used by every gradient comparison in the suite.
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(a) + std::abs(b));
}

}  // namespace testutil
