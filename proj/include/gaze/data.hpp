#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaze/model.hpp"

namespace gaze {

// T frames of feature cubes with one grid-cell fixation label per frame.
struct LabeledSequence {
  std::string name;
  std::vector<FeatureCube> frames;
  std::vector<uint32_t> labels;  // each in [0, K^2)

  void validate() const;
};

struct PixelFixation {
  double x = 0.0;
  double y = 0.0;
};

// One row of the gaze CSV. An absent fixation marks an unlabeled frame;
// a present but out-of-frame fixation is a validation error at parse time.
struct RawGazeRecord {
  uint64_t frame = 0;
  uint64_t participant = 0;
  std::optional<PixelFixation> fixation;
  uint32_t frame_width = 0;
  uint32_t frame_height = 0;
};

// Assigns every unlabeled frame the fixation of the nearest labeled frame by
// index distance; equidistant ties go to the earlier frame.
std::vector<PixelFixation> fill_missing(
    const std::vector<std::optional<PixelFixation>>& per_frame);

// Pixel coordinates -> grid cell index: row = floor(y*K/height),
// col = floor(x*K/width), both clamped to K-1; index = row*K + col.
uint32_t quantize(double x, double y, double width, double height, std::size_t grid_side);

// Plurality vote; ties broken by smallest index.
uint32_t vote(const std::vector<uint32_t>& labels);

// Temporal prefix split: first floor(T*fraction) frames train, rest test.
std::pair<LabeledSequence, LabeledSequence> split(const LabeledSequence& seq,
                                                  double train_fraction);

struct SynthConfig {
  std::size_t grid_side = 7;
  std::size_t depth = 8;
  std::size_t num_sequences = 10;
  std::size_t frames_per_sequence = 100;
  // Per-frame random-walk step: each axis moves by a uniform integer in
  // [-step_cells, step_cells], clamped to the grid. 0 keeps the target still.
  std::size_t step_cells = 1;
  double signal_strength = 1.0;
  double noise_sigma = 0.1;
  uint64_t rng_seed = 1;
  // When set, labels are redrawn i.i.d. uniform over the grid, independent of
  // the features (the signal walk stays in the features untouched).
  bool decouple_labels = false;

  void validate() const;
};

// Moving-target stand-in for CNN features: the walk starts at the grid
// center; each frame the target cell's channel 0 carries the signal on top
// of i.i.d. Gaussian noise everywhere. Label = target cell.
std::vector<LabeledSequence> synth_generate(const SynthConfig& cfg);

// Gaze CSV: header `frame,participant,x,y,width,height`; empty x,y = unlabeled.
std::vector<RawGazeRecord> parse_gaze_csv(const std::filesystem::path& path);

// Override CSV: header `frame,label`; applied after voting.
std::vector<std::pair<uint64_t, uint32_t>> parse_override_csv(
    const std::filesystem::path& path, std::size_t grid_side);

// The full preprocessing pipeline: per participant fill missing fixations,
// quantize to grid cells, vote across participants per frame, then apply
// manual overrides. Returns one label per frame.
std::vector<uint32_t> preprocess_labels(
    const std::vector<RawGazeRecord>& records, std::size_t grid_side,
    const std::vector<std::pair<uint64_t, uint32_t>>& overrides);

// GZDS dataset container (binary, little-endian); save/load is bit-exact.
void save_dataset(const std::filesystem::path& path,
                  const std::vector<LabeledSequence>& sequences);
std::vector<LabeledSequence> load_dataset(const std::filesystem::path& path);

}  // namespace gaze
