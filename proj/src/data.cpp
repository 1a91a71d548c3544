#include "gaze/data.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gaze/errors.hpp"

namespace gaze {

void SynthConfig::validate() const {
  if (grid_side < 1 || depth < 1) throw validation_error("synth config: K and D must be >= 1");
  if (num_sequences < 1) throw validation_error("synth config: need at least one sequence");
  if (frames_per_sequence < 1) throw validation_error("synth config: need at least one frame");
  if (!(signal_strength > 0.0)) throw validation_error("synth config: signal_strength must be > 0");
  if (!(noise_sigma >= 0.0)) throw validation_error("synth config: noise_sigma must be >= 0");
}

void LabeledSequence::validate() const {
  if (frames.size() != labels.size()) {
    throw validation_error("sequence '" + name + "': " + std::to_string(frames.size()) +
                           " frames vs " + std::to_string(labels.size()) + " labels");
  }
  if (frames.empty()) throw validation_error("sequence '" + name + "' is empty");
  const std::size_t k = frames[0].grid_side;
  const std::size_t d = frames[0].depth;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    if (frames[t].grid_side != k || frames[t].depth != d) {
      throw validation_error("sequence '" + name + "': frame " + std::to_string(t) +
                             " has inconsistent shape");
    }
    frames[t].validate();
    if (labels[t] >= k * k) {
      throw validation_error("sequence '" + name + "': label " + std::to_string(labels[t]) +
                             " out of range at frame " + std::to_string(t));
    }
  }
}

std::vector<PixelFixation> fill_missing(
    const std::vector<std::optional<PixelFixation>>& per_frame) {
  const std::size_t n = per_frame.size();
  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < n; ++i) {
    if (per_frame[i].has_value()) labeled.push_back(i);
  }
  if (labeled.empty()) throw validation_error("fill_missing: no labeled frames");

  std::vector<PixelFixation> out(n);
  std::size_t cursor = 0;  // index into `labeled` of the first entry >= i
  for (std::size_t i = 0; i < n; ++i) {
    while (cursor < labeled.size() && labeled[cursor] < i) ++cursor;
    bool has_next = cursor < labeled.size();
    bool has_prev = cursor > 0;
    std::size_t pick;
    if (has_next && labeled[cursor] == i) {
      pick = labeled[cursor];
    } else if (!has_prev) {
      pick = labeled[cursor];
    } else if (!has_next) {
      pick = labeled[cursor - 1];
    } else {
      std::size_t prev = labeled[cursor - 1];
      std::size_t next = labeled[cursor];
      // Equidistant picks the earlier frame.
      pick = (i - prev) <= (next - i) ? prev : next;
    }
    out[i] = *per_frame[pick];
  }
  return out;
}

uint32_t quantize(double x, double y, double width, double height, std::size_t grid_side) {
  if (!(x >= 0.0 && x < width && y >= 0.0 && y < height)) {
    throw validation_error("quantize: fixation (" + std::to_string(x) + ", " +
                           std::to_string(y) + ") outside frame " + std::to_string(width) +
                           "x" + std::to_string(height));
  }
  const double k = static_cast<double>(grid_side);
  auto cell = [&](double coord, double extent) {
    auto idx = static_cast<std::size_t>(std::floor(coord * k / extent));
    return std::min(idx, grid_side - 1);
  };
  return static_cast<uint32_t>(cell(y, height) * grid_side + cell(x, width));
}

uint32_t vote(const std::vector<uint32_t>& labels) {
  if (labels.empty()) throw validation_error("vote: empty ballot");
  std::map<uint32_t, std::size_t> counts;
  for (uint32_t label : labels) counts[label] += 1;
  uint32_t best = labels[0];
  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {  // ascending keys: ties keep smallest
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

std::pair<LabeledSequence, LabeledSequence> split(const LabeledSequence& seq,
                                                  double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw validation_error("split: fraction must be in (0, 1), got " +
                           std::to_string(train_fraction));
  }
  const std::size_t total = seq.frames.size();
  const auto train_count = static_cast<std::size_t>(
      std::floor(static_cast<double>(total) * train_fraction));
  if (train_count == 0 || train_count == total) {
    throw validation_error("split: sequence of " + std::to_string(total) +
                           " frames leaves an empty partition at fraction " +
                           std::to_string(train_fraction));
  }
  LabeledSequence train, test;
  train.name = seq.name + "/train";
  test.name = seq.name + "/test";
  train.frames.assign(seq.frames.begin(),
                      seq.frames.begin() + static_cast<std::ptrdiff_t>(train_count));
  train.labels.assign(seq.labels.begin(),
                      seq.labels.begin() + static_cast<std::ptrdiff_t>(train_count));
  test.frames.assign(seq.frames.begin() + static_cast<std::ptrdiff_t>(train_count),
                     seq.frames.end());
  test.labels.assign(seq.labels.begin() + static_cast<std::ptrdiff_t>(train_count),
                     seq.labels.end());
  return {std::move(train), std::move(test)};
}

std::vector<LabeledSequence> synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  const std::size_t k = cfg.grid_side;
  const std::size_t cells = k * k;

  std::vector<LabeledSequence> out;
  out.reserve(cfg.num_sequences);
  for (std::size_t s = 0; s < cfg.num_sequences; ++s) {
    LabeledSequence seq;
    seq.name = "synth" + std::to_string(s);
    seq.frames.reserve(cfg.frames_per_sequence);
    seq.labels.reserve(cfg.frames_per_sequence);

    // Walk starts at the grid center so the first label is the same for
    // every sequence drawn from one config.
    int64_t row = static_cast<int64_t>((k - 1) / 2);
    int64_t col = row;
    const auto max_cell = static_cast<int64_t>(k - 1);
    const auto step = static_cast<int64_t>(cfg.step_cells);

    for (std::size_t t = 0; t < cfg.frames_per_sequence; ++t) {
      if (t > 0 && step > 0) {
        row = std::clamp(row + rng.uniform_int(-step, step), int64_t{0}, max_cell);
        col = std::clamp(col + rng.uniform_int(-step, step), int64_t{0}, max_cell);
      }
      const auto target = static_cast<std::size_t>(row) * k + static_cast<std::size_t>(col);

      FeatureCube cube;
      cube.grid_side = k;
      cube.depth = cfg.depth;
      cube.regions = Matrix(cells, cfg.depth);
      if (cfg.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < cube.regions.size(); ++i) {
          cube.regions.data()[i] = rng.normal(0.0, cfg.noise_sigma);
        }
      }
      cube.regions(target, 0) += cfg.signal_strength;
      seq.frames.push_back(std::move(cube));
      seq.labels.push_back(static_cast<uint32_t>(target));
    }
    out.push_back(std::move(seq));
  }

  if (cfg.decouple_labels) {
    // Pure-noise labels: i.i.d. uniform cells, independent of the features.
    for (LabeledSequence& seq : out) {
      for (uint32_t& label : seq.labels) {
        label = static_cast<uint32_t>(rng.uniform_index(cells));
      }
    }
  }
  return out;
}

std::vector<uint32_t> preprocess_labels(
    const std::vector<RawGazeRecord>& records, std::size_t grid_side,
    const std::vector<std::pair<uint64_t, uint32_t>>& overrides) {
  if (records.empty()) throw validation_error("preprocess: no gaze records");

  uint64_t frame_count = 0;
  for (const RawGazeRecord& rec : records) frame_count = std::max(frame_count, rec.frame + 1);

  // Per participant: per-frame optional fixation plus the frame geometry.
  struct Track {
    std::vector<std::optional<PixelFixation>> fixations;
    uint32_t width = 0, height = 0;
  };
  std::map<uint64_t, Track> tracks;
  for (const RawGazeRecord& rec : records) {
    Track& track = tracks[rec.participant];
    if (track.fixations.empty()) {
      track.fixations.resize(frame_count);
      track.width = rec.frame_width;
      track.height = rec.frame_height;
    }
    if (rec.frame_width != track.width || rec.frame_height != track.height) {
      throw validation_error("preprocess: participant " + std::to_string(rec.participant) +
                             " has inconsistent frame geometry");
    }
    if (rec.fixation.has_value()) track.fixations[rec.frame] = rec.fixation;
  }

  // Fill gaps per participant, quantize, then vote per frame.
  std::vector<std::vector<uint32_t>> ballots(frame_count);
  for (auto& [participant, track] : tracks) {
    std::vector<PixelFixation> filled;
    try {
      filled = fill_missing(track.fixations);
    } catch (const validation_error&) {
      throw validation_error("preprocess: participant " + std::to_string(participant) +
                             " has no labeled frames");
    }
    for (uint64_t f = 0; f < frame_count; ++f) {
      ballots[f].push_back(
          quantize(filled[f].x, filled[f].y, track.width, track.height, grid_side));
    }
  }

  std::vector<uint32_t> labels(frame_count);
  for (uint64_t f = 0; f < frame_count; ++f) labels[f] = vote(ballots[f]);

  for (const auto& [frame, label] : overrides) {
    if (frame >= frame_count) {
      throw validation_error("override refers to frame " + std::to_string(frame) +
                             " but the video has " + std::to_string(frame_count) + " frames");
    }
    if (label >= grid_side * grid_side) {
      throw validation_error("override label " + std::to_string(label) + " out of range");
    }
    labels[frame] = label;
  }
  return labels;
}

}  // namespace gaze
