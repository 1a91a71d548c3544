// GZDS dataset container: magic "GZDS", version u32, sequence count u64, then
// per sequence: name (u32 length + bytes), T u64, K u64, D u64, labels as
// u32[T], features as row-major f64[T * K^2 * D], all little-endian.

#include "binary_io.hpp"
#include "gaze/data.hpp"

namespace gaze {

namespace {
constexpr char kMagic[4] = {'G', 'Z', 'D', 'S'};
constexpr uint32_t kVersion = 1;
// Guards against absurd counts from corrupt headers before allocating.
constexpr uint64_t kMaxReasonable = uint64_t{1} << 32;
}  // namespace

void save_dataset(const std::filesystem::path& path,
                  const std::vector<LabeledSequence>& sequences) {
  for (const LabeledSequence& seq : sequences) seq.validate();

  detail::BinaryWriter w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u64(sequences.size());
  for (const LabeledSequence& seq : sequences) {
    w.str(seq.name);
    w.u64(seq.frames.size());
    w.u64(seq.frames[0].grid_side);
    w.u64(seq.frames[0].depth);
    for (uint32_t label : seq.labels) w.u32(label);
    for (const FeatureCube& cube : seq.frames) {
      w.f64_array(cube.regions.data(), cube.regions.size());
    }
  }
  w.finish();
}

std::vector<LabeledSequence> load_dataset(const std::filesystem::path& path) {
  detail::BinaryReader r(path);
  r.expect_magic(kMagic);
  uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw io_error(r.path() + ": unsupported dataset version " + std::to_string(version), 4);
  }
  uint64_t count = r.u64("sequence count");
  if (count > kMaxReasonable) {
    throw io_error(r.path() + ": implausible sequence count " + std::to_string(count), 8);
  }

  std::vector<LabeledSequence> sequences;
  sequences.reserve(count);
  for (uint64_t s = 0; s < count; ++s) {
    LabeledSequence seq;
    seq.name = r.str("sequence name");
    uint64_t frames = r.u64("frame count");
    uint64_t k = r.u64("grid side");
    uint64_t d = r.u64("feature depth");
    if (frames == 0 || k == 0 || d == 0 || frames > kMaxReasonable || k * k * d > kMaxReasonable) {
      throw io_error(r.path() + ": implausible sequence header (T=" + std::to_string(frames) +
                         " K=" + std::to_string(k) + " D=" + std::to_string(d) + ")",
                     r.offset());
    }

    seq.labels.resize(frames);
    for (uint64_t t = 0; t < frames; ++t) {
      uint64_t at = r.offset();
      seq.labels[t] = r.u32("label");
      if (seq.labels[t] >= k * k) {
        throw io_error(r.path() + ": label " + std::to_string(seq.labels[t]) +
                           " out of range at frame " + std::to_string(t) + " of sequence '" +
                           seq.name + "'",
                       at);
      }
    }

    seq.frames.reserve(frames);
    for (uint64_t t = 0; t < frames; ++t) {
      uint64_t at = r.offset();
      FeatureCube cube;
      cube.grid_side = k;
      cube.depth = d;
      cube.regions = Matrix(k * k, d);
      r.f64_array(cube.regions.data(), cube.regions.size(), "features");
      for (std::size_t i = 0; i < cube.regions.size(); ++i) {
        if (!std::isfinite(cube.regions.data()[i])) {
          throw io_error(r.path() + ": non-finite feature in frame " + std::to_string(t) +
                             " of sequence '" + seq.name + "'",
                         at + i * 8);
        }
      }
      seq.frames.push_back(std::move(cube));
    }
    sequences.push_back(std::move(seq));
  }
  r.expect_end();
  return sequences;
}

}  // namespace gaze
