#include "gaze/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gaze/errors.hpp"

namespace gaze {

namespace {
constexpr double kQFloor = 1e-12;
}

AttentionMap groundtruth_map(uint32_t label, std::size_t grid_side, double epsilon) {
  const std::size_t cells = grid_side * grid_side;
  if (label >= cells) {
    throw validation_error("groundtruth_map: label " + std::to_string(label) +
                           " out of range for K=" + std::to_string(grid_side));
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw validation_error("groundtruth_map: epsilon must be in (0, 1]");
  }
  AttentionMap map;
  map.probs.assign(cells, epsilon / static_cast<double>(cells));
  map.probs[label] += 1.0 - epsilon;
  return map;
}

double kl_divergence(const AttentionMap& p, const AttentionMap& q) {
  if (p.probs.size() != q.probs.size()) {
    throw validation_error("kl_divergence: length mismatch (" +
                           std::to_string(p.probs.size()) + " vs " +
                           std::to_string(q.probs.size()) + ")");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    if (p.probs[i] == 0.0) continue;
    kl += p.probs[i] * std::log(p.probs[i] / std::max(q.probs[i], kQFloor));
  }
  // Gibbs' inequality guarantees >= 0 for valid maps; clamp rounding dust.
  return std::max(kl, 0.0);
}

std::size_t argmax_index(const Vector& values) {
  if (values.empty()) throw validation_error("argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

EvalReport evaluate(const ModelParams& model, const LabeledSequence& test, double epsilon) {
  return evaluate_dataset(model, std::vector<LabeledSequence>{test}, epsilon);
}

EvalReport evaluate_dataset(const ModelParams& model,
                            const std::vector<LabeledSequence>& test, double epsilon) {
  std::size_t total_frames = 0;
  for (const LabeledSequence& seq : test) total_frames += seq.frames.size();
  if (total_frames == 0) throw validation_error("evaluate: empty test set");

  const std::size_t grid_side = model.config.grid_side;
  EvalReport report;
  report.per_frame_kl.reserve(total_frames);
  report.per_frame_correct.reserve(total_frames);

  AttentionMap uniform;
  uniform.probs.assign(grid_side * grid_side,
                       1.0 / static_cast<double>(grid_side * grid_side));
  // Same value for every label by symmetry of the smoothed one-hot.
  report.uniform_baseline_kl = kl_divergence(groundtruth_map(0, grid_side, epsilon), uniform);

  double kl_sum = 0.0;
  std::size_t correct = 0;
  for (const LabeledSequence& seq : test) {
    seq.validate();
    ForwardResult fwd = forward_sequence(model, seq.frames, nullptr, false);
    for (std::size_t t = 0; t < fwd.maps.size(); ++t) {
      AttentionMap truth = groundtruth_map(seq.labels[t], grid_side, epsilon);
      double kl = kl_divergence(truth, fwd.maps[t]);
      bool hit = argmax_index(fwd.maps[t].probs) == seq.labels[t];
      report.per_frame_kl.push_back(kl);
      report.per_frame_correct.push_back(hit);
      kl_sum += kl;
      correct += hit ? 1 : 0;
    }
  }
  report.frames_evaluated = total_frames;
  report.mean_kl = kl_sum / static_cast<double>(total_frames);
  report.top1_accuracy = static_cast<double>(correct) / static_cast<double>(total_frames);
  return report;
}

void write_report_text(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open report file " + path.string());
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "frames_evaluated: " << report.frames_evaluated << "\n";
  out << "mean_kl: " << fmt(report.mean_kl) << "\n";
  out << "uniform_baseline_kl: " << fmt(report.uniform_baseline_kl) << "\n";
  out << "top1_accuracy: " << fmt(report.top1_accuracy) << "\n";
  if (!out) throw io_error("failed writing report file " + path.string());
}

void write_per_frame_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open per-frame csv " + path.string());
  out << "frame,kl,correct\n";
  char buf[64];
  for (std::size_t i = 0; i < report.per_frame_kl.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", report.per_frame_kl[i]);
    out << i << "," << buf << "," << (report.per_frame_correct[i] ? 1 : 0) << "\n";
  }
  if (!out) throw io_error("failed writing per-frame csv " + path.string());
}

}  // namespace gaze
