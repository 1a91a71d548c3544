#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gaze/data.hpp"
#include "gaze/model.hpp"

namespace gaze {

struct EvalReport {
  double mean_kl = 0.0;
  std::vector<double> per_frame_kl;
  std::vector<bool> per_frame_correct;
  double top1_accuracy = 0.0;
  double uniform_baseline_kl = 0.0;  // KL(groundtruth || uniform), label-independent
  std::size_t frames_evaluated = 0;
};

// Smoothed one-hot: (1 - epsilon) at the labeled cell plus epsilon/K^2
// everywhere. Keeps KL against imperfect predictions finite.
AttentionMap groundtruth_map(uint32_t label, std::size_t grid_side, double epsilon);

// KL(p || q) in nats, ground truth first; q floored at 1e-12, 0 log 0 = 0.
double kl_divergence(const AttentionMap& p, const AttentionMap& q);

// Lowest index wins ties.
std::size_t argmax_index(const Vector& values);

// Runs the model in inference mode over the sequence; per frame records
// KL(groundtruth || prediction) and whether the argmax hits the label.
EvalReport evaluate(const ModelParams& model, const LabeledSequence& test, double epsilon);

// Same, merged over several sequences (frames indexed in dataset order).
EvalReport evaluate_dataset(const ModelParams& model,
                            const std::vector<LabeledSequence>& test, double epsilon);

// `key: value` lines.
void write_report_text(const std::filesystem::path& path, const EvalReport& report);
// CSV: `frame,kl,correct`.
void write_per_frame_csv(const std::filesystem::path& path, const EvalReport& report);

}  // namespace gaze
