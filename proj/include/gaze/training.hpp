#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "gaze/data.hpp"
#include "gaze/model.hpp"

namespace gaze {

struct LossBreakdown {
  double cross_entropy = 0.0;
  double l2_penalty = 0.0;
  double total = 0.0;
};

// Cross-entropy of one-hot labels against the predicted maps, probabilities
// floored at 1e-12, plus gamma * sum(theta^2) over every parameter.
LossBreakdown loss(const std::vector<AttentionMap>& maps,
                   std::span<const uint32_t> labels, const ModelParams& params,
                   double gamma);

// Backpropagation through time over a forward cache. `frames` must be the
// sequence the cache was produced from.
Gradients backward(const StateCache& cache, std::span<const FeatureCube> frames,
                   std::span<const uint32_t> labels, const ModelParams& params,
                   double gamma);

// Central-difference derivative of the total loss along one flat parameter
// coordinate (for_each_param order). Uses only forward_sequence + loss, so it
// is an oracle independent of backward(). Dropout must be off (inference
// forward is used).
double finite_diff_grad(const ModelParams& model, std::span<const FeatureCube> frames,
                        std::span<const uint32_t> labels, double gamma,
                        std::size_t param_coordinate, double eps);

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::size_t step = 0;
  Gradients m;
  Gradients v;
  AdamHyper hyper;

  static AdamState create(const ModelParams& params, AdamHyper hyper = {});
};

// One bias-corrected Adam update on a flat buffer; `step` is 1-based.
void adam_update_buffer(std::span<double> theta, std::span<const double> grad,
                        std::span<double> m, std::span<double> v, const AdamHyper& hyper,
                        std::size_t step);

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state);

double gradient_global_norm(const Gradients& grads);
// Scales all gradients so the global norm is at most max_norm.
void clip_gradients(Gradients& grads, double max_norm);

struct TrainConfig {
  double gamma = 0.01;
  std::size_t max_iterations = 1000;
  std::size_t bptt_window = 30;
  double dropout_rate = 0.5;
  AdamHyper adam;
  uint64_t rng_seed = 1;
  std::size_t epochs = 1;
  double clip_norm = 5.0;
  double val_epsilon = 0.01;  // ground-truth smoothing for validation KL

  void validate() const;
};

struct CurvePoint {
  std::size_t iteration = 0;  // 1-based
  double loss = 0.0;
  double ce = 0.0;
  double l2 = 0.0;
  std::optional<double> val_kl;
};

struct TrainCurve {
  std::vector<CurvePoint> points;
};

struct TrainResult {
  ModelParams model;
  TrainCurve curve;
};

// Cuts each sequence into consecutive non-overlapping bptt_window chunks
// (tails shorter than the window are kept), shuffles them each epoch with the
// seeded rng, and runs one forward/backward/clip/adam update per chunk. Halts
// at max_iterations or when the epochs are exhausted, whichever comes first.
// Fully deterministic for a fixed seed. If `validation` is given, the mean
// validation KL is recorded every iteration.
TrainResult train(const std::vector<LabeledSequence>& dataset, ModelParams model,
                  const TrainConfig& cfg,
                  const std::vector<LabeledSequence>* validation = nullptr);

// CSV: header `iteration,loss,ce,l2,val_kl`, floats at 17 significant digits.
void write_curve_csv(const std::filesystem::path& path, const TrainCurve& curve);

}  // namespace gaze
