#include <cmath>
#include <cstdio>
#include <fstream>

#include "gaze/errors.hpp"
#include "gaze/evaluation.hpp"
#include "gaze/training.hpp"

namespace gaze {

void TrainConfig::validate() const {
  if (!(gamma >= 0.0)) throw validation_error("train config: gamma must be >= 0");
  if (max_iterations < 1) throw validation_error("train config: max_iterations must be >= 1");
  if (bptt_window < 1) throw validation_error("train config: bptt_window must be >= 1");
  if (epochs < 1) throw validation_error("train config: epochs must be >= 1");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw validation_error("train config: dropout_rate must be in [0, 1)");
  }
  if (!(clip_norm > 0.0)) throw validation_error("train config: clip_norm must be > 0");
  if (!(adam.lr > 0.0)) throw validation_error("train config: learning rate must be > 0");
}

namespace {

struct Window {
  std::size_t sequence;
  std::size_t start;
  std::size_t length;
};

}  // namespace

TrainResult train(const std::vector<LabeledSequence>& dataset, ModelParams model,
                  const TrainConfig& cfg, const std::vector<LabeledSequence>* validation) {
  cfg.validate();
  if (dataset.empty()) throw validation_error("train: empty dataset");
  for (const LabeledSequence& seq : dataset) seq.validate();
  model.config.dropout_rate = cfg.dropout_rate;
  model.validate_shapes();

  // Consecutive non-overlapping windows; a short tail still trains.
  std::vector<Window> windows;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const std::size_t frames = dataset[s].frames.size();
    for (std::size_t start = 0; start < frames; start += cfg.bptt_window) {
      windows.push_back({s, start, std::min(cfg.bptt_window, frames - start)});
    }
  }

  Rng rng(cfg.rng_seed);
  AdamState adam = AdamState::create(model, cfg.adam);
  TrainResult result;
  std::size_t iteration = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs && iteration < cfg.max_iterations; ++epoch) {
    // Fisher-Yates with the run's own rng keeps the whole loop seeded.
    for (std::size_t i = windows.size(); i > 1; --i) {
      std::size_t j = rng.uniform_index(i);
      std::swap(windows[i - 1], windows[j]);
    }

    for (const Window& window : windows) {
      if (iteration >= cfg.max_iterations) break;
      const LabeledSequence& seq = dataset[window.sequence];
      std::span<const FeatureCube> frames(seq.frames.data() + window.start, window.length);
      std::span<const uint32_t> labels(seq.labels.data() + window.start, window.length);

      ForwardResult fwd = forward_sequence(model, frames, &rng, true);
      LossBreakdown lb = loss(fwd.maps, labels, model, cfg.gamma);
      if (!std::isfinite(lb.total)) {
        throw validation_error("train: loss diverged at iteration " +
                               std::to_string(iteration + 1));
      }
      Gradients grads = backward(fwd.cache, frames, labels, model, cfg.gamma);
      clip_gradients(grads, cfg.clip_norm);
      adam_step(model, grads, adam);

      ++iteration;
      CurvePoint point;
      point.iteration = iteration;
      point.loss = lb.total;
      point.ce = lb.cross_entropy;
      point.l2 = lb.l2_penalty;
      if (validation != nullptr) {
        point.val_kl = evaluate_dataset(model, *validation, cfg.val_epsilon).mean_kl;
      }
      result.curve.points.push_back(point);
    }
  }

  result.model = std::move(model);
  return result;
}

void write_curve_csv(const std::filesystem::path& path, const TrainCurve& curve) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open curve csv " + path.string());
  out << "iteration,loss,ce,l2,val_kl\n";
  char buf[256];
  for (const CurvePoint& p : curve.points) {
    int n = std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,", p.iteration, p.loss,
                          p.ce, p.l2);
    out.write(buf, n);
    if (p.val_kl.has_value()) {
      n = std::snprintf(buf, sizeof(buf), "%.17g", *p.val_kl);
      out.write(buf, n);
    }
    out << "\n";
  }
  if (!out) throw io_error("failed writing curve csv " + path.string());
}

}  // namespace gaze
