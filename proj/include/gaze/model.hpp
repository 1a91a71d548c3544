#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaze/tensor.hpp"

namespace gaze {

// One frame's grid of per-region feature vectors. Row i of `regions` holds
// the D features of grid cell i (cells row-major over the K x K grid).
struct FeatureCube {
  std::size_t grid_side = 0;  // K
  std::size_t depth = 0;      // D
  Matrix regions;             // K^2 x D

  std::size_t region_count() const { return grid_side * grid_side; }
  void validate() const;
};

// Probability distribution over the K^2 grid cells.
struct AttentionMap {
  Vector probs;
  void validate() const;  // entries >= 0, sum within 1e-6 of 1
};

// One LSTM layer. The four gates are computed by a single affine map over
// the concatenated (h_prev, x); gate row blocks are ordered i, f, o, g.
struct LstmLayerParams {
  Matrix weight;  // 4H x (H + input_width)
  Vector bias;    // 4H
};

struct AttentionParams {
  Matrix w_h;  // K^2 x H, row i scores cell i against the hidden state
  Matrix w_c;  // K^2 x D, row i scores cell i against the frame context
};

// Two-layer perceptron: tanh hidden layer of width H, linear output of width H.
struct InitMlpParams {
  Matrix w1;  // H x D
  Vector b1;  // H
  Matrix w2;  // H x H
  Vector b2;  // H
};

// State-initialization networks for h0 and c0.
struct InitNetParams {
  InitMlpParams h_net;
  InitMlpParams c_net;
};

struct ModelConfig {
  std::size_t grid_side = 7;   // K
  std::size_t depth = 0;       // D
  std::size_t hidden = 64;     // H
  std::size_t num_layers = 1;  // 1 or 2
  double dropout_rate = 0.5;

  std::size_t region_count() const { return grid_side * grid_side; }
  void validate() const;
};

struct ModelParams {
  ModelConfig config;
  std::vector<LstmLayerParams> layers;
  AttentionParams attention;
  InitNetParams init;

  // Visits every parameter buffer in the fixed checkpoint order:
  // lstm<l>.weight, lstm<l>.bias per layer, attention.w_h, attention.w_c,
  // init_h.{w1,b1,w2,b2}, init_c.{w1,b1,w2,b2}.
  template <typename Fn>
  void for_each_param(Fn&& fn) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      std::string prefix = "lstm" + std::to_string(l);
      fn(prefix + ".weight", layers[l].weight.data(), layers[l].weight.size());
      fn(prefix + ".bias", layers[l].bias.data(), layers[l].bias.size());
    }
    fn("attention.w_h", attention.w_h.data(), attention.w_h.size());
    fn("attention.w_c", attention.w_c.data(), attention.w_c.size());
    const char* names[2] = {"init_h", "init_c"};
    InitMlpParams* nets[2] = {&init.h_net, &init.c_net};
    for (int i = 0; i < 2; ++i) {
      std::string prefix = names[i];
      fn(prefix + ".w1", nets[i]->w1.data(), nets[i]->w1.size());
      fn(prefix + ".b1", nets[i]->b1.data(), nets[i]->b1.size());
      fn(prefix + ".w2", nets[i]->w2.data(), nets[i]->w2.size());
      fn(prefix + ".b2", nets[i]->b2.data(), nets[i]->b2.size());
    }
  }

  template <typename Fn>
  void for_each_param(Fn&& fn) const {
    const_cast<ModelParams*>(this)->for_each_param(
        [&](const std::string& name, double* values, std::size_t n) {
          fn(name, static_cast<const double*>(values), n);
        });
  }

  std::size_t param_count() const;
  double squared_norm() const;      // sum of theta^2 over every parameter
  ModelParams zeros_like() const;   // same shapes, all values zero
  void validate_shapes() const;
};

// Gradients are shape-congruent with the parameters they differentiate.
using Gradients = ModelParams;

// Xavier-uniform weights, zero biases except the forget-gate block at 1.
ModelParams init_model(const ModelConfig& config, Rng& rng);

// ---- forward operations ----

// Double average over time steps and regions; input to the init networks.
Vector mean_pool(std::span<const FeatureCube> frames);

// Average over the K^2 region rows of one cube; the attention context.
Vector region_mean(const FeatureCube& cube);

// (h0, c0) from the two init MLPs.
std::pair<Vector, Vector> init_state(const InitNetParams& init, const Vector& pooled);

struct LstmStepCache {
  Vector input, h_prev, c_prev;          // operands
  Vector preact;                         // 4H pre-activations
  Vector gate_i, gate_f, gate_o, gate_g; // post-activation gates
  Vector c, tanh_c, h;
};

LstmStepCache lstm_step(const LstmLayerParams& layer, const Vector& h_prev,
                        const Vector& c_prev, const Vector& x);

// Attention head: logit_i = w_h[i] . h_top + w_c[i] . region_mean(next_cube),
// map = softmax(logits). The context is the region mean of the next frame,
// which is attention-independent.
AttentionMap attend(const AttentionParams& att, const Vector& h_top,
                    const FeatureCube& next_cube, Vector* logits_out = nullptr);

// Soft read: x = sum_i map_i * cube.row(i).
Vector blend(const AttentionMap& map, const FeatureCube& cube);

struct AttentionStepCache {
  Vector context;   // region mean of the frame being scored
  Vector h_source;  // hidden vector the head read (h0 or masked top h)
  Vector logits;
  AttentionMap map;
};

// Everything one LSTM update (one frame) touched, per layer.
struct UpdateCache {
  Vector x_blend;                      // layer-1 input
  std::vector<LstmStepCache> layers;
  std::vector<Vector> dropout_masks;   // per layer; empty when not training
  std::vector<Vector> h_masked;        // layer outputs after masking
};

struct StateCache {
  bool training = false;
  Vector pooled;
  Vector init_h_hidden, init_c_hidden;  // tanh activations inside the init MLPs
  Vector h0, c0;
  std::vector<AttentionStepCache> attention;  // size T
  std::vector<UpdateCache> updates;           // size T-1
};

struct ForwardResult {
  std::vector<AttentionMap> maps;  // one per frame
  StateCache cache;
};

// Unrolls the model over the frame sequence. Map t is predicted before frame
// t's features are blended: map 0 reads h0, map t>0 reads the masked top h
// after processing frame t-1. rng is required iff training (dropout masks).
ForwardResult forward_sequence(const ModelParams& model,
                               std::span<const FeatureCube> frames, Rng* rng,
                               bool training);

}  // namespace gaze
