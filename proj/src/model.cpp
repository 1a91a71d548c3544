#include "gaze/model.hpp"

#include <cmath>

#include "gaze/errors.hpp"
#include "gaze/kernels.hpp"

namespace gaze {

void FeatureCube::validate() const {
  if (grid_side < 1 || depth < 1) {
    throw validation_error("feature cube needs K >= 1 and D >= 1, got K=" +
                           std::to_string(grid_side) + " D=" + std::to_string(depth));
  }
  if (regions.rows() != region_count() || regions.cols() != depth) {
    throw validation_error("feature cube shape mismatch: expected " +
                           std::to_string(region_count()) + "x" + std::to_string(depth) +
                           ", got " + std::to_string(regions.rows()) + "x" +
                           std::to_string(regions.cols()));
  }
  check_finite(regions.data(), regions.size(), "feature cube");
}

void AttentionMap::validate() const {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw validation_error("attention map has negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw validation_error("attention map sums to " + std::to_string(total));
  }
}

void ModelConfig::validate() const {
  if (grid_side < 1) throw validation_error("model config: grid_side must be >= 1");
  if (depth < 1) throw validation_error("model config: depth must be >= 1");
  if (hidden < 1) throw validation_error("model config: hidden size must be >= 1");
  if (num_layers < 1 || num_layers > 2) {
    throw validation_error("model config: num_layers must be 1 or 2, got " +
                           std::to_string(num_layers));
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw validation_error("model config: dropout_rate must be in [0, 1)");
  }
}

std::size_t ModelParams::param_count() const {
  std::size_t total = 0;
  for_each_param([&](const std::string&, const double*, std::size_t n) { total += n; });
  return total;
}

double ModelParams::squared_norm() const {
  const auto& k = kernels::active();
  double total = 0.0;
  for_each_param([&](const std::string&, const double* values, std::size_t n) {
    total += k.dot(values, values, n);
  });
  return total;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  z.for_each_param([](const std::string&, double* values, std::size_t n) {
    std::fill(values, values + n, 0.0);
  });
  return z;
}

void ModelParams::validate_shapes() const {
  config.validate();
  const std::size_t h = config.hidden;
  const std::size_t d = config.depth;
  const std::size_t cells = config.region_count();
  if (layers.size() != config.num_layers) {
    throw validation_error("model has " + std::to_string(layers.size()) +
                           " layers but config says " + std::to_string(config.num_layers));
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::size_t input_width = l == 0 ? d : h;
    if (layers[l].weight.rows() != 4 * h || layers[l].weight.cols() != h + input_width ||
        layers[l].bias.size() != 4 * h) {
      throw validation_error("lstm layer " + std::to_string(l) + " shape mismatch");
    }
  }
  if (attention.w_h.rows() != cells || attention.w_h.cols() != h ||
      attention.w_c.rows() != cells || attention.w_c.cols() != d) {
    throw validation_error("attention parameter shape mismatch");
  }
  for (const InitMlpParams* net : {&init.h_net, &init.c_net}) {
    if (net->w1.rows() != h || net->w1.cols() != d || net->b1.size() != h ||
        net->w2.rows() != h || net->w2.cols() != h || net->b2.size() != h) {
      throw validation_error("init network shape mismatch");
    }
  }
}

namespace {

void fill_xavier(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-a, a);
}

}  // namespace

ModelParams init_model(const ModelConfig& config, Rng& rng) {
  config.validate();
  const std::size_t h = config.hidden;
  const std::size_t d = config.depth;
  const std::size_t cells = config.region_count();

  ModelParams p;
  p.config = config;
  p.layers.resize(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    std::size_t input_width = l == 0 ? d : h;
    p.layers[l].weight = Matrix(4 * h, h + input_width);
    fill_xavier(p.layers[l].weight, h + input_width, 4 * h, rng);
    p.layers[l].bias = Vector(4 * h, 0.0);
    // Forget-gate bias starts at 1 so early memory is retained.
    for (std::size_t i = h; i < 2 * h; ++i) p.layers[l].bias[i] = 1.0;
  }
  p.attention.w_h = Matrix(cells, h);
  fill_xavier(p.attention.w_h, h, cells, rng);
  p.attention.w_c = Matrix(cells, d);
  fill_xavier(p.attention.w_c, d, cells, rng);
  for (InitMlpParams* net : {&p.init.h_net, &p.init.c_net}) {
    net->w1 = Matrix(h, d);
    fill_xavier(net->w1, d, h, rng);
    net->b1 = Vector(h, 0.0);
    net->w2 = Matrix(h, h);
    fill_xavier(net->w2, h, h, rng);
    net->b2 = Vector(h, 0.0);
  }
  return p;
}

Vector mean_pool(std::span<const FeatureCube> frames) {
  if (frames.empty()) throw validation_error("mean_pool of empty sequence");
  const auto& k = kernels::active();
  const std::size_t d = frames[0].depth;
  const std::size_t cells = frames[0].region_count();
  Vector pooled(d, 0.0);
  for (const FeatureCube& cube : frames) {
    if (cube.depth != d || cube.region_count() != cells) {
      throw validation_error("mean_pool: frames have inconsistent shapes");
    }
    for (std::size_t i = 0; i < cells; ++i) {
      k.axpy(1.0, cube.regions.row(i), pooled.data(), d);
    }
  }
  k.scale(1.0 / (static_cast<double>(frames.size()) * static_cast<double>(cells)),
          pooled.data(), d);
  return pooled;
}

Vector region_mean(const FeatureCube& cube) {
  const auto& k = kernels::active();
  Vector mean(cube.depth, 0.0);
  for (std::size_t i = 0; i < cube.region_count(); ++i) {
    k.axpy(1.0, cube.regions.row(i), mean.data(), cube.depth);
  }
  k.scale(1.0 / static_cast<double>(cube.region_count()), mean.data(), cube.depth);
  return mean;
}

namespace {

// hidden = tanh(w1 p + b1), out = w2 hidden + b2
Vector mlp_forward(const InitMlpParams& net, const Vector& input, Vector& hidden_out) {
  hidden_out = elementwise(Nonlinearity::tanh, affine(net.w1, net.b1, input));
  return affine(net.w2, net.b2, hidden_out);
}

}  // namespace

std::pair<Vector, Vector> init_state(const InitNetParams& init, const Vector& pooled) {
  Vector hidden_h, hidden_c;
  Vector h0 = mlp_forward(init.h_net, pooled, hidden_h);
  Vector c0 = mlp_forward(init.c_net, pooled, hidden_c);
  return {std::move(h0), std::move(c0)};
}

LstmStepCache lstm_step(const LstmLayerParams& layer, const Vector& h_prev,
                        const Vector& c_prev, const Vector& x) {
  const std::size_t h = h_prev.size();
  if (layer.weight.cols() != h + x.size() || layer.weight.rows() != 4 * h ||
      c_prev.size() != h) {
    throw validation_error("lstm_step shape mismatch: weight is " +
                           std::to_string(layer.weight.rows()) + "x" +
                           std::to_string(layer.weight.cols()) + ", h_prev length " +
                           std::to_string(h) + ", x length " + std::to_string(x.size()));
  }
  const auto& k = kernels::active();

  LstmStepCache cache;
  cache.input = x;
  cache.h_prev = h_prev;
  cache.c_prev = c_prev;

  Vector concat(h + x.size());
  std::copy(h_prev.begin(), h_prev.end(), concat.begin());
  std::copy(x.begin(), x.end(), concat.begin() + static_cast<std::ptrdiff_t>(h));
  cache.preact = affine(layer.weight, layer.bias, concat);

  cache.gate_i.resize(h);
  cache.gate_f.resize(h);
  cache.gate_o.resize(h);
  cache.gate_g.resize(h);
  for (std::size_t j = 0; j < h; ++j) {
    cache.gate_i[j] = sigmoid(cache.preact[j]);
    cache.gate_f[j] = sigmoid(cache.preact[h + j]);
    cache.gate_o[j] = sigmoid(cache.preact[2 * h + j]);
    cache.gate_g[j] = std::tanh(cache.preact[3 * h + j]);
  }

  cache.c.assign(h, 0.0);
  k.vmuladd(cache.gate_f.data(), c_prev.data(), cache.c.data(), h);
  k.vmuladd(cache.gate_i.data(), cache.gate_g.data(), cache.c.data(), h);

  cache.tanh_c.resize(h);
  for (std::size_t j = 0; j < h; ++j) cache.tanh_c[j] = std::tanh(cache.c[j]);

  cache.h.assign(h, 0.0);
  k.vmuladd(cache.gate_o.data(), cache.tanh_c.data(), cache.h.data(), h);
  return cache;
}

AttentionMap attend(const AttentionParams& att, const Vector& h_top,
                    const FeatureCube& next_cube, Vector* logits_out) {
  if (att.w_h.cols() != h_top.size() || att.w_c.cols() != next_cube.depth ||
      att.w_h.rows() != next_cube.region_count() ||
      att.w_c.rows() != next_cube.region_count()) {
    throw validation_error("attend shape mismatch: w_h is " + std::to_string(att.w_h.rows()) +
                           "x" + std::to_string(att.w_h.cols()) + ", w_c is " +
                           std::to_string(att.w_c.rows()) + "x" +
                           std::to_string(att.w_c.cols()) + ", h length " +
                           std::to_string(h_top.size()) + ", cube " +
                           std::to_string(next_cube.region_count()) + "x" +
                           std::to_string(next_cube.depth));
  }
  const auto& k = kernels::active();
  Vector context = region_mean(next_cube);
  Vector logits(next_cube.region_count());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    logits[i] = k.dot(att.w_h.row(i), h_top.data(), h_top.size()) +
                k.dot(att.w_c.row(i), context.data(), context.size());
  }
  if (logits_out != nullptr) *logits_out = logits;
  return AttentionMap{softmax(logits)};
}

Vector blend(const AttentionMap& map, const FeatureCube& cube) {
  if (map.probs.size() != cube.region_count()) {
    throw validation_error("blend length mismatch: map has " +
                           std::to_string(map.probs.size()) + " entries, cube has " +
                           std::to_string(cube.region_count()) + " regions");
  }
  const auto& k = kernels::active();
  Vector x(cube.depth, 0.0);
  for (std::size_t i = 0; i < map.probs.size(); ++i) {
    k.axpy(map.probs[i], cube.regions.row(i), x.data(), cube.depth);
  }
  return x;
}

ForwardResult forward_sequence(const ModelParams& model,
                               std::span<const FeatureCube> frames, Rng* rng,
                               bool training) {
  if (frames.empty()) throw validation_error("forward_sequence: empty frame sequence");
  model.validate_shapes();
  const ModelConfig& cfg = model.config;
  for (const FeatureCube& cube : frames) {
    if (cube.grid_side != cfg.grid_side || cube.depth != cfg.depth) {
      throw validation_error("forward_sequence: frame shape K=" +
                             std::to_string(cube.grid_side) + " D=" +
                             std::to_string(cube.depth) + " does not match model K=" +
                             std::to_string(cfg.grid_side) + " D=" +
                             std::to_string(cfg.depth));
    }
  }
  const bool use_dropout = training && cfg.dropout_rate > 0.0;
  if (use_dropout && rng == nullptr) {
    throw validation_error("forward_sequence: training with dropout requires an rng");
  }

  const std::size_t num_layers = cfg.num_layers;
  const std::size_t frame_count = frames.size();
  const auto& k = kernels::active();

  ForwardResult result;
  StateCache& cache = result.cache;
  cache.training = training;

  cache.pooled = mean_pool(frames);
  cache.h0 = mlp_forward(model.init.h_net, cache.pooled, cache.init_h_hidden);
  cache.c0 = mlp_forward(model.init.c_net, cache.pooled, cache.init_c_hidden);

  // Every layer starts from the same (h0, c0).
  std::vector<Vector> h_state(num_layers, cache.h0);
  std::vector<Vector> c_state(num_layers, cache.c0);

  cache.attention.reserve(frame_count);
  cache.updates.reserve(frame_count > 0 ? frame_count - 1 : 0);

  // First map reads the initial hidden state against frame 0.
  auto record_attention = [&](const Vector& h_source, const FeatureCube& frame) {
    AttentionStepCache step;
    step.h_source = h_source;
    step.context = region_mean(frame);
    step.map = attend(model.attention, h_source, frame, &step.logits);
    result.maps.push_back(step.map);
    cache.attention.push_back(std::move(step));
  };
  record_attention(cache.h0, frames[0]);

  for (std::size_t t = 0; t + 1 < frame_count; ++t) {
    UpdateCache update;
    update.x_blend = blend(result.maps[t], frames[t]);
    update.layers.reserve(num_layers);
    update.h_masked.reserve(num_layers);
    if (use_dropout) update.dropout_masks.reserve(num_layers);

    const Vector* layer_input = &update.x_blend;
    for (std::size_t l = 0; l < num_layers; ++l) {
      update.layers.push_back(lstm_step(model.layers[l], h_state[l], c_state[l], *layer_input));
      const LstmStepCache& stepped = update.layers.back();
      h_state[l] = stepped.h;  // recurrent path keeps the raw h
      c_state[l] = stepped.c;
      // Dropout masks the h handed upward (next layer / attention head),
      // not the recurrent state and not the cell memory.
      if (use_dropout) {
        Vector mask = dropout_mask(cfg.dropout_rate, stepped.h.size(), *rng);
        Vector masked(stepped.h.size(), 0.0);
        k.vmuladd(mask.data(), stepped.h.data(), masked.data(), masked.size());
        update.dropout_masks.push_back(std::move(mask));
        update.h_masked.push_back(std::move(masked));
      } else {
        update.h_masked.push_back(stepped.h);
      }
      layer_input = &update.h_masked.back();
    }
    const Vector h_top_masked = update.h_masked.back();
    cache.updates.push_back(std::move(update));
    record_attention(h_top_masked, frames[t + 1]);
  }
  return result;
}

}  // namespace gaze
