#include "gaze/training.hpp"

#include <cmath>

#include "gaze/errors.hpp"
#include "gaze/kernels.hpp"

namespace gaze {

namespace {

constexpr double kProbFloor = 1e-12;

// d/dp of -log(max(p, floor)): flat below the floor.
double ce_prob_grad(double p) { return p >= kProbFloor ? -1.0 / p : 0.0; }

// acc(r, :) += d[r] * x
void outer_acc(const Vector& d, const Vector& x, Matrix& acc) {
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < d.size(); ++r) {
    k.axpy(d[r], x.data(), acc.row(r), x.size());
  }
}

struct BufferView {
  double* data;
  std::size_t size;
};

std::vector<BufferView> buffer_views(ModelParams& p) {
  std::vector<BufferView> views;
  p.for_each_param([&](const std::string&, double* values, std::size_t n) {
    views.push_back({values, n});
  });
  return views;
}

// Backward through one init MLP: out = w2 tanh(w1 p + b1) + b2.
void init_mlp_backward(const InitMlpParams& net, const Vector& pooled,
                       const Vector& hidden_act, const Vector& d_out,
                       InitMlpParams& grads) {
  outer_acc(d_out, hidden_act, grads.w2);
  for (std::size_t i = 0; i < d_out.size(); ++i) grads.b2[i] += d_out[i];
  Vector d_hidden = affine_backward_input(net.w2, d_out);
  Vector d_pre = elementwise_backward(Nonlinearity::tanh, hidden_act, d_hidden);
  outer_acc(d_pre, pooled, grads.w1);
  for (std::size_t i = 0; i < d_pre.size(); ++i) grads.b1[i] += d_pre[i];
}

}  // namespace

LossBreakdown loss(const std::vector<AttentionMap>& maps,
                   std::span<const uint32_t> labels, const ModelParams& params,
                   double gamma) {
  if (maps.size() != labels.size()) {
    throw validation_error("loss: " + std::to_string(maps.size()) + " maps vs " +
                           std::to_string(labels.size()) + " labels");
  }
  LossBreakdown out;
  for (std::size_t t = 0; t < maps.size(); ++t) {
    if (labels[t] >= maps[t].probs.size()) {
      throw validation_error("loss: label " + std::to_string(labels[t]) +
                             " out of range at step " + std::to_string(t) + " (map has " +
                             std::to_string(maps[t].probs.size()) + " cells)");
    }
    out.cross_entropy += -std::log(std::max(maps[t].probs[labels[t]], kProbFloor));
  }
  out.l2_penalty = gamma * params.squared_norm();
  out.total = out.cross_entropy + out.l2_penalty;
  return out;
}

Gradients backward(const StateCache& cache, std::span<const FeatureCube> frames,
                   std::span<const uint32_t> labels, const ModelParams& params,
                   double gamma) {
  const std::size_t frame_count = cache.attention.size();
  if (frame_count == 0) throw validation_error("backward: empty cache");
  if (labels.size() != frame_count || frames.size() != frame_count) {
    throw validation_error("backward: cache covers " + std::to_string(frame_count) +
                           " frames but got " + std::to_string(frames.size()) +
                           " frames / " + std::to_string(labels.size()) + " labels");
  }
  if (cache.updates.size() + 1 != frame_count) {
    throw validation_error("backward: inconsistent cache (updates vs attention steps)");
  }

  const auto& k = kernels::active();
  const std::size_t hidden = params.config.hidden;
  const std::size_t num_layers = params.config.num_layers;
  const bool masked = cache.training && params.config.dropout_rate > 0.0;

  Gradients grads = params.zeros_like();

  // Gradient w.r.t. the raw recurrent state at the current time boundary.
  std::vector<Vector> dh(num_layers, Vector(hidden, 0.0));
  std::vector<Vector> dc(num_layers, Vector(hidden, 0.0));
  Vector d_h0_attention(hidden, 0.0);
  Vector pending_dmap;  // blend-path gradient waiting for the next earlier map

  for (std::size_t t = frame_count; t-- > 0;) {
    // ---- attention step t ----
    const AttentionStepCache& att = cache.attention[t];
    const std::size_t cells = att.map.probs.size();
    if (labels[t] >= cells) {
      throw validation_error("backward: label out of range at step " + std::to_string(t));
    }

    Vector g_map(cells, 0.0);
    g_map[labels[t]] = ce_prob_grad(att.map.probs[labels[t]]);
    if (!pending_dmap.empty()) {
      for (std::size_t i = 0; i < cells; ++i) g_map[i] += pending_dmap[i];
      pending_dmap.clear();
    }

    Vector d_logits = softmax_backward(att.map.probs, g_map);
    outer_acc(d_logits, att.h_source, grads.attention.w_h);
    outer_acc(d_logits, att.context, grads.attention.w_c);
    Vector d_h_source = affine_backward_input(params.attention.w_h, d_logits);

    if (t == 0) {
      for (std::size_t j = 0; j < hidden; ++j) d_h0_attention[j] += d_h_source[j];
    } else {
      // h_source was the (possibly masked) top-layer h at boundary t.
      const UpdateCache& update = cache.updates[t - 1];
      if (masked) {
        k.vmuladd(update.dropout_masks[num_layers - 1].data(), d_h_source.data(),
                  dh[num_layers - 1].data(), hidden);
      } else {
        for (std::size_t j = 0; j < hidden; ++j) dh[num_layers - 1][j] += d_h_source[j];
      }
    }

    // ---- LSTM update t-1 (stepped states from boundary t-1 to t) ----
    if (t == 0) break;
    const UpdateCache& update = cache.updates[t - 1];
    Vector d_input_above;  // gradient w.r.t. the masked h the layer above consumed
    for (std::size_t l = num_layers; l-- > 0;) {
      const LstmStepCache& step = update.layers[l];

      Vector d_h_out = dh[l];
      if (l + 1 < num_layers) {
        if (masked) {
          k.vmuladd(update.dropout_masks[l].data(), d_input_above.data(), d_h_out.data(),
                    hidden);
        } else {
          for (std::size_t j = 0; j < hidden; ++j) d_h_out[j] += d_input_above[j];
        }
      }

      // h = o * tanh(c); c = f * c_prev + i * g
      Vector d_c_total = dc[l];
      Vector d_o(hidden);
      for (std::size_t j = 0; j < hidden; ++j) {
        d_o[j] = d_h_out[j] * step.tanh_c[j];
        d_c_total[j] += d_h_out[j] * step.gate_o[j] * (1.0 - step.tanh_c[j] * step.tanh_c[j]);
      }
      Vector d_preact(4 * hidden);
      for (std::size_t j = 0; j < hidden; ++j) {
        double d_i = d_c_total[j] * step.gate_g[j];
        double d_f = d_c_total[j] * step.c_prev[j];
        double d_g = d_c_total[j] * step.gate_i[j];
        d_preact[j] = d_i * step.gate_i[j] * (1.0 - step.gate_i[j]);
        d_preact[hidden + j] = d_f * step.gate_f[j] * (1.0 - step.gate_f[j]);
        d_preact[2 * hidden + j] = d_o[j] * step.gate_o[j] * (1.0 - step.gate_o[j]);
        d_preact[3 * hidden + j] = d_g * (1.0 - step.gate_g[j] * step.gate_g[j]);
      }

      Vector concat(hidden + step.input.size());
      std::copy(step.h_prev.begin(), step.h_prev.end(), concat.begin());
      std::copy(step.input.begin(), step.input.end(),
                concat.begin() + static_cast<std::ptrdiff_t>(hidden));
      outer_acc(d_preact, concat, grads.layers[l].weight);
      for (std::size_t j = 0; j < 4 * hidden; ++j) grads.layers[l].bias[j] += d_preact[j];

      Vector d_concat = affine_backward_input(params.layers[l].weight, d_preact);
      for (std::size_t j = 0; j < hidden; ++j) {
        dh[l][j] = d_concat[j];  // boundary moves to t-1
        dc[l][j] = d_c_total[j] * step.gate_f[j];
      }
      d_input_above.assign(d_concat.begin() + static_cast<std::ptrdiff_t>(hidden),
                           d_concat.end());
    }

    // Layer 1's input was the blended x; route its gradient to map t-1.
    const FeatureCube& frame = frames[t - 1];
    pending_dmap.assign(frame.region_count(), 0.0);
    for (std::size_t i = 0; i < frame.region_count(); ++i) {
      pending_dmap[i] = k.dot(frame.regions.row(i), d_input_above.data(), frame.depth);
    }
  }

  // All layers started from the shared (h0, c0).
  Vector d_h0 = d_h0_attention;
  Vector d_c0(hidden, 0.0);
  for (std::size_t l = 0; l < num_layers; ++l) {
    for (std::size_t j = 0; j < hidden; ++j) {
      d_h0[j] += dh[l][j];
      d_c0[j] += dc[l][j];
    }
  }
  init_mlp_backward(params.init.h_net, cache.pooled, cache.init_h_hidden, d_h0,
                    grads.init.h_net);
  init_mlp_backward(params.init.c_net, cache.pooled, cache.init_c_hidden, d_c0,
                    grads.init.c_net);

  // L2 term: d/dtheta of gamma * theta^2.
  if (gamma != 0.0) {
    auto grad_views = buffer_views(grads);
    std::size_t idx = 0;
    params.for_each_param([&](const std::string&, const double* values, std::size_t n) {
      k.axpy(2.0 * gamma, values, grad_views[idx].data, n);
      ++idx;
    });
  }
  return grads;
}

double finite_diff_grad(const ModelParams& model, std::span<const FeatureCube> frames,
                        std::span<const uint32_t> labels, double gamma,
                        std::size_t param_coordinate, double eps) {
  if (eps <= 0.0) throw validation_error("finite_diff_grad: eps must be positive");
  ModelParams probe = model;
  auto views = buffer_views(probe);
  std::size_t offset = param_coordinate;
  double* slot = nullptr;
  for (const BufferView& view : views) {
    if (offset < view.size) {
      slot = view.data + offset;
      break;
    }
    offset -= view.size;
  }
  if (slot == nullptr) {
    throw validation_error("finite_diff_grad: coordinate " +
                           std::to_string(param_coordinate) + " out of range");
  }

  const double original = *slot;
  auto eval = [&](double value) {
    *slot = value;
    ForwardResult fwd = forward_sequence(probe, frames, nullptr, false);
    return loss(fwd.maps, labels, probe, gamma).total;
  };
  double plus = eval(original + eps);
  double minus = eval(original - eps);
  *slot = original;
  return (plus - minus) / (2.0 * eps);
}

AdamState AdamState::create(const ModelParams& params, AdamHyper hyper) {
  AdamState state;
  state.m = params.zeros_like();
  state.v = params.zeros_like();
  state.hyper = hyper;
  return state;
}

void adam_update_buffer(std::span<double> theta, std::span<const double> grad,
                        std::span<double> m, std::span<double> v, const AdamHyper& hyper,
                        std::size_t step) {
  if (theta.size() != grad.size() || theta.size() != m.size() || theta.size() != v.size()) {
    throw validation_error("adam_update_buffer: buffer size mismatch");
  }
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * grad[i];
    v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * grad[i] * grad[i];
    double m_hat = m[i] / c1;
    double v_hat = v[i] / c2;
    theta[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state) {
  auto theta = buffer_views(params);
  auto g = buffer_views(const_cast<Gradients&>(grads));
  auto m = buffer_views(state.m);
  auto v = buffer_views(state.v);
  if (theta.size() != g.size()) throw validation_error("adam_step: parameter set mismatch");
  state.step += 1;
  for (std::size_t b = 0; b < theta.size(); ++b) {
    if (theta[b].size != g[b].size) {
      throw validation_error("adam_step: gradient shape mismatch in buffer " +
                             std::to_string(b));
    }
    adam_update_buffer({theta[b].data, theta[b].size}, {g[b].data, g[b].size},
                       {m[b].data, m[b].size}, {v[b].data, v[b].size}, state.hyper,
                       state.step);
  }
}

double gradient_global_norm(const Gradients& grads) {
  const auto& k = kernels::active();
  double total = 0.0;
  grads.for_each_param([&](const std::string&, const double* values, std::size_t n) {
    total += k.dot(values, values, n);
  });
  return std::sqrt(total);
}

void clip_gradients(Gradients& grads, double max_norm) {
  double norm = gradient_global_norm(grads);
  if (norm <= max_norm || norm == 0.0) return;
  const double factor = max_norm / norm;
  const auto& k = kernels::active();
  grads.for_each_param([&](const std::string&, double* values, std::size_t n) {
    k.scale(factor, values, n);
  });
}

}  // namespace gaze
