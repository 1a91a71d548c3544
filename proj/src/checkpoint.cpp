// GZAT checkpoint container: magic "GZAT", format version u32, config block
// (K u64, D u64, H u64, num_layers u64, dropout_rate f64), then every
// parameter matrix in for_each_param order as name (u32 length + bytes),
// rows u64, cols u64, row-major f64 values. Vectors are stored as Nx1.

#include "gaze/checkpoint.hpp"

#include <cmath>

#include "binary_io.hpp"
#include "gaze/errors.hpp"

namespace gaze {

namespace {
constexpr char kMagic[4] = {'G', 'Z', 'A', 'T'};
constexpr uint32_t kVersion = 1;

struct TensorRef {
  std::string name;
  double* data;
  uint64_t rows;
  uint64_t cols;
};

// The parameter tensors with their true 2-D shapes, in checkpoint order.
std::vector<TensorRef> tensor_refs(ModelParams& p) {
  std::vector<TensorRef> refs;
  auto mat = [&](const std::string& name, Matrix& m) {
    refs.push_back({name, m.data(), m.rows(), m.cols()});
  };
  auto vec = [&](const std::string& name, Vector& v) {
    refs.push_back({name, v.data(), v.size(), 1});
  };
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    std::string prefix = "lstm" + std::to_string(l);
    mat(prefix + ".weight", p.layers[l].weight);
    vec(prefix + ".bias", p.layers[l].bias);
  }
  mat("attention.w_h", p.attention.w_h);
  mat("attention.w_c", p.attention.w_c);
  const char* names[2] = {"init_h", "init_c"};
  InitMlpParams* nets[2] = {&p.init.h_net, &p.init.c_net};
  for (int i = 0; i < 2; ++i) {
    std::string prefix = names[i];
    mat(prefix + ".w1", nets[i]->w1);
    vec(prefix + ".b1", nets[i]->b1);
    mat(prefix + ".w2", nets[i]->w2);
    vec(prefix + ".b2", nets[i]->b2);
  }
  return refs;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  params.validate_shapes();
  detail::BinaryWriter w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u64(params.config.grid_side);
  w.u64(params.config.depth);
  w.u64(params.config.hidden);
  w.u64(params.config.num_layers);
  w.f64(params.config.dropout_rate);

  auto refs = tensor_refs(const_cast<ModelParams&>(params));
  for (const TensorRef& ref : refs) {
    w.str(ref.name);
    w.u64(ref.rows);
    w.u64(ref.cols);
    w.f64_array(ref.data, ref.rows * ref.cols);
  }
  w.finish();
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  detail::BinaryReader r(path);
  r.expect_magic(kMagic);
  uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw io_error(r.path() + ": unsupported checkpoint version " + std::to_string(version), 4);
  }

  ModelConfig config;
  config.grid_side = r.u64("grid side");
  config.depth = r.u64("feature depth");
  config.hidden = r.u64("hidden size");
  config.num_layers = r.u64("layer count");
  config.dropout_rate = r.f64("dropout rate");
  try {
    config.validate();
  } catch (const validation_error& e) {
    throw io_error(r.path() + ": bad config block: " + e.what(), 8);
  }

  // Allocate the expected shapes, then require the file to match exactly.
  ModelParams params;
  params.config = config;
  const std::size_t h = config.hidden;
  const std::size_t d = config.depth;
  const std::size_t cells = config.region_count();
  params.layers.resize(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    std::size_t input_width = l == 0 ? d : h;
    params.layers[l].weight = Matrix(4 * h, h + input_width);
    params.layers[l].bias = Vector(4 * h, 0.0);
  }
  params.attention.w_h = Matrix(cells, h);
  params.attention.w_c = Matrix(cells, d);
  for (InitMlpParams* net : {&params.init.h_net, &params.init.c_net}) {
    net->w1 = Matrix(h, d);
    net->b1 = Vector(h, 0.0);
    net->w2 = Matrix(h, h);
    net->b2 = Vector(h, 0.0);
  }

  for (TensorRef& ref : tensor_refs(params)) {
    uint64_t at = r.offset();
    std::string name = r.str("tensor name");
    if (name != ref.name) {
      throw io_error(r.path() + ": expected tensor '" + ref.name + "', found '" + name + "'",
                     at);
    }
    uint64_t rows = r.u64("rows");
    uint64_t cols = r.u64("cols");
    if (rows != ref.rows || cols != ref.cols) {
      throw io_error(r.path() + ": tensor '" + name + "' is " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", expected " + std::to_string(ref.rows) +
                         "x" + std::to_string(ref.cols),
                     at);
    }
    uint64_t values_at = r.offset();
    r.f64_array(ref.data, rows * cols, name.c_str());
    for (uint64_t i = 0; i < rows * cols; ++i) {
      if (!std::isfinite(ref.data[i])) {
        throw io_error(r.path() + ": non-finite value in tensor '" + name + "'",
                       values_at + i * 8);
      }
    }
  }
  r.expect_end();
  return params;
}

}  // namespace gaze
