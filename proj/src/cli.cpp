#include "gaze/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gaze/checkpoint.hpp"
#include "gaze/data.hpp"
#include "gaze/errors.hpp"
#include "gaze/evaluation.hpp"
#include "gaze/kernels.hpp"
#include "gaze/model.hpp"
#include "gaze/training.hpp"

namespace gaze::cli {

namespace {

namespace fs = std::filesystem;

template <typename T>
void echo(const std::string& key, const T& value) {
  std::cout << key << ": " << value << "\n";
}

std::string sanitize_filename(std::string name) {
  for (char& c : name) {
    if (c == '/' || c == '\\' || c == ':' || c == ' ') c = '_';
  }
  return name;
}

// ---- synth ----

struct SynthArgs {
  std::string output;
  SynthConfig cfg;
};

int run_synth(const SynthArgs& a) {
  echo("command", "synth");
  echo("output", a.output);
  echo("grid", a.cfg.grid_side);
  echo("depth", a.cfg.depth);
  echo("sequences", a.cfg.num_sequences);
  echo("frames", a.cfg.frames_per_sequence);
  echo("step-size", a.cfg.step_cells);
  echo("signal", a.cfg.signal_strength);
  echo("noise", a.cfg.noise_sigma);
  echo("seed", a.cfg.rng_seed);
  echo("decouple-labels", a.cfg.decouple_labels);

  std::vector<LabeledSequence> data = synth_generate(a.cfg);
  save_dataset(a.output, data);
  std::cout << "wrote " << data.size() << " sequences to " << a.output << "\n";
  return 0;
}

// ---- prep ----

struct PrepArgs {
  std::string gaze_csv;
  std::string features;
  std::string override_csv;
  std::string output;
  std::string train_output;
  std::string test_output;
  std::string name = "video";
  std::size_t grid = 7;
  double split_fraction = 0.0;  // 0 disables splitting
};

int run_prep(const PrepArgs& a) {
  echo("command", "prep");
  echo("gaze", a.gaze_csv);
  echo("features", a.features.empty() ? "(none: placeholder zeros)" : a.features);
  echo("override", a.override_csv.empty() ? "(none)" : a.override_csv);
  echo("grid", a.grid);
  echo("name", a.name);
  echo("split-fraction", a.split_fraction);

  auto records = parse_gaze_csv(a.gaze_csv);
  std::vector<std::pair<uint64_t, uint32_t>> overrides;
  if (!a.override_csv.empty()) overrides = parse_override_csv(a.override_csv, a.grid);
  std::vector<uint32_t> labels = preprocess_labels(records, a.grid, overrides);

  LabeledSequence seq;
  seq.name = a.name;
  seq.labels = labels;
  if (!a.features.empty()) {
    auto feature_data = load_dataset(a.features);
    if (feature_data.size() != 1) {
      throw validation_error("prep: features file must hold exactly one sequence, has " +
                             std::to_string(feature_data.size()));
    }
    if (feature_data[0].frames.size() != labels.size()) {
      throw validation_error("prep: features cover " +
                             std::to_string(feature_data[0].frames.size()) +
                             " frames but gaze labels cover " +
                             std::to_string(labels.size()));
    }
    if (feature_data[0].frames[0].grid_side != a.grid) {
      throw validation_error("prep: features use K=" +
                             std::to_string(feature_data[0].frames[0].grid_side) +
                             " but --grid is " + std::to_string(a.grid));
    }
    seq.frames = std::move(feature_data[0].frames);
  } else {
    // No CNN features available: emit D=1 zero cubes so the labels are
    // usable end to end.
    for (std::size_t t = 0; t < labels.size(); ++t) {
      FeatureCube cube;
      cube.grid_side = a.grid;
      cube.depth = 1;
      cube.regions = Matrix(a.grid * a.grid, 1);
      seq.frames.push_back(std::move(cube));
    }
  }
  seq.validate();

  if (a.split_fraction > 0.0) {
    if (a.train_output.empty() || a.test_output.empty()) {
      throw validation_error("prep: --split-fraction needs --train-output and --test-output");
    }
    auto [train_part, test_part] = split(seq, a.split_fraction);
    save_dataset(a.train_output, {train_part});
    save_dataset(a.test_output, {test_part});
    std::cout << "wrote " << train_part.frames.size() << " train / "
              << test_part.frames.size() << " test frames\n";
  } else {
    if (a.output.empty()) throw validation_error("prep: --output is required");
    save_dataset(a.output, {seq});
    std::cout << "wrote " << seq.frames.size() << " frames to " << a.output << "\n";
  }
  return 0;
}

// ---- train ----

struct TrainArgs {
  std::string data;
  std::string validation;
  std::string checkpoint = "model.gzat";
  std::string curve = "curve.csv";
  std::string profile;
  std::size_t grid = 7;
  std::size_t hidden = 64;
  std::size_t layers = 1;
  double gamma = 0.01;
  double dropout = 0.5;
  std::size_t max_iters = 1000;
  std::size_t bptt_window = 30;
  std::size_t epochs = 1;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double clip = 5.0;
  double eval_epsilon = 0.01;
  uint64_t seed = 1;
};

// Flag bundles for the two experiment shapes: a 1-layer model stopped at 200
// iterations (car) and a 2-layer model stopped at 1000 (uno). Explicit flags
// win over the bundle.
void apply_profile(TrainArgs& a, const CLI::App* cmd) {
  if (a.profile.empty()) return;
  std::size_t layers, max_iters;
  if (a.profile == "car") {
    layers = 1;
    max_iters = 200;
  } else if (a.profile == "uno") {
    layers = 2;
    max_iters = 1000;
  } else {
    throw validation_error("unknown profile '" + a.profile + "' (car or uno)");
  }
  if (cmd->count("--layers") == 0) a.layers = layers;
  if (cmd->count("--max-iters") == 0) a.max_iters = max_iters;
  if (cmd->count("--hidden") == 0) a.hidden = 64;
  if (cmd->count("--gamma") == 0) a.gamma = 0.01;
  if (cmd->count("--epochs") == 0) a.epochs = 1;
}

int run_train(const TrainArgs& a, const CLI::App* cmd) {
  TrainArgs args = a;
  apply_profile(args, cmd);

  echo("command", "train");
  echo("data", args.data);
  echo("val", args.validation.empty() ? "(none)" : args.validation);
  echo("checkpoint", args.checkpoint);
  echo("curve", args.curve);
  echo("profile", args.profile.empty() ? "(none)" : args.profile);
  echo("grid", args.grid);
  echo("hidden", args.hidden);
  echo("layers", args.layers);
  echo("gamma", args.gamma);
  echo("dropout", args.dropout);
  echo("max-iters", args.max_iters);
  echo("bptt-window", args.bptt_window);
  echo("epochs", args.epochs);
  echo("lr", args.lr);
  echo("beta1", args.beta1);
  echo("beta2", args.beta2);
  echo("adam-eps", args.adam_eps);
  echo("clip", args.clip);
  echo("seed", args.seed);
  echo("kernels", kernels::active_name());

  auto dataset = load_dataset(args.data);
  if (dataset.empty()) throw validation_error("train: dataset has no sequences");
  const std::size_t data_k = dataset[0].frames[0].grid_side;
  const std::size_t data_d = dataset[0].frames[0].depth;
  if (cmd->count("--grid") > 0 && args.grid != data_k) {
    throw validation_error("train: --grid " + std::to_string(args.grid) +
                           " does not match dataset K=" + std::to_string(data_k));
  }

  std::vector<LabeledSequence> validation;
  if (!args.validation.empty()) validation = load_dataset(args.validation);

  ModelConfig mc;
  mc.grid_side = data_k;
  mc.depth = data_d;
  mc.hidden = args.hidden;
  mc.num_layers = args.layers;
  mc.dropout_rate = args.dropout;

  Rng rng(args.seed);
  ModelParams model = init_model(mc, rng);

  TrainConfig tc;
  tc.gamma = args.gamma;
  tc.max_iterations = args.max_iters;
  tc.bptt_window = args.bptt_window;
  tc.dropout_rate = args.dropout;
  tc.adam = {args.lr, args.beta1, args.beta2, args.adam_eps};
  tc.rng_seed = args.seed;
  tc.epochs = args.epochs;
  tc.clip_norm = args.clip;
  tc.val_epsilon = args.eval_epsilon;

  TrainResult result =
      train(dataset, std::move(model), tc, validation.empty() ? nullptr : &validation);
  save_checkpoint(args.checkpoint, result.model);
  write_curve_csv(args.curve, result.curve);
  std::cout << "trained " << result.curve.points.size() << " iterations; final loss "
            << (result.curve.points.empty() ? 0.0 : result.curve.points.back().loss) << "\n";
  return 0;
}

// ---- eval ----

struct EvalArgs {
  std::string data;
  std::string checkpoint;
  std::string report = "eval.txt";
  std::string per_frame = "eval_frames.csv";
  double epsilon = 0.01;
};

int run_eval(const EvalArgs& a) {
  echo("command", "eval");
  echo("data", a.data);
  echo("checkpoint", a.checkpoint);
  echo("report", a.report);
  echo("per-frame", a.per_frame);
  echo("epsilon", a.epsilon);

  ModelParams model = load_checkpoint(a.checkpoint);
  auto dataset = load_dataset(a.data);
  EvalReport report = evaluate_dataset(model, dataset, a.epsilon);
  write_report_text(a.report, report);
  write_per_frame_csv(a.per_frame, report);
  std::cout << "frames: " << report.frames_evaluated << "\n";
  std::cout << "mean KL: " << report.mean_kl << " (uniform baseline "
            << report.uniform_baseline_kl << ")\n";
  std::cout << "top-1 accuracy: " << report.top1_accuracy << "\n";
  return 0;
}

// ---- predict ----

struct PredictArgs {
  std::string data;
  std::string checkpoint;
  std::string output = "predictions.csv";
};

int run_predict(const PredictArgs& a) {
  echo("command", "predict");
  echo("data", a.data);
  echo("checkpoint", a.checkpoint);
  echo("output", a.output);

  ModelParams model = load_checkpoint(a.checkpoint);
  auto dataset = load_dataset(a.data);
  if (dataset.empty()) throw validation_error("predict: dataset has no sequences");

  std::ofstream out(a.output);
  if (!out) throw io_error("cannot open " + a.output + " for writing");
  const std::size_t cells = model.config.region_count();
  out << "sequence,frame,label,pred";
  for (std::size_t i = 0; i < cells; ++i) out << ",p" << i;
  out << "\n";

  char buf[64];
  for (const LabeledSequence& seq : dataset) {
    ForwardResult fwd = forward_sequence(model, seq.frames, nullptr, false);
    for (std::size_t t = 0; t < fwd.maps.size(); ++t) {
      out << seq.name << "," << t << "," << seq.labels[t] << ","
          << argmax_index(fwd.maps[t].probs);
      for (double p : fwd.maps[t].probs) {
        std::snprintf(buf, sizeof(buf), ",%.17g", p);
        out << buf;
      }
      out << "\n";
    }
  }
  if (!out) throw io_error("failed writing " + a.output);
  std::cout << "wrote predictions to " << a.output << "\n";
  return 0;
}

// ---- gradcheck ----

struct GradcheckArgs {
  uint64_t seed = 7;
  std::size_t grid = 4;
  std::size_t depth = 6;
  std::size_t hidden = 8;
  std::size_t layers = 2;
  std::size_t frames = 5;
  double gamma = 0.01;
  std::size_t coords = 200;
  double eps = 1e-5;
  double tolerance = 1e-4;
};

int run_gradcheck(const GradcheckArgs& a) {
  echo("command", "gradcheck");
  echo("seed", a.seed);
  echo("grid", a.grid);
  echo("depth", a.depth);
  echo("hidden", a.hidden);
  echo("layers", a.layers);
  echo("frames", a.frames);
  echo("gamma", a.gamma);
  echo("coords", a.coords);
  echo("eps", a.eps);
  echo("tolerance", a.tolerance);

  Rng rng(a.seed);
  ModelConfig mc;
  mc.grid_side = a.grid;
  mc.depth = a.depth;
  mc.hidden = a.hidden;
  mc.num_layers = a.layers;
  mc.dropout_rate = 0.0;  // finite differences need a deterministic forward
  ModelParams model = init_model(mc, rng);

  std::vector<FeatureCube> frames;
  std::vector<uint32_t> labels;
  for (std::size_t t = 0; t < a.frames; ++t) {
    FeatureCube cube;
    cube.grid_side = a.grid;
    cube.depth = a.depth;
    cube.regions = Matrix(a.grid * a.grid, a.depth);
    for (std::size_t i = 0; i < cube.regions.size(); ++i) {
      cube.regions.data()[i] = rng.normal(0.0, 1.0);
    }
    frames.push_back(std::move(cube));
    labels.push_back(static_cast<uint32_t>(rng.uniform_index(a.grid * a.grid)));
  }

  ForwardResult fwd = forward_sequence(model, frames, nullptr, false);
  Gradients grads = backward(fwd.cache, frames, labels, model, a.gamma);
  std::vector<double> flat;
  grads.for_each_param([&](const std::string&, const double* values, std::size_t n) {
    flat.insert(flat.end(), values, values + n);
  });

  double max_rel = 0.0;
  for (std::size_t i = 0; i < a.coords; ++i) {
    std::size_t coord = rng.uniform_index(flat.size());
    double analytic = flat[coord];
    double numeric = finite_diff_grad(model, frames, labels, a.gamma, coord, a.eps);
    double rel = std::abs(analytic - numeric) /
                 std::max(1.0, std::abs(analytic) + std::abs(numeric));
    max_rel = std::max(max_rel, rel);
  }

  std::printf("max relative error: %.3e\n", max_rel);
  const bool ok = max_rel < a.tolerance;
  std::printf("gradcheck: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

// ---- render ----

struct RenderArgs {
  std::string input;
  std::string outdir = ".";
  std::string prefix;
};

int run_render(const RenderArgs& a) {
  echo("command", "render");
  echo("input", a.input);
  echo("outdir", a.outdir);
  echo("prefix", a.prefix.empty() ? "(none)" : a.prefix);

  std::ifstream in(a.input);
  if (!in) throw io_error("cannot open predictions csv " + a.input);

  std::string header;
  if (!std::getline(in, header)) throw io_error(a.input + ": empty file");
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) columns.push_back(col);
  }
  if (columns.size() < 5 || columns[0] != "sequence" || columns[1] != "frame" ||
      columns[4] != "p0") {
    throw validation_error(a.input + ": expected header 'sequence,frame,label,pred,p0,...'");
  }
  const std::size_t cells = columns.size() - 4;
  const auto grid = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(cells))));
  if (grid * grid != cells) {
    throw validation_error(a.input + ": " + std::to_string(cells) +
                           " probability columns is not a square grid");
  }

  fs::create_directories(a.outdir);
  std::string line;
  std::size_t line_no = 1;
  std::size_t written = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != columns.size()) {
      throw validation_error(a.input + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(columns.size()) + " fields");
    }
    std::vector<double> probs(cells);
    double max_p = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      try {
        probs[i] = std::stod(fields[4 + i]);
      } catch (const std::exception&) {
        throw validation_error(a.input + ":" + std::to_string(line_no) +
                               ": bad probability '" + fields[4 + i] + "'");
      }
      max_p = std::max(max_p, probs[i]);
    }

    fs::path out_path = fs::path(a.outdir) / (a.prefix + sanitize_filename(fields[0]) + "_" +
                                              fields[1] + ".pgm");
    std::ofstream pgm(out_path);
    if (!pgm) throw io_error("cannot open " + out_path.string() + " for writing");
    pgm << "P2\n" << grid << " " << grid << "\n255\n";
    for (std::size_t r = 0; r < grid; ++r) {
      for (std::size_t c = 0; c < grid; ++c) {
        long v = max_p > 0.0 ? std::lround(255.0 * probs[r * grid + c] / max_p) : 0;
        pgm << v << (c + 1 == grid ? "" : " ");
      }
      pgm << "\n";
    }
    if (!pgm) throw io_error("failed writing " + out_path.string());
    ++written;
  }
  std::cout << "wrote " << written << " heatmaps to " << a.outdir << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"gazernn: recurrent soft-attention gaze prediction"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic moving-target dataset");
  synth_cmd->add_option("--output", synth_args.output, "Output GZDS file")->required();
  synth_cmd->add_option("--grid", synth_args.cfg.grid_side, "Grid side K")->capture_default_str();
  synth_cmd->add_option("--depth", synth_args.cfg.depth, "Feature depth D")->capture_default_str();
  synth_cmd->add_option("--sequences", synth_args.cfg.num_sequences, "Number of sequences")->capture_default_str();
  synth_cmd->add_option("--frames", synth_args.cfg.frames_per_sequence, "Frames per sequence")->capture_default_str();
  synth_cmd->add_option("--step-size", synth_args.cfg.step_cells, "Random-walk step size in cells")->capture_default_str();
  synth_cmd->add_option("--signal", synth_args.cfg.signal_strength, "Target signal strength")->capture_default_str();
  synth_cmd->add_option("--noise", synth_args.cfg.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.cfg.rng_seed, "RNG seed")->capture_default_str();
  synth_cmd->add_flag("--decouple-labels", synth_args.cfg.decouple_labels,
                      "Draw labels i.i.d. uniform, independent of features");

  PrepArgs prep_args;
  auto* prep_cmd = app.add_subcommand("prep", "Preprocess gaze CSV into GZDS labels");
  prep_cmd->add_option("--gaze", prep_args.gaze_csv, "Gaze CSV input")->required();
  prep_cmd->add_option("--features", prep_args.features, "Optional GZDS with precomputed features");
  prep_cmd->add_option("--override", prep_args.override_csv, "Optional frame,label override CSV");
  prep_cmd->add_option("--output", prep_args.output, "Output GZDS file");
  prep_cmd->add_option("--grid", prep_args.grid, "Grid side K")->capture_default_str();
  prep_cmd->add_option("--name", prep_args.name, "Sequence name")->capture_default_str();
  prep_cmd->add_option("--split-fraction", prep_args.split_fraction,
                       "Temporal train fraction (0 disables splitting)")->capture_default_str();
  prep_cmd->add_option("--train-output", prep_args.train_output, "Train split GZDS file");
  prep_cmd->add_option("--test-output", prep_args.test_output, "Test split GZDS file");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a GZDS dataset");
  train_cmd->add_option("--data", train_args.data, "Training GZDS file")->required();
  train_cmd->add_option("--val", train_args.validation, "Optional validation GZDS file");
  train_cmd->add_option("--checkpoint", train_args.checkpoint, "Output checkpoint")->capture_default_str();
  train_cmd->add_option("--curve", train_args.curve, "Output curve CSV")->capture_default_str();
  train_cmd->add_option("--profile", train_args.profile, "Flag bundle: car or uno");
  train_cmd->add_option("--grid", train_args.grid, "Grid side K (must match data)")->capture_default_str();
  train_cmd->add_option("--hidden", train_args.hidden, "LSTM hidden size")->capture_default_str();
  train_cmd->add_option("--layers", train_args.layers, "LSTM layers (1 or 2)")->capture_default_str();
  train_cmd->add_option("--gamma", train_args.gamma, "L2 penalty weight")->capture_default_str();
  train_cmd->add_option("--dropout", train_args.dropout, "Dropout rate")->capture_default_str();
  train_cmd->add_option("--max-iters", train_args.max_iters, "Iteration cap")->capture_default_str();
  train_cmd->add_option("--bptt-window", train_args.bptt_window, "Frames per update")->capture_default_str();
  train_cmd->add_option("--epochs", train_args.epochs, "Epoch cap")->capture_default_str();
  train_cmd->add_option("--lr", train_args.lr, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--beta1", train_args.beta1, "Adam beta1")->capture_default_str();
  train_cmd->add_option("--beta2", train_args.beta2, "Adam beta2")->capture_default_str();
  train_cmd->add_option("--adam-eps", train_args.adam_eps, "Adam epsilon")->capture_default_str();
  train_cmd->add_option("--clip", train_args.clip, "Global gradient-norm clip")->capture_default_str();
  train_cmd->add_option("--eval-epsilon", train_args.eval_epsilon, "Validation KL smoothing")->capture_default_str();
  train_cmd->add_option("--seed", train_args.seed, "RNG seed")->capture_default_str();

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a GZDS dataset");
  eval_cmd->add_option("--data", eval_args.data, "Test GZDS file")->required();
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint to evaluate")->required();
  eval_cmd->add_option("--report", eval_args.report, "Report text output")->capture_default_str();
  eval_cmd->add_option("--per-frame", eval_args.per_frame, "Per-frame KL CSV output")->capture_default_str();
  eval_cmd->add_option("--epsilon", eval_args.epsilon, "Ground-truth smoothing")->capture_default_str();

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Emit per-frame attention maps as CSV");
  predict_cmd->add_option("--data", predict_args.data, "GZDS file")->required();
  predict_cmd->add_option("--checkpoint", predict_args.checkpoint, "Checkpoint")->required();
  predict_cmd->add_option("--output", predict_args.output, "Output CSV")->capture_default_str();

  GradcheckArgs grad_args;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad_cmd->add_option("--seed", grad_args.seed, "RNG seed")->capture_default_str();
  grad_cmd->add_option("--grid", grad_args.grid, "Grid side K")->capture_default_str();
  grad_cmd->add_option("--depth", grad_args.depth, "Feature depth D")->capture_default_str();
  grad_cmd->add_option("--hidden", grad_args.hidden, "Hidden size H")->capture_default_str();
  grad_cmd->add_option("--layers", grad_args.layers, "LSTM layers")->capture_default_str();
  grad_cmd->add_option("--frames", grad_args.frames, "Unrolled steps T")->capture_default_str();
  grad_cmd->add_option("--gamma", grad_args.gamma, "L2 penalty weight")->capture_default_str();
  grad_cmd->add_option("--coords", grad_args.coords, "Coordinates to check")->capture_default_str();
  grad_cmd->add_option("--eps", grad_args.eps, "Central-difference step")->capture_default_str();
  grad_cmd->add_option("--tolerance", grad_args.tolerance, "Max allowed relative error")->capture_default_str();

  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Render prediction CSV rows as PGM heatmaps");
  render_cmd->add_option("--input", render_args.input, "Predictions CSV")->required();
  render_cmd->add_option("--outdir", render_args.outdir, "Output directory")->capture_default_str();
  render_cmd->add_option("--prefix", render_args.prefix, "Output filename prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // flag/usage problems are validation errors
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_args);
    if (prep_cmd->parsed()) return run_prep(prep_args);
    if (train_cmd->parsed()) return run_train(train_args, train_cmd);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (predict_cmd->parsed()) return run_predict(predict_args);
    if (grad_cmd->parsed()) return run_gradcheck(grad_args);
    if (render_cmd->parsed()) return run_render(render_args);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("gazernn");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace gaze::cli
