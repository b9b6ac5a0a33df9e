#include "glvr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glvr/config.hpp"
#include "glvr/error.hpp"
#include "glvr/gantrain.hpp"
#include "glvr/harness.hpp"
#include "glvr/nets.hpp"
#include "glvr/storage.hpp"
#include "text.hpp"

namespace glvr::cli {

namespace {

constexpr const char* kSeedEnv = "GLVR_SEED";

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(source + " must be an unsigned 64-bit integer, got '" + text + "'", "");
  }
  return v;
}

std::vector<std::size_t> parse_shape(const std::string& text) {
  std::vector<std::size_t> shape;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('x', start), text.size());
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + end, v);
    if (ec != std::errc() || ptr != text.data() + end || v == 0) {
      throw UsageError("--image-shape must look like HxW or 3xHxW", "");
    }
    shape.push_back(v);
    start = end + 1;
  }
  if (shape.size() != 2 && !(shape.size() == 3 && shape[0] == 3)) {
    throw UsageError("--image-shape must look like HxW or 3xHxW", "");
  }
  return shape;
}

struct Parser {
  CLI::App app{"Latent recovery for dense GAN generators", "glvr"};

  TrainCommand train;
  RecoverCommand recover;
  EvaluateCommand evaluate;
  InterpolateCommand interpolate;
  EmbedCommand embed;
  GenDataCommand gen_data;

  std::string criterion_text = "disabled";
  std::string mode_text = "slerp";
  std::string image_shape_text;
  std::string seed_text;
  std::size_t iters = 20000;
  double lr = 0.01;
  std::optional<double> expected_iters;
  bool no_reset = false;

  CLI::App* train_cmd = nullptr;
  CLI::App* recover_cmd = nullptr;
  CLI::App* evaluate_cmd = nullptr;
  CLI::App* interpolate_cmd = nullptr;
  CLI::App* embed_cmd = nullptr;
  CLI::App* gen_data_cmd = nullptr;

  Parser() {
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    train_cmd = app.add_subcommand("train", "Train a generator/discriminator pair on a synthetic dataset");
    train_cmd->add_option("--config", train.config, "Training config JSON")->required();
    train_cmd->add_option("--seed", train.seed, "Override the config seed");
    train_cmd->add_option("--steps", train.steps, "Override the config step count");
    train_cmd->add_option("--out", train.out, "Generator checkpoint output")->required();
    train_cmd->add_option("--discriminator-out", train.discriminator_out, "Discriminator checkpoint output");
    train_cmd->add_option("--loss-csv", train.loss_csv, "Loss history CSV output");
    train_cmd->add_option("--progress-every", train.progress_every, "Progress line interval (0 disables)");

    recover_cmd = app.add_subcommand("recover", "Invert an image to a latent vector");
    recover_cmd->add_option("--model", recover.model, "Generator checkpoint")->required();
    recover_cmd->add_option("--image", recover.image, "Target image tensor (GLVT)")->required();
    recover_cmd->add_option("--criterion", criterion_text, "disabled | hard:C | logistic:A,B | truncnorm:A");
    recover_cmd->add_option("--iters", iters, "Iterations");
    recover_cmd->add_option("--lr", lr, "Adam learning rate");
    recover_cmd->add_option("--expected-iters", expected_iters, "E used by the per-step probability");
    recover_cmd->add_flag("--no-moment-reset", no_reset, "Keep Adam moments when a coordinate is redrawn");
    recover_cmd->add_option("--seed", seed_text, "Recovery seed");
    recover_cmd->add_option("--out", recover.out, "Recovered latent output (GLVT)")->required();
    recover_cmd->add_option("--trace", recover.trace_csv, "Loss trace CSV output");
    recover_cmd->add_option("--progress-every", recover.progress_every, "Progress line interval (0 disables)");

    evaluate_cmd = app.add_subcommand("evaluate", "Run paired recovery trials and summarize");
    evaluate_cmd->add_option("--config", evaluate.config, "Experiment config JSON")->required();
    evaluate_cmd->add_option("--trials", evaluate.trials, "Override trial count");
    evaluate_cmd->add_option("--master-seed", seed_text, "Override master seed");
    evaluate_cmd->add_option("--jobs", evaluate.jobs, "Parallel workers");
    evaluate_cmd->add_option("--iters", evaluate.iters, "Override recovery iterations");
    evaluate_cmd->add_option("--out-dir", evaluate.out_dir, "Output directory")->required();

    interpolate_cmd = app.add_subcommand("interpolate", "Emit a slerp or great-circle latent path");
    interpolate_cmd->add_option("--model", interpolate.model, "Generator checkpoint")->required();
    interpolate_cmd->add_option("--mode", mode_text, "slerp | great_circle");
    interpolate_cmd->add_option("--steps", interpolate.steps, "Points on the path");
    interpolate_cmd->add_option("--seed", seed_text, "Seed for endpoints and circle direction");
    interpolate_cmd->add_option("--from", interpolate.from, "Start latent (GLVT)");
    interpolate_cmd->add_option("--to", interpolate.to, "End latent (GLVT), slerp only");
    interpolate_cmd->add_option("--image-shape", image_shape_text, "HxW or 3xHxW for image emission");
    interpolate_cmd->add_option("--out-dir", interpolate.out_dir, "Output directory")->required();

    embed_cmd = app.add_subcommand("embed", "Render G(e_i), G(e_j) and G(e_i + e_j)");
    embed_cmd->add_option("--model", embed.model, "Generator checkpoint")->required();
    embed_cmd->add_option("--i", embed.i, "First coordinate (1-based)")->required();
    embed_cmd->add_option("--j", embed.j, "Second coordinate (1-based)")->required();
    embed_cmd->add_option("--image-shape", image_shape_text, "HxW or 3xHxW for image emission");
    embed_cmd->add_option("--out-dir", embed.out_dir, "Output directory")->required();

    gen_data_cmd = app.add_subcommand("gen-data", "Sample a synthetic dataset to a tensor file");
    gen_data_cmd->add_option("--dataset", gen_data.dataset, "ring | checkerboard | tiles");
    gen_data_cmd->add_option("--n", gen_data.n, "Sample count");
    gen_data_cmd->add_option("--seed", seed_text, "Sampling seed");
    gen_data_cmd->add_option("--side", gen_data.side, "Tile side for the tiles dataset");
    gen_data_cmd->add_option("--out", gen_data.out, "Output tensor (GLVT)")->required();
  }
};

std::optional<std::uint64_t> env_seed(const EnvLookup& env) {
  if (!env) return std::nullopt;
  const auto v = env(kSeedEnv);
  if (!v || v->empty()) return std::nullopt;
  return parse_seed_text(*v, kSeedEnv);
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

Command parse_args(const std::vector<std::string>& args, const EnvLookup& env) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    p.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto* sub = p.app.get_subcommands().empty() ? &p.app : p.app.get_subcommands().front();
    return HelpRequest{sub->help()};
  } catch (const CLI::CallForAllHelp&) {
    return HelpRequest{p.app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    const auto* sub = p.app.get_subcommands().empty() ? &p.app : p.app.get_subcommands().front();
    throw UsageError(e.what(), sub->help());
  }

  const auto usage = [&](const CLI::App* sub) { return sub->help(); };
  const std::optional<std::uint64_t> flag_seed =
      p.seed_text.empty() ? std::nullopt : std::optional(parse_seed_text(p.seed_text, "--seed"));

  try {
    if (p.train_cmd->parsed()) return p.train;

    if (p.recover_cmd->parsed()) {
      auto cmd = p.recover;
      try {
        cmd.criterion = ResampleCriterion::parse(p.criterion_text);
      } catch (const ConfigError& e) {
        throw UsageError(std::string("--criterion: ") + e.what(), usage(p.recover_cmd));
      }
      cmd.recovery.iterations = p.iters;
      cmd.recovery.lr = p.lr;
      cmd.recovery.expected_iterations = p.expected_iters;
      cmd.recovery.reset_moments = !p.no_reset;
      cmd.recovery.seed = flag_seed.value_or(env_seed(env).value_or(0));
      try {
        cmd.recovery.validate();
      } catch (const ConfigError& e) {
        throw UsageError(e.what(), usage(p.recover_cmd));
      }
      return cmd;
    }

    if (p.evaluate_cmd->parsed()) {
      auto cmd = p.evaluate;
      cmd.master_seed = flag_seed;
      if (cmd.jobs && *cmd.jobs == 0) throw UsageError("--jobs must be >= 1", usage(p.evaluate_cmd));
      if (cmd.trials && *cmd.trials == 0) throw UsageError("--trials must be >= 1", usage(p.evaluate_cmd));
      return cmd;
    }

    if (p.interpolate_cmd->parsed()) {
      auto cmd = p.interpolate;
      if (p.mode_text == "slerp") {
        cmd.mode = PathMode::slerp;
      } else if (p.mode_text == "great_circle") {
        cmd.mode = PathMode::great_circle;
      } else {
        throw UsageError("--mode must be slerp or great_circle", usage(p.interpolate_cmd));
      }
      if (cmd.steps < 2) throw UsageError("--steps must be >= 2", usage(p.interpolate_cmd));
      if (!p.image_shape_text.empty()) cmd.image_shape = parse_shape(p.image_shape_text);
      cmd.seed = flag_seed.value_or(env_seed(env).value_or(0));
      return cmd;
    }

    if (p.embed_cmd->parsed()) {
      auto cmd = p.embed;
      if (cmd.i == 0 || cmd.j == 0) throw UsageError("--i and --j are 1-based", usage(p.embed_cmd));
      if (!p.image_shape_text.empty()) cmd.image_shape = parse_shape(p.image_shape_text);
      return cmd;
    }

    auto cmd = p.gen_data;
    if (cmd.dataset != "ring" && cmd.dataset != "checkerboard" && cmd.dataset != "tiles") {
      throw UsageError("--dataset must be ring, checkerboard or tiles", usage(p.gen_data_cmd));
    }
    cmd.seed = flag_seed.value_or(env_seed(env).value_or(0));
    return cmd;
  } catch (UsageError& e) {
    if (!e.usage().empty()) throw;
    throw UsageError(e.what(), usage(p.app.get_subcommands().front()));
  }
}

namespace {

std::vector<std::size_t> resolve_image_shape(std::size_t dim, const std::vector<std::size_t>& requested) {
  if (!requested.empty()) {
    if (shape_product(requested) != dim) throw DimensionError("--image-shape vs generator output", dim, shape_product(requested));
    return requested;
  }
  auto square = [](std::size_t n) -> std::size_t {
    auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    return s * s == n ? s : 0;
  };
  if (auto s = square(dim)) return {s, s};
  if (dim % 3 == 0) {
    if (auto s = square(dim / 3)) return {3, s, s};
  }
  return {};
}

/// Lays frames side by side; returns an empty tensor when no shape applies.
std::optional<Tensor> image_strip(const std::vector<std::vector<double>>& frames,
                                  const std::vector<std::size_t>& shape, std::ostream& err) {
  if (shape.empty() || frames.empty()) return std::nullopt;
  const bool color = shape.size() == 3;
  const std::size_t channels = color ? 3 : 1;
  const std::size_t h = shape[shape.size() - 2];
  const std::size_t w = shape.back();
  const std::size_t n = frames.size();
  std::vector<double> data(channels * h * w * n);
  bool clamped = false;
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t c = 0; c < channels; ++c) {
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t x = 0; x < w; ++x) {
          double v = frames[f][(c * h + r) * w + x];
          if (v < -1.0 || v > 1.0) {
            clamped = true;
            v = std::clamp(v, -1.0, 1.0);
          }
          data[(c * h + r) * (w * n) + f * w + x] = v;
        }
      }
    }
  }
  if (clamped) err << "glvr: note: generator outputs outside [-1, 1] were clamped for display\n";
  std::vector<std::size_t> strip_shape = color ? std::vector<std::size_t>{3, h, w * n}
                                               : std::vector<std::size_t>{h, w * n};
  return Tensor(std::move(strip_shape), std::move(data));
}

Tensor stack_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return Tensor({rows.size(), cols}, std::move(data));
}

Network load_generator(const fs::path& path) {
  auto net = load_checkpoint(path);
  if (net.kind != NetKind::generator) throw ConfigError(path.string() + " is not a generator checkpoint");
  return net;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
}

void run_train(const TrainCommand& cmd, std::ostream& out, std::ostream& err) {
  auto cfg = load_train_config(cmd.config);
  if (cmd.seed) cfg.seed = *cmd.seed;
  if (cmd.steps) cfg.steps = *cmd.steps;
  const auto result = train(cfg, [&](const LossRecord& r) {
    if (cmd.progress_every > 0 && r.step % cmd.progress_every == 0) {
      err << "train step " << r.step << "/" << cfg.steps << " d_loss=" << detail::shortest(r.d_loss)
          << " g_loss=" << detail::shortest(r.g_loss) << '\n';
    }
  });
  save_checkpoint(result.generator, cmd.out);
  if (cmd.discriminator_out) save_checkpoint(result.discriminator, *cmd.discriminator_out);
  if (cmd.loss_csv) write_text_atomic(*cmd.loss_csv, loss_history_csv(result.history));
  out << "trained " << cfg.steps << " steps, generator written to " << cmd.out.string() << '\n';
}

void run_recover(const RecoverCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto gen = load_generator(cmd.model);
  const auto image = read_tensor(cmd.image);
  if (image.size() != gen.out_dim()) {
    throw DimensionError("image " + cmd.image.string() + " vs generator " + cmd.model.string() + " output",
                         gen.out_dim(), image.size());
  }
  auto rc = cmd.recovery;
  rc.record_trace = cmd.trace_csv.has_value();
  rc.progress_every = cmd.progress_every;
  rc.on_progress = [&](const TracePoint& p) {
    err << "recover iter " << p.iter << "/" << rc.iterations << " loss=" << detail::shortest(p.loss) << '\n';
  };
  const auto res = glvr::recover(image.values(), gen.layers, cmd.criterion, rc);
  write_tensor(cmd.out, Tensor::vector(res.z));
  if (cmd.trace_csv) write_text_atomic(*cmd.trace_csv, trace_csv(res.trace));
  out << "criterion=" << cmd.criterion.to_string() << " final_loss=" << detail::shortest(res.final_loss)
      << " resamples=" << res.total_resamples() << '\n';
}

void run_evaluate(const EvaluateCommand& cmd, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  auto cfg = load_experiment_config(cmd.config);
  if (cfg.model.empty()) throw ConfigError("experiment config has no model path");
  if (cmd.trials) cfg.harness.trials = *cmd.trials;
  if (cmd.jobs) cfg.harness.jobs = *cmd.jobs;
  if (cmd.iters) cfg.harness.recovery.iterations = *cmd.iters;
  if (cmd.master_seed) {
    cfg.harness.master_seed = *cmd.master_seed;
  } else if (!cfg.has_master_seed) {
    cfg.harness.master_seed = env_seed(env).value_or(0);
  }
  const auto gen = load_generator(cfg.model);
  err << "evaluate: " << cfg.harness.trials << " trials x " << cfg.criteria.size() << " criteria, "
      << cfg.harness.recovery.iterations << " iterations each\n";
  const auto records = run_paired_trials(gen.layers, cfg.criteria, cfg.harness);
  const auto table = summarize(records);
  ensure_dir(cmd.out_dir);
  write_text_atomic(cmd.out_dir / "records.csv", records_csv(records));
  write_text_atomic(cmd.out_dir / "summary.csv", render_table(table, TableFormat::csv));
  const auto md = render_table(table, TableFormat::markdown);
  write_text_atomic(cmd.out_dir / "summary.md", md);
  out << md;
}

void run_interpolate(const InterpolateCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto gen = load_generator(cmd.model);
  const std::size_t d = gen.in_dim();
  Rng rng(cmd.seed);
  auto latent_or_prior = [&](const std::optional<fs::path>& path) {
    if (!path) return sample_prior(rng, d);
    const auto t = read_tensor(*path);
    if (t.size() != d) throw DimensionError("latent " + path->string() + " vs generator input", d, t.size());
    return t.data();
  };

  InterpolationPath path;
  std::vector<double> w;
  if (cmd.mode == PathMode::slerp) {
    const auto z1 = latent_or_prior(cmd.from);
    const auto z2 = latent_or_prior(cmd.to);
    path = slerp_path(z1, z2, cmd.steps);
    path.seed = cmd.seed;
  } else {
    const auto z = latent_or_prior(cmd.from);
    w = orthogonal_direction(z, splitmix64(cmd.seed));
    path = great_circle(z, w, cmd.steps);
    path.seed = cmd.seed;
  }

  std::vector<std::vector<double>> images;
  for (const auto& p : path.points) images.push_back(gen.forward(p));

  ensure_dir(cmd.out_dir);
  write_tensor(cmd.out_dir / "path_latents.glvt", stack_rows(path.points));
  write_tensor(cmd.out_dir / "path_outputs.glvt", stack_rows(images));

  nlohmann::ordered_json meta;
  meta["mode"] = to_string(path.mode);
  meta["steps"] = path.steps;
  meta["seed"] = path.seed;
  std::vector<double> norms;
  for (const auto& p : path.points) norms.push_back(norm2(p));
  meta["norms"] = norms;
  if (!w.empty()) meta["direction"] = w;
  write_text_atomic(cmd.out_dir / "path.json", meta.dump(2) + "\n");

  const auto shape = resolve_image_shape(gen.out_dim(), cmd.image_shape);
  if (auto strip = image_strip(images, shape, err)) {
    const auto name = shape.size() == 3 ? "path.ppm" : "path.pgm";
    write_image_pgm(cmd.out_dir / name, *strip);
  } else {
    err << "glvr: note: output dimension " << gen.out_dim() << " has no image shape; skipped image strip\n";
  }
  out << to_string(path.mode) << " path with " << path.steps << " points written to " << cmd.out_dir.string() << '\n';
}

void run_embed(const EmbedCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto gen = load_generator(cmd.model);
  const auto images = embed_compose(gen.layers, cmd.i, cmd.j);
  ensure_dir(cmd.out_dir);
  const std::vector<std::vector<double>> frames{images.first, images.second, images.composed};
  write_tensor(cmd.out_dir / "embed_outputs.glvt", stack_rows(frames));
  const auto shape = resolve_image_shape(gen.out_dim(), cmd.image_shape);
  if (!shape.empty()) {
    const auto ext = shape.size() == 3 ? ".ppm" : ".pgm";
    const std::string suffix = std::to_string(cmd.i) + "_" + std::to_string(cmd.j);
    const std::vector<std::string> names{"e" + std::to_string(cmd.i), "e" + std::to_string(cmd.j), "sum_" + suffix};
    for (std::size_t k = 0; k < frames.size(); ++k) {
      write_image_pgm(cmd.out_dir / (names[k] + ext), *image_strip({frames[k]}, shape, err));
    }
  } else {
    err << "glvr: note: output dimension " << gen.out_dim() << " has no image shape; skipped images\n";
  }
  out << "embedding images for e" << cmd.i << ", e" << cmd.j << " written to " << cmd.out_dir.string() << '\n';
}

void run_gen_data(const GenDataCommand& cmd, std::ostream& out) {
  DatasetKind kind = RingOfGaussians{};
  if (cmd.dataset == "checkerboard") kind = Checkerboard{};
  if (cmd.dataset == "tiles") kind = ProceduralTiles{cmd.side};
  const SyntheticDataset dataset(kind);
  Rng rng(cmd.seed);
  write_tensor(cmd.out, dataset.batch(rng, cmd.n));
  out << cmd.n << " " << dataset.name() << " samples written to " << cmd.out.string() << '\n';
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void execute(const Command& command, std::ostream& out, std::ostream& err) {
  std::visit(
      [&](const auto& cmd) {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, TrainCommand>) run_train(cmd, out, err);
        else if constexpr (std::is_same_v<T, RecoverCommand>) run_recover(cmd, out, err);
        else if constexpr (std::is_same_v<T, EvaluateCommand>) run_evaluate(cmd, out, err, process_env);
        else if constexpr (std::is_same_v<T, InterpolateCommand>) run_interpolate(cmd, out, err);
        else if constexpr (std::is_same_v<T, EmbedCommand>) run_embed(cmd, out, err);
        else if constexpr (std::is_same_v<T, GenDataCommand>) run_gen_data(cmd, out);
        else out << cmd.text;
      },
      command);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  Command command;
  try {
    command = parse_args(args, env);
  } catch (const UsageError& e) {
    err << "glvr: usage error: " << e.what() << "\n\n" << e.usage();
    return kExitUsage;
  }
  try {
    if (const auto* eval = std::get_if<EvaluateCommand>(&command)) {
      run_evaluate(*eval, out, err, env);
    } else {
      execute(command, out, err);
    }
  } catch (const Error& e) {
    err << "glvr: error: kind=" << to_string(e.kind()) << " message=" << quoted(e.what()) << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "glvr: error: kind=internal message=" << quoted(e.what()) << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace glvr::cli
