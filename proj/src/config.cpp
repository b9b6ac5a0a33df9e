#include "glvr/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "glvr/error.hpp"

namespace glvr {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!names.contains(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

template <class T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu") return Activation::leaky_relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ConfigError("unknown activation '" + name + "'");
}

LabelRange parse_range(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(std::string(what) + " must be [lo, hi]");
  return {v[0].get<double>(), v[1].get<double>()};
}

LabelScheme parse_labels(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "hard") return LabelScheme::hard();
    if (s == "soft") return LabelScheme::soft();
    throw ConfigError("label_scheme must be 'hard' or 'soft'");
  }
  if (!v.is_object()) throw ConfigError("label_scheme must be a string or object");
  reject_unknown(v, {"kind", "real", "fake"}, "label_scheme");
  LabelScheme scheme = get<std::string>(v, "kind", "soft") == "hard" ? LabelScheme::hard() : LabelScheme::soft();
  if (v.contains("real")) scheme.real = parse_range(v.at("real"), "label_scheme.real");
  if (v.contains("fake")) scheme.fake = parse_range(v.at("fake"), "label_scheme.fake");
  scheme.validate();
  return scheme;
}

DatasetKind dataset_from_json(const json& v) {
  std::string kind;
  json params = json::object();
  if (v.is_string()) {
    kind = v.get<std::string>();
  } else if (v.is_object()) {
    kind = get<std::string>(v, "kind", "");
    params = v;
  } else {
    throw ConfigError("dataset must be a string or object");
  }
  if (kind == "ring") {
    reject_unknown(params, {"kind", "modes", "radius", "sigma"}, "dataset");
    RingOfGaussians r;
    r.modes = get<std::size_t>(params, "modes", r.modes);
    r.radius = get<double>(params, "radius", r.radius);
    r.sigma = get<double>(params, "sigma", r.sigma);
    return r;
  }
  if (kind == "checkerboard") {
    reject_unknown(params, {"kind", "cells"}, "dataset");
    return Checkerboard{get<std::size_t>(params, "cells", 4)};
  }
  if (kind == "tiles") {
    reject_unknown(params, {"kind", "side"}, "dataset");
    return ProceduralTiles{get<std::size_t>(params, "side", 8)};
  }
  throw ConfigError("unknown dataset kind '" + kind + "' (ring, checkerboard, tiles)");
}

std::vector<std::size_t> dims(const json& obj, const char* key) {
  auto v = get<std::vector<std::size_t>>(obj, key, {});
  if (obj.contains(key) && v.size() < 2) throw ConfigError(std::string(key) + " needs at least two entries");
  return v;
}

RecoveryConfig parse_recovery(const json& v) {
  if (!v.is_object()) throw ConfigError("recovery must be an object");
  reject_unknown(v, {"iters", "lr", "beta1", "beta2", "eps", "reset_moments", "expected_iters"}, "recovery");
  RecoveryConfig rc;
  rc.iterations = get<std::size_t>(v, "iters", rc.iterations);
  rc.lr = get<double>(v, "lr", rc.lr);
  rc.beta1 = get<double>(v, "beta1", rc.beta1);
  rc.beta2 = get<double>(v, "beta2", rc.beta2);
  rc.eps = get<double>(v, "eps", rc.eps);
  rc.reset_moments = get<bool>(v, "reset_moments", rc.reset_moments);
  if (v.contains("expected_iters")) rc.expected_iterations = get<double>(v, "expected_iters", 1.0);
  rc.validate();
  return rc;
}

}  // namespace

DatasetKind parse_dataset(const std::string& json_text) {
  const auto doc = parse_document(json_text);
  return dataset_from_json(doc);
}

TrainConfig parse_train_config(const std::string& json_text) {
  const auto doc = parse_document(json_text);
  if (!doc.is_object()) throw ConfigError("training config must be a JSON object");
  reject_unknown(doc,
                 {"seed", "latent_dim", "generator_dims", "discriminator_dims", "generator_output", "lr",
                  "beta1", "beta2", "batch_size", "steps", "d_steps", "label_scheme", "generator_loss",
                  "dataset"},
                 "training config");
  TrainConfig cfg;
  cfg.seed = get_u64(doc, "seed", cfg.seed);
  cfg.latent_dim = get<std::size_t>(doc, "latent_dim", cfg.latent_dim);
  cfg.generator_dims = dims(doc, "generator_dims");
  cfg.discriminator_dims = dims(doc, "discriminator_dims");
  if (doc.contains("generator_output")) cfg.generator_output = parse_activation(get<std::string>(doc, "generator_output", ""));
  cfg.adam.lr = get<double>(doc, "lr", cfg.adam.lr);
  cfg.adam.beta1 = get<double>(doc, "beta1", cfg.adam.beta1);
  cfg.adam.beta2 = get<double>(doc, "beta2", cfg.adam.beta2);
  cfg.batch_size = get<std::size_t>(doc, "batch_size", cfg.batch_size);
  cfg.steps = get<std::size_t>(doc, "steps", cfg.steps);
  cfg.d_steps = get<std::size_t>(doc, "d_steps", cfg.d_steps);
  if (doc.contains("label_scheme")) cfg.labels = parse_labels(doc.at("label_scheme"));
  if (doc.contains("generator_loss")) {
    const auto mode = get<std::string>(doc, "generator_loss", "");
    if (mode == "saturating") {
      cfg.generator_loss = GeneratorLoss::saturating;
    } else if (mode == "non_saturating") {
      cfg.generator_loss = GeneratorLoss::non_saturating;
    } else {
      throw ConfigError("generator_loss must be 'saturating' or 'non_saturating'");
    }
  }
  if (doc.contains("dataset")) cfg.dataset = dataset_from_json(doc.at("dataset"));
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::filesystem::path& path) { return parse_train_config(read_text(path)); }

std::vector<ResampleCriterion> full_criteria_grid() {
  std::vector<ResampleCriterion> grid{ResampleCriterion::disabled()};
  for (double c : {2.5, 3.0, 3.5}) grid.push_back(ResampleCriterion::hard(c));
  for (double a : {2.0, 3.0, 4.0}) {
    for (double b : {2.0, 2.5, 3.0}) grid.push_back(ResampleCriterion::logistic(a, b));
  }
  for (double a : {2.5, 2.75, 3.0, 3.25, 3.5}) grid.push_back(ResampleCriterion::trunc_normal(a));
  return grid;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const auto doc = parse_document(json_text);
  if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
  reject_unknown(doc, {"model", "criteria", "trials", "master_seed", "recovery", "jobs"}, "experiment config");
  ExperimentConfig cfg;
  cfg.model = get<std::string>(doc, "model", "");
  if (!doc.contains("criteria")) {
    cfg.criteria = full_criteria_grid();
  } else if (doc.at("criteria").is_string() && doc.at("criteria").get<std::string>() == "grid") {
    cfg.criteria = full_criteria_grid();
  } else {
    for (const auto& c : get<std::vector<std::string>>(doc, "criteria", {})) {
      cfg.criteria.push_back(ResampleCriterion::parse(c));
    }
  }
  cfg.harness.trials = get<std::size_t>(doc, "trials", cfg.harness.trials);
  cfg.has_master_seed = doc.contains("master_seed");
  cfg.harness.master_seed = get_u64(doc, "master_seed", 0);
  cfg.harness.jobs = get<std::size_t>(doc, "jobs", cfg.harness.jobs);
  if (doc.contains("recovery")) cfg.harness.recovery = parse_recovery(doc.at("recovery"));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  auto cfg = parse_experiment_config(read_text(path));
  if (!cfg.model.empty() && cfg.model.is_relative()) cfg.model = path.parent_path() / cfg.model;
  return cfg;
}

}  // namespace glvr
