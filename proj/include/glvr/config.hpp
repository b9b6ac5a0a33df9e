#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glvr/gantrain.hpp"
#include "glvr/harness.hpp"
#include "glvr/recovery.hpp"

namespace glvr {

/// Parses a training config document. Unknown keys are rejected.
TrainConfig parse_train_config(const std::string& json_text);
TrainConfig load_train_config(const std::filesystem::path& path);

/// Dataset descriptor: "ring" | "checkerboard" | "tiles", or an object with
/// a "kind" key plus variant parameters.
DatasetKind parse_dataset(const std::string& json_text);

struct ExperimentConfig {
  std::filesystem::path model;
  std::vector<ResampleCriterion> criteria;
  HarnessConfig harness;
  /// True when the document carried master_seed.
  bool has_master_seed = false;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Baseline plus the 17 standard hard, logistic and truncnorm settings.
std::vector<ResampleCriterion> full_criteria_grid();

}  // namespace glvr
