#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glvr/dense.hpp"
#include "glvr/recovery.hpp"

namespace glvr {

/// SplitMix64(master_seed XOR trial).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);
/// Seed of the recovery stream shared by every criterion within one trial.
std::uint64_t recovery_seed(std::uint64_t trial_seed);

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t criterion_index = 0;  // position in the criteria list
  ResampleCriterion criterion = ResampleCriterion::disabled();
  std::uint64_t seed = 0;  // trial seed
  double error = 0.0;
  double final_loss = 0.0;
  std::uint64_t resamples = 0;
  double wall_ms = 0.0;
};

struct HarnessConfig {
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  RecoveryConfig recovery{};
  std::size_t jobs = 1;
};

/// Runs every (trial, criterion) cell; within a trial all criteria see the
/// same z_true and the same recovery stream. Output sorted by (trial, criterion).
std::vector<TrialRecord> run_paired_trials(LayerStack generator,
                                           const std::vector<ResampleCriterion>& criteria,
                                           const HarnessConfig& cfg);

inline constexpr std::array<double, 5> kErrorThresholds{1e-4, 1e-3, 1e-2, 1e-1, 1e0};

struct EvalRow {
  ResampleCriterion criterion = ResampleCriterion::disabled();
  std::array<double, 5> below_threshold{};  // percent of trials with error < eps
  std::optional<double> wins;               // percent; unset for the baseline
  std::optional<double> sig_wins;           // percent; unset when undefined
  double avg_error = 0.0;
  std::size_t trials = 0;
};

struct EvalTable {
  std::vector<EvalRow> rows;
};

EvalTable summarize(std::vector<TrialRecord> records);

enum class TableFormat { markdown, csv };

std::string render_table(const EvalTable& table, TableFormat format);

/// `trial,criterion,params,seed,error,final_loss,resamples,wall_ms`.
std::string records_csv(const std::vector<TrialRecord>& records, bool include_wall_time = true);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace glvr
