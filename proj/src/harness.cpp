#include "glvr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "glvr/error.hpp"
#include "glvr/gantrain.hpp"
#include "glvr/rng.hpp"
#include "text.hpp"

namespace glvr {

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return splitmix64(master_seed ^ trial);
}

std::uint64_t recovery_seed(std::uint64_t trial_seed) { return splitmix64(trial_seed); }

std::vector<TrialRecord> run_paired_trials(LayerStack generator,
                                           const std::vector<ResampleCriterion>& criteria,
                                           const HarnessConfig& cfg) {
  if (generator.empty()) throw ConfigError("generator has no layers");
  if (cfg.trials == 0) throw ConfigError("need at least one trial");
  const bool has_baseline = std::any_of(criteria.begin(), criteria.end(), [](const auto& c) {
    return c.kind() == ResampleCriterion::Kind::disabled;
  });
  if (!has_baseline) throw ConfigError("criteria must include the 'disabled' baseline");
  cfg.recovery.validate();

  const std::size_t d = generator.front().in_dim;
  struct TrialSetup {
    std::uint64_t seed;
    std::vector<double> z_true;
    std::vector<double> x;
  };
  std::vector<TrialSetup> setups;
  setups.reserve(cfg.trials);
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    const auto seed = trial_seed(cfg.master_seed, k);
    Rng rng(seed);
    auto z_true = sample_prior(rng, d);
    auto x = net_forward(generator, z_true);
    setups.push_back({seed, std::move(z_true), std::move(x)});
  }

  const std::size_t cells = cfg.trials * criteria.size();
  std::vector<TrialRecord> records(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t cell = next++; cell < cells; cell = next++) {
      const std::size_t trial = cell / criteria.size();
      const std::size_t ci = cell % criteria.size();
      try {
        const auto& setup = setups[trial];
        auto rc = cfg.recovery;
        rc.seed = recovery_seed(setup.seed);
        rc.record_trace = false;
        const auto start = std::chrono::steady_clock::now();
        const auto res = recover(setup.x, generator, criteria[ci], rc);
        const auto stop = std::chrono::steady_clock::now();
        records[cell] = TrialRecord{trial,
                                    ci,
                                    criteria[ci],
                                    setup.seed,
                                    reconstruction_error(setup.z_true, res.z),
                                    res.final_loss,
                                    res.total_resamples(),
                                    std::chrono::duration<double, std::milli>(stop - start).count()};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, cells);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

EvalTable summarize(std::vector<TrialRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.criterion_index, a.trial) < std::tie(b.criterion_index, b.trial);
  });

  // criterion_index -> (trial -> error)
  std::map<std::size_t, std::map<std::size_t, double>> errors;
  std::map<std::size_t, ResampleCriterion> criteria;
  for (const auto& r : records) {
    if (r.error < 0.0 || !std::isfinite(r.error)) throw NumericError("trial error must be finite and >= 0");
    auto [it, inserted] = errors[r.criterion_index].emplace(r.trial, r.error);
    if (!inserted) {
      throw ConfigError("duplicate record for trial " + std::to_string(r.trial) + " criterion " + r.criterion.to_string());
    }
    criteria.emplace(r.criterion_index, r.criterion);
  }

  EvalTable table;
  if (errors.empty()) return table;

  const std::map<std::size_t, double>* baseline = nullptr;
  for (const auto& [ci, c] : criteria) {
    if (c.kind() == ResampleCriterion::Kind::disabled) {
      baseline = &errors.at(ci);
      break;
    }
  }
  if (!baseline) throw ConfigError("records contain no 'disabled' baseline");

  for (const auto& [ci, per_trial] : errors) {
    if (per_trial.size() != baseline->size() ||
        !std::equal(per_trial.begin(), per_trial.end(), baseline->begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw ConfigError("criterion " + criteria.at(ci).to_string() + " covers a different trial set than the baseline");
    }

    EvalRow row;
    row.criterion = criteria.at(ci);
    row.trials = per_trial.size();
    const double n = static_cast<double>(per_trial.size());

    double sum = 0.0;
    for (const auto& [trial, e] : per_trial) {
      sum += e;
      for (std::size_t t = 0; t < kErrorThresholds.size(); ++t) {
        if (e < kErrorThresholds[t]) row.below_threshold[t] += 1.0;
      }
    }
    for (auto& v : row.below_threshold) v = 100.0 * v / n;
    row.avg_error = sum / n;

    if (&per_trial != baseline) {
      std::size_t wins = 0;
      std::size_t sig_wins = 0;
      std::size_t sig_diffs = 0;
      for (const auto& [trial, e] : per_trial) {
        const double base = baseline->at(trial);
        if (e < base) ++wins;
        const bool sig_win = base > 0.0 && base >= 2.0 * e;
        const bool sig_loss = e > 0.0 && e >= 2.0 * base;
        if (sig_win) ++sig_wins;
        if (sig_win || sig_loss) ++sig_diffs;
      }
      row.wins = 100.0 * static_cast<double>(wins) / n;
      if (sig_diffs > 0) row.sig_wins = 100.0 * static_cast<double>(sig_wins) / static_cast<double>(sig_diffs);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string percent(double v) {
  // Two decimals with trailing zeros dropped: 50, 33.33, 12.5.
  std::string s = detail::fixed(v, 2);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::vector<std::string> row_cells(const EvalRow& row) {
  std::vector<std::string> cells{row.criterion.label()};
  for (double v : row.below_threshold) cells.push_back(percent(v));
  cells.push_back(row.wins ? percent(*row.wins) : "-");
  cells.push_back(row.sig_wins ? detail::fixed(*row.sig_wins, 2) : "-");
  cells.push_back(detail::fixed(row.avg_error, 3));
  return cells;
}

const std::vector<std::string> kHeader{"criterion", "1e-4", "1e-3", "1e-2", "1e-1", "1e0",
                                       "wins", "sig wins", "avg err"};

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_table(const EvalTable& table, TableFormat format) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    if (format == TableFormat::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
    } else {
      out += '|';
      for (const auto& c : cells) out += ' ' + c + " |";
    }
    out += '\n';
  };
  emit(kHeader);
  if (format == TableFormat::markdown) {
    out += "|---|";
    for (std::size_t i = 1; i < kHeader.size(); ++i) out += "---:|";
    out += '\n';
  }
  for (const auto& row : table.rows) emit(row_cells(row));
  return out;
}

std::string records_csv(const std::vector<TrialRecord>& records, bool include_wall_time) {
  std::string out = "trial,criterion,params,seed,error,final_loss,resamples";
  out += include_wall_time ? ",wall_ms\n" : "\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial) + ',' + csv_field(r.criterion.name()) + ',' +
           csv_field(r.criterion.params()) + ',' + std::to_string(r.seed) + ',' +
           detail::shortest(r.error) + ',' + detail::shortest(r.final_loss) + ',' +
           std::to_string(r.resamples);
    if (include_wall_time) out += ',' + detail::fixed(r.wall_ms, 3);
    out += '\n';
  }
  return out;
}

}  // namespace glvr
