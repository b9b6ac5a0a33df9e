#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "glvr/error.hpp"
#include "glvr/harness.hpp"
#include "oracles.hpp"

using namespace glvr;
using RC = ResampleCriterion;

namespace {

std::vector<TrialRecord> make_records(const std::vector<RC>& criteria, const std::vector<std::vector<double>>& errors) {
  std::vector<TrialRecord> out;
  for (std::size_t c = 0; c < criteria.size(); ++c)
    for (std::size_t t = 0; t < errors[c].size(); ++t) {
      TrialRecord r;
      r.trial = t;
      r.criterion_index = c;
      r.criterion = criteria[c];
      r.error = errors[c][t];
      out.push_back(r);
    }
  return out;
}

// Minimal RFC 4180 reader used to check the writer.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  return rows;
}

}  // namespace

TEST(Seeds, TrialSeedDefinition) {
  EXPECT_EQ(trial_seed(5, 3), splitmix64(5 ^ 3));
  EXPECT_NE(recovery_seed(trial_seed(5, 3)), trial_seed(5, 3));
}

TEST(Summarize, HandComputedExample) {
  const auto table = summarize(make_records({RC::disabled(), RC::hard(2.5)}, {{0.2, 0.4}, {0.1, 0.5}}));
  ASSERT_EQ(table.rows.size(), 2u);
  const auto& row = table.rows[1];
  ASSERT_TRUE(row.wins.has_value());
  EXPECT_DOUBLE_EQ(*row.wins, 50.0);
  ASSERT_TRUE(row.sig_wins.has_value());
  EXPECT_DOUBLE_EQ(*row.sig_wins, 100.0);
  EXPECT_DOUBLE_EQ(row.avg_error, 0.3);
  EXPECT_FALSE(table.rows[0].wins.has_value());
}

TEST(Summarize, EqualErrorsGiveNoWinsAndUndefinedSig) {
  const auto table = summarize(make_records({RC::disabled(), RC::hard(2.5)}, {{0.05, 0.05, 0.05}, {0.05, 0.05, 0.05}}));
  const auto& row = table.rows[1];
  EXPECT_DOUBLE_EQ(*row.wins, 0.0);
  EXPECT_FALSE(row.sig_wins.has_value());
  const std::array<double, 5> expected{0, 0, 0, 100, 100};
  EXPECT_EQ(row.below_threshold, expected);
  const auto md = render_table(table, TableFormat::markdown);
  EXPECT_NE(md.find("| - |"), std::string::npos) << md;
}

TEST(Summarize, MismatchedTrialSetsRejected) {
  auto records = make_records({RC::disabled(), RC::hard(2.5)}, {{0.1, 0.2}, {0.1}});
  EXPECT_THROW(summarize(records), ConfigError);
}

TEST(Summarize, ThresholdsMonotoneAndOrderInvariant) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> ntrials(1, 30), ncrit(1, 4);
  std::uniform_real_distribution<double> expo(-6.0, 1.0);
  const std::vector<RC> pool{RC::disabled(), RC::hard(2.5), RC::logistic(2, 2), RC::trunc_normal(2.75)};
  for (int set = 0; set < 1000; ++set) {
    const auto t = static_cast<std::size_t>(ntrials(gen));
    const auto c = static_cast<std::size_t>(ncrit(gen));
    std::vector<RC> crits(pool.begin(), pool.begin() + static_cast<long>(c));
    std::vector<std::vector<double>> errs(c, std::vector<double>(t));
    for (auto& row : errs)
      for (auto& e : row) e = std::pow(10.0, expo(gen));
    auto records = make_records(crits, errs);
    const auto table = summarize(records);
    for (const auto& row : table.rows) {
      for (std::size_t k = 0; k < 5; ++k) {
        ASSERT_GE(row.below_threshold[k], 0.0);
        ASSERT_LE(row.below_threshold[k], 100.0);
        if (k) ASSERT_GE(row.below_threshold[k], row.below_threshold[k - 1]);
      }
    }
    std::shuffle(records.begin(), records.end(), gen);
    EXPECT_EQ(render_table(summarize(records), TableFormat::csv), render_table(table, TableFormat::csv));
  }
}

TEST(RenderTable, AverageErrorThreeDecimals) {
  const auto table = summarize(make_records({RC::disabled()}, {{0.864, 0.864}}));
  const auto md = render_table(table, TableFormat::markdown);
  EXPECT_NE(md.find("0.864"), std::string::npos) << md;
}

TEST(RenderTable, EmptyIsHeaderOnly) {
  const auto csv = render_table(EvalTable{}, TableFormat::csv);
  EXPECT_EQ(csv, "criterion,1e-4,1e-3,1e-2,1e-1,1e0,wins,sig wins,avg err\n");
  const auto md = render_table(EvalTable{}, TableFormat::markdown);
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n'), 2);
}

TEST(RenderTable, CsvRoundTripsThroughReader) {
  const auto table = summarize(make_records({RC::disabled(), RC::logistic(2, 2), RC::trunc_normal(2.75)},
                                            {{0.2, 0.4, 1e-5}, {0.1, 0.5, 2e-3}, {0.3, 0.01, 1e-5}}));
  const auto rows = parse_csv(render_table(table, TableFormat::csv));
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_EQ(r.size(), 9u);
  EXPECT_EQ(rows[2][0], "logistic(2, 2)");
  EXPECT_EQ(rows[1][6], "-");
}

TEST(RecordsCsv, QuotingAndColumns) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  auto records = make_records({RC::disabled(), RC::logistic(2, 2)}, {{0.25}, {0.125}});
  const auto rows = parse_csv(records_csv(records));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"trial", "criterion", "params", "seed", "error", "final_loss",
                                               "resamples", "wall_ms"}));
  EXPECT_EQ(rows[2][2], "2,2");
  EXPECT_EQ(rows[2][4], "0.125");
  EXPECT_EQ(parse_csv(records_csv(records, false))[0].size(), 7u);
}

namespace {
HarnessConfig small_config(std::size_t iters) {
  HarnessConfig cfg;
  cfg.trials = 3;
  cfg.master_seed = 11;
  cfg.recovery.iterations = iters;
  return cfg;
}
}  // namespace

TEST(PairedTrials, SharedStartWithinTrial) {
  const auto net = oracle::tanh_net({4, 8, 6}, 1);
  // With zero iterations every criterion returns z(0), so errors must match per trial.
  const auto records = run_paired_trials(net.layers, {RC::disabled(), RC::hard(2.5), RC::logistic(2, 2)}, small_config(0));
  ASSERT_EQ(records.size(), 9u);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(records[t * 3].error, records[t * 3 + 1].error);
    EXPECT_EQ(records[t * 3].error, records[t * 3 + 2].error);
    EXPECT_EQ(records[t * 3].seed, trial_seed(11, t));
  }
  EXPECT_NE(records[0].error, records[3].error);
}

TEST(PairedTrials, SingleDisabledTrial) {
  const auto net = oracle::tanh_net({4, 8, 6}, 1);
  auto cfg = small_config(10);
  cfg.trials = 1;
  EXPECT_EQ(run_paired_trials(net.layers, {RC::disabled()}, cfg).size(), 1u);
}

TEST(PairedTrials, DeterministicAndJobIndependent) {
  const auto net = oracle::tanh_net({4, 8, 6}, 1);
  const std::vector<RC> crits{RC::disabled(), RC::logistic(2, 1)};
  auto cfg = small_config(200);
  const auto a = run_paired_trials(net.layers, crits, cfg);
  cfg.jobs = 4;
  const auto b = run_paired_trials(net.layers, crits, cfg);
  EXPECT_EQ(records_csv(a, false), records_csv(b, false));
}

TEST(PairedTrials, RequiresBaseline) {
  const auto net = oracle::tanh_net({4, 8, 6}, 1);
  EXPECT_THROW(run_paired_trials(net.layers, {RC::hard(2.5)}, small_config(1)), ConfigError);
}
