#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "glvr/cli.hpp"
#include "glvr/storage.hpp"
#include "oracles.hpp"

using namespace glvr;
namespace fs = std::filesystem;

namespace {

cli::EnvLookup no_env() {
  return [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
}

cli::EnvLookup env_with_seed(std::string seed) {
  return [seed](const std::string& name) -> std::optional<std::string> {
    if (name == "GLVR_SEED") return seed;
    return std::nullopt;
  };
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args, const cli::EnvLookup& env = no_env()) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  const auto bytes = read_file(p);
  return {bytes.begin(), bytes.end()};
}

fs::path tiny_model(const fs::path& dir) {
  const auto g = init_net(NetSpec::generator({4, 8, 6}), 3, 0.3);
  save_checkpoint(g, dir / "g.glvr");
  return dir / "g.glvr";
}

}  // namespace

TEST(ParseArgs, RecoverExample) {
  const auto cmd = cli::parse_args({"recover", "--model", "m.bin", "--image", "x.glvt", "--criterion", "logistic:2,2",
                                    "--iters", "20000", "--seed", "7", "--out", "z.glvt"},
                                   no_env());
  const auto& r = std::get<cli::RecoverCommand>(cmd);
  EXPECT_EQ(r.criterion, ResampleCriterion::logistic(2, 2));
  EXPECT_EQ(r.recovery.iterations, 20000u);
  EXPECT_EQ(r.recovery.seed, 7u);
  EXPECT_EQ(r.model, "m.bin");
}

TEST(ParseArgs, InvalidCriterionIsUsageError) {
  EXPECT_THROW(cli::parse_args({"recover", "--model", "m", "--image", "x", "--criterion", "hard:0", "--out", "z"}, no_env()),
               cli::UsageError);
  const auto res = run({"recover", "--model", "m", "--image", "x", "--criterion", "hard:0", "--out", "z"});
  EXPECT_EQ(res.code, cli::kExitUsage);
}

TEST(ParseArgs, NoSubcommandExitsTwoWithUsage) {
  const auto res = run({});
  EXPECT_EQ(res.code, cli::kExitUsage);
  EXPECT_NE(res.err.find("recover"), std::string::npos);
}

TEST(ParseArgs, SeedPrecedence) {
  const std::vector<std::string> base{"gen-data", "--out", "d.glvt"};
  EXPECT_EQ(std::get<cli::GenDataCommand>(cli::parse_args(base, no_env())).seed, 0u);
  EXPECT_EQ(std::get<cli::GenDataCommand>(cli::parse_args(base, env_with_seed("12"))).seed, 12u);
  auto flagged = base;
  flagged.insert(flagged.end(), {"--seed", "5"});
  EXPECT_EQ(std::get<cli::GenDataCommand>(cli::parse_args(flagged, env_with_seed("12"))).seed, 5u);
  EXPECT_THROW(cli::parse_args(base, env_with_seed("abc")), cli::UsageError);
}

TEST(Main, EvaluateSmokeWritesOutputs) {
  const auto dir = oracle::temp_dir("cli_eval");
  tiny_model(dir);
  {
    std::ofstream f(dir / "exp.json");
    f << R"({"model": "g.glvr", "criteria": ["disabled", "hard:2.5"], "trials": 2, "master_seed": 1,
             "recovery": {"iters": 50}})";
  }
  const auto res = run({"evaluate", "--config", (dir / "exp.json").string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(res.code, cli::kExitOk) << res.err;
  for (const char* name : {"records.csv", "summary.csv", "summary.md"}) EXPECT_TRUE(fs::exists(dir / "out" / name));
  EXPECT_NE(res.out.find("hard(2.5)"), std::string::npos);
  const auto records = slurp(dir / "out" / "records.csv");
  EXPECT_EQ(std::count(records.begin(), records.end(), '\n'), 5);
}

TEST(Main, EvaluateMasterSeedFromEnvironment) {
  const auto dir = oracle::temp_dir("cli_eval_env");
  tiny_model(dir);
  {
    std::ofstream f(dir / "exp.json");
    f << R"({"model": "g.glvr", "criteria": ["disabled"], "trials": 1, "recovery": {"iters": 5}})";
  }
  const auto cfg = (dir / "exp.json").string();
  ASSERT_EQ(run({"evaluate", "--config", cfg, "--out-dir", (dir / "a").string()}, env_with_seed("99")).code, 0);
  ASSERT_EQ(run({"evaluate", "--config", cfg, "--out-dir", (dir / "b").string(), "--master-seed", "99"}).code, 0);
  ASSERT_EQ(run({"evaluate", "--config", cfg, "--out-dir", (dir / "c").string()}).code, 0);
  const auto seed_col = [&](const char* sub) {
    std::istringstream in(slurp(dir / sub / "records.csv"));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::vector<std::string> fields;
    std::istringstream cells(row);
    for (std::string f; std::getline(cells, f, ',');) fields.push_back(f);
    return fields.at(3);
  };
  EXPECT_EQ(seed_col("a"), seed_col("b"));
  EXPECT_NE(seed_col("a"), seed_col("c"));
}

TEST(Main, MismatchedDimsExitOneNamingBoth) {
  const auto dir = oracle::temp_dir("cli_dims");
  const auto model = tiny_model(dir);
  write_tensor(dir / "x.glvt", Tensor::vector({0.1, 0.2, 0.3}));
  const auto res = run({"recover", "--model", model.string(), "--image", (dir / "x.glvt").string(), "--iters", "5",
                        "--out", (dir / "z.glvt").string()});
  EXPECT_EQ(res.code, cli::kExitRuntime);
  EXPECT_NE(res.err.find("kind=dimension"), std::string::npos) << res.err;
  EXPECT_NE(res.err.find("6"), std::string::npos);
  EXPECT_NE(res.err.find("3"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "z.glvt"));
}

TEST(Main, RepeatedRunsAreByteIdentical) {
  const auto dir = oracle::temp_dir("cli_repeat");
  const auto model = tiny_model(dir);
  write_tensor(dir / "x.glvt", Tensor::vector({0.1, 0.2, 0.3, -0.1, 0.0, 0.05}));
  for (const char* sub : {"a", "b"}) {
    fs::create_directories(dir / sub);
    const auto z = (dir / sub / "z.glvt").string();
    const auto trace = (dir / sub / "trace.csv").string();
    ASSERT_EQ(run({"recover", "--model", model.string(), "--image", (dir / "x.glvt").string(), "--criterion",
                   "logistic:2,2", "--iters", "100", "--seed", "4", "--out", z, "--trace", trace})
                  .code,
              0);
    ASSERT_EQ(run({"interpolate", "--model", model.string(), "--mode", "great_circle", "--steps", "6", "--seed", "2",
                   "--out-dir", (dir / sub / "path").string()})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(dir / "a" / "z.glvt"), slurp(dir / "b" / "z.glvt"));
  EXPECT_EQ(slurp(dir / "a" / "trace.csv"), slurp(dir / "b" / "trace.csv"));
  EXPECT_EQ(slurp(dir / "a" / "path" / "path_latents.glvt"), slurp(dir / "b" / "path" / "path_latents.glvt"));
  EXPECT_EQ(slurp(dir / "a" / "path" / "path.json"), slurp(dir / "b" / "path" / "path.json"));
}

TEST(Main, EmbedAndGenData) {
  const auto dir = oracle::temp_dir("cli_embed");
  const auto g = init_net(NetSpec::generator({4, 8, 16}), 3, 0.3);
  save_checkpoint(g, dir / "g.glvr");
  const auto res = run({"embed", "--model", (dir / "g.glvr").string(), "--i", "1", "--j", "2", "--out-dir",
                        (dir / "e").string()});
  ASSERT_EQ(res.code, 0) << res.err;
  EXPECT_TRUE(fs::exists(dir / "e" / "sum_1_2.pgm"));
  EXPECT_EQ(read_tensor(dir / "e" / "embed_outputs.glvt").shape(), (std::vector<std::size_t>{3, 16}));

  ASSERT_EQ(run({"gen-data", "--dataset", "tiles", "--n", "5", "--side", "4", "--out", (dir / "d.glvt").string()}).code, 0);
  EXPECT_EQ(read_tensor(dir / "d.glvt").shape(), (std::vector<std::size_t>{5, 16}));
}

TEST(Main, MissingFileIsRuntimeError) {
  const auto res = run({"recover", "--model", "/nonexistent/g.glvr", "--image", "/nonexistent/x.glvt", "--out", "/tmp/z"});
  EXPECT_EQ(res.code, cli::kExitRuntime);
  EXPECT_NE(res.err.find("glvr: error: kind=io"), std::string::npos) << res.err;
}
