#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "glvr/latentops.hpp"
#include "glvr/recovery.hpp"

namespace glvr::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct TrainCommand {
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  fs::path out;
  std::optional<fs::path> discriminator_out;
  std::optional<fs::path> loss_csv;
  std::size_t progress_every = 1000;
};

struct RecoverCommand {
  fs::path model;
  fs::path image;
  ResampleCriterion criterion = ResampleCriterion::disabled();
  RecoveryConfig recovery{};
  fs::path out;
  std::optional<fs::path> trace_csv;
  std::size_t progress_every = 1000;
};

struct EvaluateCommand {
  fs::path config;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> iters;
  fs::path out_dir;
};

struct InterpolateCommand {
  fs::path model;
  PathMode mode = PathMode::slerp;
  std::size_t steps = 8;
  std::uint64_t seed = 0;
  fs::path out_dir;
  std::optional<fs::path> from;
  std::optional<fs::path> to;
  std::vector<std::size_t> image_shape;
};

struct EmbedCommand {
  fs::path model;
  std::size_t i = 1;
  std::size_t j = 2;
  fs::path out_dir;
  std::vector<std::size_t> image_shape;
};

struct GenDataCommand {
  std::string dataset = "ring";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  fs::path out;
  std::size_t side = 8;
};

struct HelpRequest {
  std::string text;
};

using Command = std::variant<TrainCommand, RecoverCommand, EvaluateCommand, InterpolateCommand,
                             EmbedCommand, GenDataCommand, HelpRequest>;

class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, std::string usage)
      : std::runtime_error(what), usage_(std::move(usage)) {}
  const std::string& usage() const { return usage_; }

 private:
  std::string usage_;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// args excludes the program name. Throws UsageError.
Command parse_args(const std::vector<std::string>& args, const EnvLookup& env = process_env);

/// Executes a parsed command. Errors propagate as glvr::Error.
void execute(const Command& command, std::ostream& out, std::ostream& err);

/// Full entry point: parse, execute, map failures to exit codes and a single
/// `glvr: error: kind=<kind> message=<quoted>` line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

}  // namespace glvr::cli
