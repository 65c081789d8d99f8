#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corner/corner_spectra.hpp"
#include "corner/edge_stats.hpp"
#include "corner/ensembles.hpp"
#include "corner/stat_tests.hpp"

namespace corner {

enum class Command { edge, bulk, bead, verify, sample };
enum class OutputFormat { csv, json };
// auto: spectral for Gaussian entries, dense otherwise.
enum class Engine { automatic, dense, spectral };

struct ExperimentConfig {
  Command command = Command::edge;
  std::size_t n = 1000;
  std::size_t k_levels = 3;
  std::size_t ell = 3;
  int beta = 2;
  std::string law = "gaussian";
  double energy = 0.0;
  double window = 60.0;
  std::size_t trials = 500;
  std::size_t steps = 10;
  std::uint64_t seed = 42;
  std::string out_path = "-";
  std::optional<OutputFormat> format;  // per-command default when unset
  Side side = Side::left;
  Engine engine = Engine::automatic;
};

Command parse_command(std::string_view name);
const char* command_name(Command c) noexcept;

// Sets one field from its textual form. Keys: command, n, k_levels, ell, beta,
// dist (or law), energy, window, trials, steps, seed, out, format, side,
// engine; '-' and '_' are interchangeable. ConfigError names the field.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

// key = value lines, '#' starts a comment.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void load_config_file(ExperimentConfig& cfg, const std::string& path);

// ConfigError on the first field that breaks a precondition of the command.
void validate(const ExperimentConfig& cfg);

OutputFormat effective_format(const ExperimentConfig& cfg);
bool uses_spectral_engine(const ExperimentConfig& cfg);

// Level-0 spectrum and borders for one trial, per the configured engine.
// Border weights are always present.
CornerProcess simulate_corner_process(const ExperimentConfig& cfg, std::uint64_t trial);

struct ExecutionResult {
  int status = 0;  // 0 success, 1 verification failure
  std::vector<StatReport> reports;
};

// Runs the command and writes its outputs; out_path "-" writes the primary
// output to `stdout_stream`. Deterministic in cfg, independent of `workers`.
ExecutionResult execute(const ExperimentConfig& cfg, unsigned workers, std::ostream& stdout_stream);

}  // namespace corner
