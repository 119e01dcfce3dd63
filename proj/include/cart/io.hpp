#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cart/integrator.hpp"
#include "cart/pawn.hpp"
#include "cart/sweep.hpp"

namespace cart {

enum class Command { Simulate, Equilibria, Region, Sweep, Peaks, Pawn };

std::string_view to_string(Command command);
Command parse_command(std::string_view text);

/// Malformed or unknown configuration input. `where()` names the source and
/// line when it can be located ("run.json:7", "--set").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitRange = 3,
  kExitNumerical = 4,  // Blowup or Tolerance; the data is still written
};

struct RunConfig {
  Command command = Command::Simulate;
  Scenario scenario;
  IntegrationOptions integration;
  std::filesystem::path out = "cartsim_out";
  std::uint64_t seed = 0;
  unsigned workers = 1;  // 0: all cores

  double simulate_t_end = 365.0;

  double peaks_t_end = kDefaultHorizon;
  std::size_t max_peaks = 10;

  GridSpec region_grid = default_region_grid();

  GridSpec sweep_grid;
  int sweep_k = 1;
  PeakQuantity sweep_quantity = PeakQuantity::Magnitude;
  double sweep_horizon = kDefaultHorizon;

  SamplingPlan plan;  // plan.seed mirrors `seed`
  MissingPeak missing_peak = MissingPeak::Censor;
  double pawn_horizon = kDefaultHorizon;

  /// I0 over [-1e9, 6e9] so the non-biological strip is visible.
  static GridSpec default_region_grid();
  SweepOptions sweep_options(double horizon) const;
};

/// The configuration document: ten parameter keys at the top level, then
/// "command", "seed", "workers", "integration", "simulate", "peaks", "region",
/// "sweep" and "pawn". Absent keys keep their defaults; unknown keys throw.
using Json = nlohmann::ordered_json;

/// Parses text (comments allowed). `source` labels diagnostics.
Json parse_config_text(const std::string& text, const std::string& source);

/// Reads and parses a file; an unreadable file throws std::ios_base::failure.
Json read_config_file(const std::filesystem::path& path);

/// Applies "dotted.key=value". The value is read as JSON when it parses and as
/// a string otherwise.
void apply_override(Json& doc, std::string_view assignment);

/// Builds a RunConfig from a document. `text` is the source text, used only
/// to locate offending keys by line.
RunConfig resolve_config(const Json& doc, const std::string& source = {}, const std::string& text = {});

RunConfig load_config(const std::filesystem::path& path);

/// Every resolved value, defaults included. resolve_config(to_json(c)) == c
/// for all fields that reach the output.
Json to_json(const RunConfig& config);

/// Runs the command, writing artifacts under config.out. Returns an ExitCode;
/// diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& err);

/// "%.17g", with "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double value);

}  // namespace cart
