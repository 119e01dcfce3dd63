#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cart/integrator.hpp"
#include "cart/sweep.hpp"

namespace cart {

/// A parameter varied in the analysis. `name` is a scenario key; names
/// starting with "dummy" are sampled but never reach the model.
struct VariedParameter {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

struct SamplingPlan {
  std::vector<VariedParameter> varied = default_varied();
  std::size_t n_unconditional = 2000;
  std::size_t n_conditioning_points = 10;
  std::size_t n_conditional = 500;
  std::uint64_t seed = 0;

  /// rho_C, tau_C, I0, C0, L0 over their table ranges.
  static std::vector<VariedParameter> default_varied();
  /// Throws std::invalid_argument / RangeError for counts < 10, duplicate or
  /// unknown names, and ranges outside the table.
  void validate() const;
  /// i-th of the evenly spaced conditioning values of parameter p.
  double conditioning_value(std::size_t p, std::size_t i) const;
};

/// Counter-based uniform draw in [0, 1): a pure function of its key, so
/// evaluation order cannot change the sample.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t block, std::uint64_t draw,
                       std::uint64_t dim);

inline constexpr std::array<std::string_view, 4> kOutputNames{"first_peak_mag", "second_peak_mag",
                                                              "first_peak_time", "second_peak_time"};

/// Magnitudes (cell) of the first two maxima of L, the time of the first from
/// the start and of the second from the first (day).
struct OutputQuad {
  std::array<double, 4> values{};
  std::array<bool, 4> valid{};

  std::vector<std::optional<double>> as_outputs() const;
};

OutputQuad evaluate_outputs(const Scenario& scenario, const SweepOptions& options = {});

/// How a run without a second maximum enters the analysis. Censor records the
/// magnitude as 0 and the time as the rest of the horizon, i.e. no regrowth
/// within it;
/// Exclude drops the run from that output.
enum class MissingPeak { Censor, Exclude };

std::string_view to_string(MissingPeak policy);
MissingPeak parse_missing_peak(std::string_view text);

/// Censored copy of `quad` (first-peak entries are left untouched).
OutputQuad censor_missing(const OutputQuad& quad, double horizon);

struct PawnParameterResult {
  std::string name;
  std::vector<double> conditioning_values;
  std::vector<double> ks;  // NaN where a conditional sample had no valid output
  std::vector<std::vector<double>> conditional;  // valid outputs per conditioning point
  double median_ks = 0.0;
  double relative_index = 0.0;
  double ks_critical = 0.0;
  double coverage = 1.0;  // valid fraction of this pair's evaluations
  bool aborted = false;   // more than half of the evaluations were invalid
};

struct PawnOutputResult {
  std::string name;
  std::vector<double> unconditional;  // valid outputs
  double coverage = 1.0;
  bool aborted = false;
  std::vector<PawnParameterResult> parameters;
};

struct PawnResult {
  SamplingPlan plan;
  std::vector<PawnOutputResult> outputs;

  const PawnOutputResult& output(std::string_view name) const;
};

using PawnModel = std::function<std::vector<std::optional<double>>(const Scenario&)>;

/// PAWN analysis of an arbitrary model around `base`: unconditional sample,
/// conditional samples per conditioning value, KS distance of each to the
/// unconditional ECDF, median KS per parameter, normalised indices per output.
/// Invalid outputs (nullopt) are excluded listwise per output.
PawnResult pawn_analysis(const SamplingPlan& plan, const Scenario& base, const std::vector<std::string>& output_names,
                         const PawnModel& model, unsigned workers = 1);

/// PAWN indices of the four peak outputs of the CAR T model.
PawnResult pawn_indices(const SamplingPlan& plan, const SweepOptions& options = {},
                        const Scenario& base = Scenario{}, MissingPeak missing = MissingPeak::Censor);

}  // namespace cart
