#include "cart/pawn.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "cart/parallel.hpp"
#include "cart/stats.hpp"

namespace cart {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_dummy(std::string_view name) { return name.starts_with("dummy"); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t block, std::uint64_t draw,
                       std::uint64_t dim) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ block);
  h = mix64(h ^ draw);
  h = mix64(h ^ dim);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<VariedParameter> SamplingPlan::default_varied() {
  std::vector<VariedParameter> out;
  for (const char* name : {"rho_C", "tau_C", "I0", "C0", "L0"}) {
    const auto& info = parameter_info(name);
    out.push_back({name, info.range_min, info.range_max});
  }
  return out;
}

void SamplingPlan::validate() const {
  if (varied.empty()) throw std::invalid_argument("sampling plan varies no parameters");
  if (n_unconditional < 10 || n_conditioning_points < 10 || n_conditional < 10) {
    throw std::invalid_argument("sampling plan counts must be >= 10");
  }
  std::set<std::string> seen;
  for (const auto& v : varied) {
    if (!seen.insert(v.name).second) throw std::invalid_argument("parameter '" + v.name + "' listed twice");
    if (!(std::isfinite(v.min) && std::isfinite(v.max) && v.max > v.min)) {
      throw std::invalid_argument("parameter '" + v.name + "' needs min < max");
    }
    if (is_dummy(v.name)) continue;
    if (!is_parameter_key(v.name)) throw std::invalid_argument("unknown parameter '" + v.name + "'");
    const auto& info = parameter_info(v.name);
    const double slack = 1e-12 * info.range_max;
    if (v.min < info.range_min - slack || v.max > info.range_max + slack) {
      throw RangeError("range of '" + v.name + "' leaves its table range");
    }
  }
}

double SamplingPlan::conditioning_value(std::size_t p, std::size_t i) const {
  const auto& v = varied.at(p);
  return v.min + (v.max - v.min) * static_cast<double>(i) / static_cast<double>(n_conditioning_points - 1);
}

std::vector<std::optional<double>> OutputQuad::as_outputs() const {
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid[i]) out[i] = values[i];
  }
  return out;
}

OutputQuad evaluate_outputs(const Scenario& scenario, const SweepOptions& options) {
  const PeakSeries series = detect_peaks(scenario.params, scenario.init, options.horizon, 2, options.integration);
  OutputQuad quad;
  quad.values.fill(kNaN);
  if (series.size() >= 1) {
    quad.values[0] = series.peaks[0].L;
    quad.values[2] = series.peaks[0].t;
    quad.valid[0] = quad.valid[2] = true;
  }
  if (series.size() >= 2) {
    quad.values[1] = series.peaks[1].L;
    quad.values[3] = series.peaks[1].t - series.peaks[0].t;
    quad.valid[1] = quad.valid[3] = true;
  }
  return quad;
}

std::string_view to_string(MissingPeak policy) {
  return policy == MissingPeak::Censor ? "censor" : "exclude";
}

MissingPeak parse_missing_peak(std::string_view text) {
  if (text == "censor") return MissingPeak::Censor;
  if (text == "exclude") return MissingPeak::Exclude;
  throw std::invalid_argument("unknown missing-peak policy '" + std::string(text) + "' (censor, exclude)");
}

OutputQuad censor_missing(const OutputQuad& quad, double horizon) {
  OutputQuad out = quad;
  if (!out.valid[1]) out.values[1] = 0.0;
  if (!out.valid[3]) out.values[3] = horizon - out.values[2];
  // Without a first peak there is nothing to anchor the second one to.
  out.valid[1] = out.valid[3] = out.valid[0];
  return out;
}

const PawnOutputResult& PawnResult::output(std::string_view name) const {
  for (const auto& o : outputs) {
    if (o.name == name) return o;
  }
  throw std::out_of_range("no PAWN output named '" + std::string(name) + "'");
}

PawnResult pawn_analysis(const SamplingPlan& plan, const Scenario& base, const std::vector<std::string>& output_names,
                         const PawnModel& model, unsigned workers) {
  plan.validate();
  const std::size_t n_par = plan.varied.size();
  const std::size_t n_u = plan.n_unconditional;
  const std::size_t n_cp = plan.n_conditioning_points;
  const std::size_t n_c = plan.n_conditional;
  const std::size_t n_total = n_u + n_par * n_cp * n_c;

  const auto draw = [&](std::uint64_t stream, std::uint64_t block, std::uint64_t index, std::size_t fixed_param,
                        double fixed_value) {
    Scenario s = base;
    for (std::size_t d = 0; d < n_par; ++d) {
      const auto& v = plan.varied[d];
      if (is_dummy(v.name)) continue;
      const double value = (d == fixed_param) ? fixed_value
                                              : v.min + (v.max - v.min) * counter_uniform(plan.seed, stream, block, index, d);
      set_value(s, v.name, value);
    }
    return s;
  };

  // Flat evaluation list: unconditional draws first, then parameter-major
  // conditional blocks.
  const auto outputs = parallel_map<std::vector<std::optional<double>>>(n_total, workers, [&](std::size_t i) {
    Scenario s;
    if (i < n_u) {
      s = draw(0, 0, i, n_par, 0.0);
    } else {
      const std::size_t rest = i - n_u;
      const std::size_t p = rest / (n_cp * n_c);
      const std::size_t j = (rest / n_c) % n_cp;
      const std::size_t k = rest % n_c;
      s = draw(1 + p, j, k, p, plan.conditioning_value(p, j));
    }
    auto y = model(s);
    if (y.size() != output_names.size()) throw std::runtime_error("PAWN model returned the wrong number of outputs");
    return y;
  });

  PawnResult result;
  result.plan = plan;
  for (std::size_t o = 0; o < output_names.size(); ++o) {
    PawnOutputResult out;
    out.name = output_names[o];
    for (std::size_t i = 0; i < n_u; ++i) {
      if (outputs[i][o]) out.unconditional.push_back(*outputs[i][o]);
    }
    out.coverage = static_cast<double>(out.unconditional.size()) / static_cast<double>(n_u);
    out.aborted = out.coverage < 0.5;
    const std::optional<EmpiricalCDF> reference =
        out.unconditional.empty() ? std::nullopt : std::optional<EmpiricalCDF>(EmpiricalCDF(out.unconditional));

    double index_sum = 0.0;
    for (std::size_t p = 0; p < n_par; ++p) {
      PawnParameterResult pr;
      pr.name = plan.varied[p].name;
      std::size_t valid = 0;
      std::size_t min_valid = n_c;
      std::vector<double> finite_ks;
      for (std::size_t j = 0; j < n_cp; ++j) {
        pr.conditioning_values.push_back(plan.conditioning_value(p, j));
        std::vector<double> sample;
        for (std::size_t k = 0; k < n_c; ++k) {
          const auto& y = outputs[n_u + (p * n_cp + j) * n_c + k][o];
          if (y) sample.push_back(*y);
        }
        valid += sample.size();
        min_valid = std::min(min_valid, sample.size());
        double ks = kNaN;
        if (reference && !sample.empty()) {
          ks = ks_statistic(*reference, EmpiricalCDF(sample));
          finite_ks.push_back(ks);
        }
        pr.ks.push_back(ks);
        pr.conditional.push_back(std::move(sample));
      }
      pr.coverage = static_cast<double>(valid) / static_cast<double>(n_cp * n_c);
      pr.aborted = out.aborted || pr.coverage < 0.5 || finite_ks.empty();
      if (!pr.aborted) {
        pr.median_ks = median(finite_ks);
        pr.ks_critical = ks_critical(out.unconditional.size(), std::max<std::size_t>(min_valid, 1));
        index_sum += pr.median_ks;
      } else {
        pr.median_ks = kNaN;
        pr.ks_critical = kNaN;
        pr.relative_index = kNaN;
      }
      out.parameters.push_back(std::move(pr));
    }
    for (auto& pr : out.parameters) {
      if (!pr.aborted) pr.relative_index = index_sum > 0.0 ? pr.median_ks / index_sum : 0.0;
    }
    result.outputs.push_back(std::move(out));
  }
  return result;
}

PawnResult pawn_indices(const SamplingPlan& plan, const SweepOptions& options, const Scenario& base,
                        MissingPeak missing) {
  std::vector<std::string> names(kOutputNames.begin(), kOutputNames.end());
  return pawn_analysis(
      plan, base, names,
      [&options, missing](const Scenario& s) {
        const OutputQuad quad = evaluate_outputs(s, options);
        return (missing == MissingPeak::Censor ? censor_missing(quad, options.horizon) : quad).as_outputs();
      },
      options.workers);
}

}  // namespace cart
