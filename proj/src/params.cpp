#include "cart/params.hpp"

#include <cmath>
#include <string>

namespace cart {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw RangeError(what);
}

void require_nonnegative(double v, std::string_view key) {
  require(std::isfinite(v) && v >= 0.0, std::string(key) + " must be finite and >= 0");
}

void require_positive(double v, std::string_view key) {
  require(std::isfinite(v) && v > 0.0, std::string(key) + " must be finite and > 0");
}

}  // namespace

void validate(const ModelParams& p) {
  require_nonnegative(p.rho_C, "rho_C");
  require_nonnegative(p.rho_L, "rho_L");
  require_nonnegative(p.alpha, "alpha");
  require_nonnegative(p.I0, "I0");
  require_positive(p.tau_C, "tau_C");
  require_positive(p.tau_I, "tau_I");
  require_positive(p.tau_B, "tau_B");
}

void validate(const InitialState& init) {
  require_nonnegative(init.C0, "C0");
  require_nonnegative(init.L0, "L0");
  require_nonnegative(init.B0, "B0");
}

void validate(const Scenario& scenario) {
  validate(scenario.params);
  validate(scenario.init);
}

const ParameterInfo& parameter_info(std::string_view key) {
  for (const auto& info : kParameterTable) {
    if (info.key == key) return info;
  }
  throw std::out_of_range("unknown parameter '" + std::string(key) + "'");
}

bool is_parameter_key(std::string_view key) {
  for (const auto& info : kParameterTable) {
    if (info.key == key) return true;
  }
  return false;
}

bool is_scenario_key(std::string_view key) { return key == "tauC_rhoC" || is_parameter_key(key); }

namespace {

template <typename S>
auto& field(S& s, std::string_view key) {
  if (key == "rho_C") return s.params.rho_C;
  if (key == "tau_C") return s.params.tau_C;
  if (key == "rho_L") return s.params.rho_L;
  if (key == "alpha") return s.params.alpha;
  if (key == "I0") return s.params.I0;
  if (key == "tau_I") return s.params.tau_I;
  if (key == "tau_B") return s.params.tau_B;
  if (key == "C0") return s.init.C0;
  if (key == "L0") return s.init.L0;
  if (key == "B0") return s.init.B0;
  throw std::out_of_range("unknown parameter '" + std::string(key) + "'");
}

}  // namespace

double get_value(const Scenario& scenario, std::string_view key) {
  if (key == "tauC_rhoC") return scenario.params.stimulation_product();
  return field(scenario, key);
}

void set_value(Scenario& scenario, std::string_view key, double value) {
  if (key == "tauC_rhoC") {
    scenario.params.rho_C = value / scenario.params.tau_C;
    return;
  }
  field(scenario, key) = value;
}

}  // namespace cart
