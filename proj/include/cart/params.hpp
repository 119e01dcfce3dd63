#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace cart {

// Cell counts ordered (C, L, B): CAR T-cells, leukemic cells, B-cells.
template <typename Scalar>
using State3 = Eigen::Matrix<Scalar, 3, 1>;
using State = State3<double>;

enum Component : Eigen::Index { kCarT = 0, kLeukemic = 1, kBCell = 2 };

/// Thrown when a parameter violates the positivity preconditions of the model.
class RangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rate and lifetime parameters of the three-population model.
/// Units: cells and days throughout.
struct ModelParams {
  double rho_C = 1e-11;  // CAR T stimulation per encounter (1/(day cell))
  double tau_C = 20.0;   // CAR T lifetime (day)
  double rho_L = 0.2;    // leukemic growth rate (1/day)
  double alpha = 1e-11;  // killing efficiency (1/(day cell))
  double I0 = 1e9;       // bone-marrow B-cell output (cell)
  double tau_I = 4.0;    // B-cell maturation time (day)
  double tau_B = 45.0;   // B-cell lifetime (day)

  static ModelParams standard() { return {}; }

  /// tau_C * rho_C, the composite axis of the region maps.
  double stimulation_product() const { return tau_C * rho_C; }
  /// 1 / (tau_C * rho_C), the I0 value of the green threshold.
  double stimulation_scale() const { return 1.0 / (tau_C * rho_C); }

  bool operator==(const ModelParams&) const = default;
};

struct InitialState {
  double C0 = 5e7;
  double L0 = 5e10;
  double B0 = 5e8;

  State vector() const { return State(C0, L0, B0); }
  bool operator==(const InitialState&) const = default;
};

/// A full parameterisation of one run: model parameters plus initial data.
struct Scenario {
  ModelParams params;
  InitialState init;

  bool operator==(const Scenario&) const = default;
};

/// Throws RangeError unless rates are >= 0, lifetimes > 0 and all finite.
void validate(const ModelParams& params);
/// Throws RangeError unless all initial counts are finite and >= 0.
void validate(const InitialState& init);
void validate(const Scenario& scenario);

struct ParameterInfo {
  std::string_view key;
  double standard;
  double range_min;
  double range_max;
  std::string_view unit;
  std::string_view description;
};

// Standard values and admissible ranges for every configurable quantity.
inline constexpr std::array<ParameterInfo, 10> kParameterTable{{
    {"rho_C", 1e-11, 5e-12, 5e-11, "1/(day cell)", "Stimulation of CAR T-cells"},
    {"tau_C", 20.0, 14.0, 30.0, "day", "Activated CAR T-cell lifetime"},
    {"rho_L", 0.2, 0.1, 0.3, "1/day", "Leukemic cell growth rate"},
    {"alpha", 1e-11, 5e-12, 5e-11, "1/(day cell)", "Killing efficiency of CAR T-cells"},
    {"I0", 1e9, 5e8, 5e9, "cell", "Bone marrow B-cell output"},
    {"tau_I", 4.0, 1.0, 7.0, "day", "B-cell maturation time"},
    {"tau_B", 45.0, 30.0, 60.0, "day", "B-cell lifetime"},
    {"L0", 5e10, 1e10, 1e11, "cell", "Initial tumor burden"},
    {"C0", 5e7, 1e7, 1e8, "cell", "CAR T-cell dose"},
    {"B0", 5e8, 1e8, 1e9, "cell", "Initial B-cell load"},
}};

/// Lookup in kParameterTable; throws std::out_of_range for unknown keys.
const ParameterInfo& parameter_info(std::string_view key);
bool is_parameter_key(std::string_view key);

/// Named access to a scenario value. Besides the ten table keys, "tauC_rhoC"
/// addresses the composite product: setting it rescales rho_C with tau_C held.
double get_value(const Scenario& scenario, std::string_view key);
void set_value(Scenario& scenario, std::string_view key, double value);
bool is_scenario_key(std::string_view key);

}  // namespace cart
