#pragma once

#include <cmath>
#include <random>

#include "cart/params.hpp"

namespace cart::testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Uniform draw of every table parameter over its range.
inline Scenario random_scenario(std::mt19937_64& rng) {
  Scenario s;
  for (const auto& info : kParameterTable) {
    std::uniform_real_distribution<double> u(info.range_min, info.range_max);
    set_value(s, info.key, u(rng));
  }
  return s;
}

}  // namespace cart::testing
