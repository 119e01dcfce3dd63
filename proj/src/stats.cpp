#include "cart/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cart {

EmpiricalCDF::EmpiricalCDF(std::span<const double> samples) : sorted_(samples.begin(), samples.end()) {
  if (sorted_.empty()) throw std::invalid_argument("ecdf needs at least one sample");
  if (!std::all_of(sorted_.begin(), sorted_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("ecdf samples must be finite");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_statistic(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  const auto& xa = a.sorted();
  const auto& xb = b.sorted();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  // Walk the merged jump points; after consuming every copy of the current
  // value both step functions are evaluated exactly at it.
  while (i < xa.size() || j < xb.size()) {
    const double x = (j >= xb.size() || (i < xa.size() && xa[i] <= xb[j])) ? xa[i] : xb[j];
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    sup = std::max(sup, std::abs(i / na - j / nb));
  }
  return sup;
}

double ks_uniform(std::span<const double> samples, double lo, double hi) {
  std::vector<double> u(samples.begin(), samples.end());
  if (u.empty()) throw std::invalid_argument("ks_uniform needs at least one sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double F = std::clamp((u[i] - lo) / (hi - lo), 0.0, 1.0);
    sup = std::max({sup, (i + 1) / n - F, F - i / n});
  }
  return sup;
}

double ks_critical(std::size_t n, std::size_t m, double level) {
  if (n == 0 || m == 0) throw std::invalid_argument("ks_critical needs n, m >= 1");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("ks_critical level must lie in (0, 1)");
  struct Entry {
    double level, c;
  };
  static constexpr Entry kTable[] = {{0.10, 1.22}, {0.05, 1.36}, {0.025, 1.48},
                                     {0.01, 1.63}, {0.005, 1.73}, {0.001, 1.95}};
  double c = std::sqrt(-0.5 * std::log(0.5 * level));
  for (const auto& e : kTable) {
    if (std::abs(e.level - level) < 1e-12) c = e.c;
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace cart
