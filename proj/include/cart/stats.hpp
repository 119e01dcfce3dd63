#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cart {

/// Right-continuous empirical distribution function F(x) = #{samples <= x} / n.
class EmpiricalCDF {
 public:
  /// Throws std::invalid_argument for empty or non-finite input.
  explicit EmpiricalCDF(std::span<const double> samples);

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

inline EmpiricalCDF ecdf(std::span<const double> samples) { return EmpiricalCDF(samples); }

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|, evaluated
/// at the union of jump points.
double ks_statistic(const EmpiricalCDF& a, const EmpiricalCDF& b);

/// One-sample KS statistic against the uniform distribution on [lo, hi].
double ks_uniform(std::span<const double> samples, double lo, double hi);

/// Asymptotic two-sample critical value c(level) sqrt((n + m) / (n m)), with
/// the tabulated c(0.05) = 1.36 (and 1.22, 1.48, 1.63, 1.73, 1.95 for 0.10,
/// 0.025, 0.01, 0.005, 0.001); other levels use sqrt(-ln(level / 2) / 2).
double ks_critical(std::size_t n, std::size_t m, double level = 0.05);

/// Median (mean of the two middle values for even sizes). Throws on empty input.
double median(std::vector<double> values);

}  // namespace cart
