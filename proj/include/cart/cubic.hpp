#pragma once

#include <array>
#include <complex>

namespace cart {

/// Monic cubic lambda^3 + a2 lambda^2 + a1 lambda + a0.
struct CubicCoeffs {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  std::complex<double> operator()(std::complex<double> x) const { return ((x + a2) * x + a1) * x + a0; }
  std::complex<double> derivative(std::complex<double> x) const { return (3.0 * x + 2.0 * a2) * x + a1; }
  double max_abs() const;
};

using CubicRoots = std::array<std::complex<double>, 3>;

/// Roots via the depressed-cubic trigonometric / Cardano forms, each polished
/// with one Newton step. Sorted by real part descending (ties: imaginary part
/// descending); complex roots come as exact conjugate pairs.
CubicRoots cubic_roots(const CubicCoeffs& c);

/// 18 a2 a1 a0 - 4 a2^3 a0 + a2^2 a1^2 - 4 a1^3 - 27 a0^2.
/// Positive: three distinct real roots. Negative: one real root and a complex pair.
double discriminant(const CubicCoeffs& c);

/// All roots in the open left half plane: a2 > 0, a0 > 0 and a2 a1 > a0.
bool routh_hurwitz_stable(const CubicCoeffs& c);

}  // namespace cart
