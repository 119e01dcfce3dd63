#include "cart/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cart {
namespace {

using cplx = std::complex<double>;

cplx polish(const CubicCoeffs& c, cplx x) {
  const cplx d = c.derivative(x);
  if (std::abs(d) == 0.0) return x;
  const cplx refined = x - c(x) / d;
  return std::abs(c(refined)) <= std::abs(c(x)) ? refined : x;
}

// Roots of x^2 + b x + c without cancellation.
std::array<cplx, 2> quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) return {cplx(0.0), cplx(0.0)};
    return {cplx(q), cplx(c / q)};
  }
  const double re = -0.5 * b;
  const double im = 0.5 * std::sqrt(-disc);
  return {cplx(re, im), cplx(re, -im)};
}

}  // namespace

double CubicCoeffs::max_abs() const { return std::max({std::abs(a2), std::abs(a1), std::abs(a0)}); }

double discriminant(const CubicCoeffs& c) {
  const double b = c.a2, d = c.a1, e = c.a0;
  return 18.0 * b * d * e - 4.0 * b * b * b * e + b * b * d * d - 4.0 * d * d * d - 27.0 * e * e;
}

bool routh_hurwitz_stable(const CubicCoeffs& c) { return c.a2 > 0.0 && c.a0 > 0.0 && c.a2 * c.a1 > c.a0; }

CubicRoots cubic_roots(const CubicCoeffs& c) {
  // lambda = x - a2/3 gives x^3 + p x + q = 0.
  const double shift = c.a2 / 3.0;
  const double p = c.a1 - c.a2 * shift;
  const double q = (2.0 / 27.0) * c.a2 * c.a2 * c.a2 - c.a2 * c.a1 / 3.0 + c.a0;

  CubicRoots roots;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double delta = half_q * half_q + third_p * third_p * third_p;

  if (p == 0.0 && q == 0.0) {
    roots.fill(cplx(-shift));
  } else if (delta <= 0.0) {
    // Three real roots (trigonometric form); p < 0 here.
    const double m = 2.0 * std::sqrt(-third_p);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots[k] = polish(c, cplx(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift));
    }
  } else {
    // One real root; the pair follows from deflation so it stays conjugate.
    const double A = -std::copysign(std::cbrt(std::abs(half_q) + std::sqrt(delta)), q);
    const double B = (A == 0.0) ? 0.0 : -third_p / A;
    const double real_root = polish(c, cplx(A + B - shift)).real();
    const double b = c.a2 + real_root;
    // Pick the better-conditioned constant term of the quadratic factor.
    const double constant = (std::abs(real_root) > 1.0 && std::abs(c.a0) > 0.0) ? -c.a0 / real_root
                                                                                 : c.a1 + real_root * b;
    const auto pair = quadratic_roots(b, constant);
    roots = {cplx(real_root), pair[0], pair[1]};
  }

  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return roots;
}

}  // namespace cart
