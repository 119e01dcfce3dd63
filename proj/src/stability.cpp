#include "cart/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

namespace cart {

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::NonBiological: return "NonBiological";
    case RegionLabel::R1: return "R1";
    case RegionLabel::R2: return "R2";
    case RegionLabel::R3: return "R3";
    case RegionLabel::R4: return "R4";
  }
  return "?";
}

double FocusParams::period() const { return 2.0 * std::numbers::pi / omega; }

double FocusParams::deviation_decay_ratio() const {
  return std::exp(-2.0 * std::numbers::pi * alpha_re / omega);
}

std::array<double, 3> eigenvalues_p1(const ModelParams& p) {
  return {p.rho_L, -1.0 / p.tau_B, p.rho_C * p.I0 * (1.0 + p.tau_B / p.tau_I) - 1.0 / p.tau_C};
}

Eigenvalues eigenvalues_p2(const ModelParams& p) {
  const EquilibriumPoint P2 = equilibrium(EquilibriumKind::P2, p);
  if (!P2.defined) throw std::domain_error("P2 is undefined for these parameters");
  const double C2 = P2.coords(kCarT);
  const double B2 = P2.coords(kBCell);
  // trace of the (C, B) block is -I0 / (tau_I (1/(tau_C rho_C) - I0)) = -(alpha C2 + 1/tau_B)
  const double trace = -p.I0 / (p.tau_I * (p.stimulation_scale() - p.I0));
  const std::complex<double> root = std::sqrt(std::complex<double>(trace * trace - 4.0 * p.alpha * p.rho_C * B2 * C2));
  return {std::complex<double>(p.rho_L - p.alpha * C2), 0.5 * (trace + root), 0.5 * (trace - root)};
}

CubicCoeffs char_poly_p3(const ModelParams& p) {
  const double damping = 1.0 / p.tau_B + p.rho_L;
  const double L3 = coexistence_tumor_level(p);
  return {damping, p.rho_C * p.rho_L * (p.stimulation_scale() - p.I0), p.rho_C * p.rho_L * L3 * damping};
}

CubicCoeffs characteristic_polynomial(const Eigen::Matrix3d& J) {
  const double trace = J.trace();
  const double minors = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0) + J(0, 0) * J(2, 2) - J(0, 2) * J(2, 0) +
                        J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1);
  return {-trace, minors, -J.determinant()};
}

EquilibriumReport classify(const EquilibriumPoint& point, const ModelParams& params) {
  EquilibriumReport report;
  report.point = point;
  if (!point.defined) {
    throw std::domain_error(std::string(to_string(point.kind)) + " is undefined for these parameters");
  }
  switch (point.kind) {
    case EquilibriumKind::P1: {
      const auto ev = eigenvalues_p1(params);
      report.eigenvalues = {ev[0], ev[1], ev[2]};
      break;
    }
    case EquilibriumKind::P2: report.eigenvalues = eigenvalues_p2(params); break;
    case EquilibriumKind::P3: report.eigenvalues = cubic_roots(char_poly_p3(params)); break;
  }
  for (const auto& lambda : report.eigenvalues) {
    const double tol = kZeroRealPartTolerance * std::max(1.0, std::abs(lambda));
    if (lambda.real() < -tol) {
      ++report.dim_stable;
    } else if (lambda.real() > tol) {
      ++report.dim_unstable;
    } else {
      report.hyperbolic = false;
    }
  }
  report.biological = is_biological(point);
  report.stable = report.dim_stable == 3;
  return report;
}

EquilibriumReport classify(EquilibriumKind kind, const ModelParams& params) {
  return classify(equilibrium(kind, params), params);
}

Thresholds thresholds(const ModelParams& p) {
  const double scale = p.stimulation_scale();
  return {scale * (1.0 - p.tau_B / (p.tau_B + p.tau_I)),
          scale * (1.0 - p.tau_B / (p.tau_B + p.tau_I * (1.0 + p.tau_B * p.rho_L))), scale};
}

RegionResult region_classify(const ModelParams& p) {
  const double I0 = p.I0;
  if (I0 < 0.0) return {RegionLabel::NonBiological, false};
  if (I0 == 0.0) return {RegionLabel::R1, true};
  const Thresholds t = thresholds(p);
  const auto at = [I0](double threshold) { return std::abs(I0 - threshold) <= 1e-12 * std::abs(threshold); };
  if (at(t.blue)) return {RegionLabel::R2, true};
  if (at(t.red)) return {RegionLabel::R3, true};
  if (at(t.green)) return {RegionLabel::R4, true};
  if (I0 < t.blue) return {RegionLabel::R1, false};
  if (I0 < t.red) return {RegionLabel::R2, false};
  if (I0 < t.green) return {RegionLabel::R3, false};
  return {RegionLabel::R4, false};
}

double hopf_l1(const ModelParams& p) {
  return std::pow(p.tau_C, 1.5) * p.rho_C * p.rho_C / (3.0 * std::sqrt(p.rho_L));
}

FocusParams focus_params(const ModelParams& params) {
  const EquilibriumPoint P3 = equilibrium(EquilibriumKind::P3, params);
  if (!is_biological(P3)) throw std::domain_error("P3 is not biologically meaningful for these parameters");
  const CubicCoeffs poly = char_poly_p3(params);
  FocusParams focus;
  if (discriminant(poly) >= 0.0) return focus;

  const CubicRoots roots = cubic_roots(poly);
  // Exactly one root is real; the other two are a conjugate pair.
  const auto real_it = std::min_element(roots.begin(), roots.end(), [](auto a, auto b) {
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  const auto complex_it = std::max_element(roots.begin(), roots.end(), [](auto a, auto b) {
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  focus.strong_eig = real_it->real();
  focus.alpha_re = complex_it->real();
  focus.omega = std::abs(complex_it->imag());
  focus.is_focus = focus.omega > 0.0;
  return focus;
}

double FocusApproximation::operator()(const FocusParams& focus, double x3, double t) const {
  const double phase = focus.omega * t + d;
  return K * std::exp(focus.alpha_re * t) * (k_s * std::sin(phase) + k_c * std::cos(phase)) + x3;
}

bool p2_block_eigenvalues_real(const ModelParams& p) {
  const double I0 = p.I0, rC = p.rho_C, tC = p.tau_C, tI = p.tau_I, tB = p.tau_B;
  const double value = 4.0 / (tB * tC * tC * tC * rC * rC) - 4.0 * I0 / (tC * tC * rC) * (1.0 / tI + 3.0 / tB) +
                       I0 * I0 * (1.0 / (tI * tI) + 8.0 / (tI * tC) + 12.0 / (tB * tC)) -
                       4.0 * rC * I0 * I0 * I0 * (1.0 / tI + 1.0 / tB);
  return value > 0.0;
}

std::vector<double> focus_band_edges(const ModelParams& params, double product_lo, double product_hi,
                                     int scan_points, double rel_tol) {
  if (!(product_lo > 0.0 && product_hi > product_lo) || scan_points < 2) {
    throw std::invalid_argument("focus_band_edges: need 0 < product_lo < product_hi and scan_points >= 2");
  }
  const auto disc_sign = [&params](double product) {
    ModelParams p = params;
    p.rho_C = product / p.tau_C;
    const double d = discriminant(char_poly_p3(p));
    return (d > 0.0) - (d < 0.0);
  };
  const double log_lo = std::log(product_lo), log_hi = std::log(product_hi);
  std::vector<double> edges;
  double prev_x = product_lo;
  int prev_s = disc_sign(prev_x);
  for (int i = 1; i < scan_points; ++i) {
    const double x = std::exp(log_lo + (log_hi - log_lo) * i / (scan_points - 1));
    const int s = disc_sign(x);
    if (s != prev_s) {
      double a = prev_x, b = x;
      while (b - a > rel_tol * a) {
        const double mid = std::sqrt(a * b);
        if (disc_sign(mid) == prev_s) {
          a = mid;
        } else {
          b = mid;
        }
      }
      edges.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_s = s;
  }
  return edges;
}

}  // namespace cart
