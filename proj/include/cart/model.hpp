#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "cart/params.hpp"

namespace cart {

/// Vector field of the model with a constant bone-marrow B-cell source:
///
///   dC/dt = C (rho_C (L + B + I0) - 1/tau_C)
///   dL/dt = L (rho_L - alpha C)
///   dB/dt = I0/tau_I - B (alpha C + 1/tau_B)
///
/// Setting I0 = 0 recovers the reduced model without bone-marrow input.
template <typename Derived>
State3<typename Derived::Scalar> rhs(const Eigen::MatrixBase<Derived>& y, const ModelParams& p) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  const Scalar C = y(kCarT), L = y(kLeukemic), B = y(kBCell);
  const Scalar rho_C(p.rho_C), rho_L(p.rho_L), alpha(p.alpha), I0(p.I0);
  const Scalar tau_C(p.tau_C), tau_I(p.tau_I), tau_B(p.tau_B);
  State3<Scalar> dy;
  dy(kCarT) = C * (rho_C * (L + B + I0) - Scalar(1) / tau_C);
  dy(kLeukemic) = L * (rho_L - alpha * C);
  dy(kBCell) = I0 / tau_I - B * (alpha * C + Scalar(1) / tau_B);
  return dy;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> jacobian(const Eigen::MatrixBase<Derived>& y,
                                                       const ModelParams& p) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  const Scalar C = y(kCarT), L = y(kLeukemic), B = y(kBCell);
  const Scalar rho_C(p.rho_C), rho_L(p.rho_L), alpha(p.alpha), I0(p.I0);
  const Scalar tau_C(p.tau_C), tau_B(p.tau_B);
  Eigen::Matrix<Scalar, 3, 3> J;
  J << rho_C * (L + B + I0) - Scalar(1) / tau_C, rho_C * C, rho_C * C,  //
      -alpha * L, rho_L - alpha * C, Scalar(0),                         //
      -alpha * B, Scalar(0), -alpha * C - Scalar(1) / tau_B;
  return J;
}

enum class EquilibriumKind { P1, P2, P3 };

std::string_view to_string(EquilibriumKind kind);

struct EquilibriumPoint {
  EquilibriumKind kind = EquilibriumKind::P1;
  State coords = State::Zero();
  // False when a closed-form denominator vanishes (e.g. I0 == 1/(tau_C rho_C) for P2).
  bool defined = true;
  // P2 within 1e-6 (relative) of its singular locus.
  bool ill_conditioned = false;
};

/// Closed-form steady states: tumour-free without CAR T (P1), tumour-free with
/// CAR T persistence (P2) and coexistence (P3).
std::array<EquilibriumPoint, 3> equilibria(const ModelParams& params);
EquilibriumPoint equilibrium(EquilibriumKind kind, const ModelParams& params);

/// ||rhs(x)||_2 / max(1, max_i |x_i|).
double relative_residual(const State& x, const ModelParams& params);

/// Leukemic level of P3, 1/(tau_C rho_C) - I0 (1 + tau_B / (tau_I (1 + tau_B rho_L))).
double coexistence_tumor_level(const ModelParams& params);

/// True iff the point is defined and every coordinate is >= 0.
bool is_biological(const EquilibriumPoint& point);

/// Exact solution with no CAR T-cells: C stays 0, L grows exponentially and B
/// relaxes to I0 tau_B / tau_I. Throws std::invalid_argument if C0 != 0.
State no_therapy_solution(const ModelParams& params, const State& init, double t);

/// Copy with negative round-off in (-tolerance, 0) replaced by 0. Reporting only:
/// the integrator never clamps.
State clamp_roundoff(const State& x, double tolerance);

}  // namespace cart
