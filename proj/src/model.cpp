#include "cart/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cart {

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::P1: return "P1";
    case EquilibriumKind::P2: return "P2";
    case EquilibriumKind::P3: return "P3";
  }
  return "?";
}

double coexistence_tumor_level(const ModelParams& p) {
  return p.stimulation_scale() - p.I0 * (1.0 + p.tau_B / (p.tau_I * (1.0 + p.tau_B * p.rho_L)));
}

EquilibriumPoint equilibrium(EquilibriumKind kind, const ModelParams& p) {
  EquilibriumPoint point;
  point.kind = kind;
  switch (kind) {
    case EquilibriumKind::P1:
      point.coords = State(0.0, 0.0, p.I0 * p.tau_B / p.tau_I);
      break;
    case EquilibriumKind::P2: {
      if (p.rho_C == 0.0 || p.alpha == 0.0) {
        point.defined = false;
        break;
      }
      const double scale = p.stimulation_scale();
      const double gap = scale - p.I0;
      if (gap == 0.0) {
        point.defined = false;
        point.ill_conditioned = true;
        break;
      }
      point.ill_conditioned = std::abs(gap) < 1e-6 * scale;
      const double C2 = (p.I0 / (p.tau_I * gap) - 1.0 / p.tau_B) / p.alpha;
      point.coords = State(C2, 0.0, gap);
      break;
    }
    case EquilibriumKind::P3: {
      if (p.rho_C == 0.0 || p.alpha == 0.0) {
        point.defined = false;
        break;
      }
      point.coords = State(p.rho_L / p.alpha, coexistence_tumor_level(p),
                           p.I0 / (p.tau_I * (p.rho_L + 1.0 / p.tau_B)));
      break;
    }
  }
  return point;
}

std::array<EquilibriumPoint, 3> equilibria(const ModelParams& params) {
  return {equilibrium(EquilibriumKind::P1, params), equilibrium(EquilibriumKind::P2, params),
          equilibrium(EquilibriumKind::P3, params)};
}

double relative_residual(const State& x, const ModelParams& params) {
  return rhs(x, params).norm() / std::max(1.0, x.cwiseAbs().maxCoeff());
}

bool is_biological(const EquilibriumPoint& point) {
  return point.defined && (point.coords.array() >= 0.0).all();
}

State no_therapy_solution(const ModelParams& p, const State& init, double t) {
  if (init(kCarT) != 0.0) {
    throw std::invalid_argument("no_therapy_solution requires C0 == 0");
  }
  const double B_inf = p.I0 * p.tau_B / p.tau_I;
  return State(0.0, std::exp(p.rho_L * t) * init(kLeukemic),
               B_inf + std::exp(-t / p.tau_B) * (init(kBCell) - B_inf));
}

State clamp_roundoff(const State& x, double tolerance) {
  return x.unaryExpr([tolerance](double v) { return (v < 0.0 && v > -tolerance) ? 0.0 : v; });
}

}  // namespace cart
