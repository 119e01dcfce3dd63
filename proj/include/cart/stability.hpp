#pragma once

#include <array>
#include <complex>
#include <string_view>
#include <vector>

#include "cart/cubic.hpp"
#include "cart/model.hpp"

namespace cart {

using Eigenvalues = std::array<std::complex<double>, 3>;

/// Real parts with |Re| below this fraction of max(1, |lambda|) count as zero.
inline constexpr double kZeroRealPartTolerance = 1e-10;

struct EquilibriumReport {
  EquilibriumPoint point;
  Eigenvalues eigenvalues{};
  int dim_stable = 0;
  int dim_unstable = 0;
  bool hyperbolic = true;
  bool biological = false;
  bool stable = false;
};

enum class RegionLabel { NonBiological, R1, R2, R3, R4 };

std::string_view to_string(RegionLabel label);

struct RegionResult {
  RegionLabel label = RegionLabel::R1;
  // I0 sits on a threshold (0, blue, red or green); label is the region above it.
  bool on_boundary = false;

  bool operator==(const RegionResult&) const = default;
};

/// I0 values of the three threshold curves at fixed (tau_C rho_C, rho_L, tau_I, tau_B).
struct Thresholds {
  double blue = 0.0;   // transcritical P1/P2
  double red = 0.0;    // transcritical P2/P3 (critical B-cell input)
  double green = 0.0;  // 1/(tau_C rho_C): P2 singular, C unbounded above
};

struct FocusParams {
  double alpha_re = 0.0;    // real part of the complex pair
  double omega = 0.0;       // |imaginary part| of the complex pair
  double strong_eig = 0.0;  // real eigenvalue
  bool is_focus = false;

  double period() const;               // 2 pi / omega
  double deviation_decay_ratio() const;  // exp(-2 pi alpha_re / omega)
};

/// (rho_L, -1/tau_B, rho_C I0 (1 + tau_B/tau_I) - 1/tau_C).
std::array<double, 3> eigenvalues_p1(const ModelParams& params);

/// lambda1 = rho_L - alpha C2 and the roots of the (C, B) block.
/// Throws std::domain_error if P2 is undefined.
Eigenvalues eigenvalues_p2(const ModelParams& params);

/// Characteristic polynomial of the Jacobian at P3.
CubicCoeffs char_poly_p3(const ModelParams& params);

/// Monic characteristic polynomial det(lambda I - J) of a 3x3 matrix.
CubicCoeffs characteristic_polynomial(const Eigen::Matrix3d& J);

EquilibriumReport classify(const EquilibriumPoint& point, const ModelParams& params);
EquilibriumReport classify(EquilibriumKind kind, const ModelParams& params);

Thresholds thresholds(const ModelParams& params);
RegionResult region_classify(const ModelParams& params);

/// First Lyapunov coefficient at the Hopf point I0 = 0.
double hopf_l1(const ModelParams& params);

/// Complex-pair data of P3. Throws std::domain_error unless P3 is defined and
/// biologically meaningful.
FocusParams focus_params(const ModelParams& params);

/// x(t) = K e^{alpha t} (k_s sin(omega t + d) + k_c cos(omega t + d)) + x3.
struct FocusApproximation {
  double K = 0.5e11;
  double k_s = 1.0;
  double k_c = 1.0;
  double d = 4.8;

  double operator()(const FocusParams& focus, double x3, double t) const;
};

/// Diagnostic: the quartic-in-I0 condition under which the P2 (C, B) block has
/// real eigenvalues.
bool p2_block_eigenvalues_real(const ModelParams& params);

/// tau_C rho_C values in [product_lo, product_hi] where the discriminant of the
/// P3 characteristic polynomial changes sign (tau_C held fixed). Located by a
/// log-spaced scan followed by bisection to rel_tol.
std::vector<double> focus_band_edges(const ModelParams& params, double product_lo, double product_hi,
                                     int scan_points = 400, double rel_tol = 1e-6);

}  // namespace cart
