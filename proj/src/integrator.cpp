#include "cart/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cart {

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::TimeEnd: return "TimeEnd";
    case Termination::Blowup: return "Blowup";
    case Termination::Tolerance: return "Tolerance";
    case Termination::Stopped: return "Stopped";
  }
  return "?";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::LeukemicPeak: return "leukemic_peak";
    case EventKind::Blowup: return "blowup";
  }
  return "?";
}

std::string_view to_string(PeakStop stop) {
  switch (stop) {
    case PeakStop::MaxPeaks: return "MaxPeaks";
    case PeakStop::TimeEnd: return "TimeEnd";
    case PeakStop::Blowup: return "Blowup";
    case PeakStop::Tolerance: return "Tolerance";
    case PeakStop::AmplitudeFloor: return "AmplitudeFloor";
    case PeakStop::NoFurtherPeaks: return "NoFurtherPeaks";
  }
  return "?";
}

State DenseStep::operator()(double t) const {
  const double theta = (t - t0) / h_;
  const double theta1 = 1.0 - theta;
  return y0 + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
}

namespace {

// Dormand-Prince 5(4) tableau; nodes are not needed since the field is autonomous.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension coefficients (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

double error_norm(const State& err, const State& y0, const State& y1, const IntegrationOptions& o) {
  const State scale = (o.abs_tol + o.rel_tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
  const double e = (err.cwiseAbs().array() / scale.array()).maxCoeff();
  return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

double initial_step(const ModelParams& params, const State& y0, const State& f0, double span,
                    const IntegrationOptions& o) {
  const State scale = (o.abs_tol + o.rel_tol * y0.cwiseAbs().array()).matrix();
  const double d0 = (y0.array() / scale.array()).matrix().norm();
  const double d1n = (f0.array() / scale.array()).matrix().norm();
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, span);
  const State y1 = y0 + h0 * f0;
  const State f1 = rhs(y1, params);
  const double d2 = ((f1 - f0).array() / scale.array()).matrix().norm() / h0;
  const double h1 = (std::max(d1n, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1n, d2), 0.2);
  return std::min({100.0 * h0, h1, span});
}

// Locate the first t in (a, b] with f(t) >= 0 given f(a) < 0 <= f(b).
template <typename F>
double bisect_first(F&& f, double a, double b, double tol) {
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (f(mid) >= 0.0) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return b;
}

}  // namespace

class StepperAccess {
 public:
  static void set(DenseStep& s, double h, const State& k1, const State& k3, const State& k4, const State& k5,
                  const State& k6, const State& k7) {
    const State ydiff = s.y1 - s.y0;
    const State bspl = h * k1 - ydiff;
    s.h_ = h;
    s.r2_ = ydiff;
    s.r3_ = bspl;
    s.r4_ = ydiff - h * k7 - bspl;
    s.r5_ = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
  }
};

Termination integrate_steps(const ModelParams& params, const State& y0, double t_end,
                            const IntegrationOptions& options,
                            const std::function<bool(const DenseStep&)>& on_step, StepStats* stats) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be > 0");
  }
  StepStats local;
  StepStats& st = stats ? *stats : local;
  st = StepStats{};
  st.min_component = y0.minCoeff();

  double t = 0.0;
  State y = y0;
  State k1 = rhs(y, params);
  double h = initial_step(params, y, k1, t_end, options);
  bool last_rejected = false;

  while (t < t_end) {
    if (h < options.min_step || t + h == t) return Termination::Tolerance;
    const bool final_step = t + h >= t_end;
    if (final_step) h = t_end - t;

    const State k2 = rhs(y + h * (a21 * k1), params);
    const State k3 = rhs(y + h * (a31 * k1 + a32 * k2), params);
    const State k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3), params);
    const State k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), params);
    const State k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), params);
    const State y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = rhs(y_new, params);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double norm = y_new.allFinite() ? error_norm(err, y, y_new, options)
                                          : std::numeric_limits<double>::infinity();
    if (norm > 1.0) {
      ++st.rejected;
      const double factor = std::isfinite(norm) ? std::max(kMinFactor, kSafety * std::pow(norm, -0.2)) : kMinFactor;
      h *= factor;
      last_rejected = true;
      continue;
    }

    ++st.accepted;
    DenseStep step;
    step.t0 = t;
    step.t1 = final_step ? t_end : t + h;
    step.y0 = y;
    step.y1 = y_new;
    StepperAccess::set(step, h, k1, k3, k4, k5, k6, k7);

    bool blowup = false;
    if (y_new.maxCoeff() > options.blowup_cap) {
      const double cap = options.blowup_cap;
      const double t_cross = bisect_first([&](double s) { return step(s).maxCoeff() - cap; }, step.t0, step.t1,
                                          options.event_time_tol);
      step.t1 = t_cross;
      step.y1 = step(t_cross);
      blowup = true;
    }
    st.min_component = std::min(st.min_component, step.y1.minCoeff());

    const bool keep_going = on_step(step);
    if (blowup) return Termination::Blowup;
    if (!keep_going) return Termination::Stopped;

    t = step.t1;
    y = y_new;
    k1 = k7;
    double factor = (norm == 0.0) ? kMaxFactor : kSafety * std::pow(norm, -0.2);
    factor = std::clamp(factor, kMinFactor, kMaxFactor);
    if (last_rejected) factor = std::min(factor, 1.0);
    h *= factor;
    last_rejected = false;
  }
  return Termination::TimeEnd;
}

namespace {

// Tracks zero crossings of g(t) = rho_L - alpha C(t) from + to - inside a step.
struct PeakFinder {
  const ModelParams& params;
  double tol;

  double g(const State& y) const { return params.rho_L - params.alpha * y(kCarT); }

  std::optional<Peak> find(const DenseStep& step) const {
    const double g0 = g(step.y0);
    const double g1 = g(step.y1);
    if (!(g0 > 0.0 && g1 <= 0.0)) return std::nullopt;
    const double t_peak = bisect_first([&](double s) { return -g(step(s)); }, step.t0, step.t1, tol);
    const double L = step(t_peak)(kLeukemic);
    if (!(L > 0.0)) return std::nullopt;
    return Peak{t_peak, L};
  }
};

}  // namespace

Trajectory integrate(const ModelParams& params, const InitialState& init, double t_end,
                     const IntegrationOptions& options) {
  validate(params);
  validate(init);
  Trajectory traj;
  const State y0 = init.vector();
  traj.samples.push_back({0.0, y0});
  const PeakFinder finder{params, options.event_time_tol};
  const double dt = options.sample_interval;
  std::size_t next_grid = 1;

  const auto push = [&traj](double t, const State& y) {
    if (t > traj.samples.back().t) traj.samples.push_back({t, y});
  };

  Sample last{0.0, y0};
  traj.terminated = integrate_steps(
      params, y0, t_end, options,
      [&](const DenseStep& step) {
        const auto peak = finder.find(step);
        if (dt > 0.0) {
          for (double tg = next_grid * dt; tg <= step.t1; tg = (++next_grid) * dt) {
            if (peak && peak->t < tg) push(peak->t, step(peak->t));
            push(tg, step(tg));
          }
        }
        if (peak) {
          push(peak->t, step(peak->t));
          traj.events.push_back({peak->t, EventKind::LeukemicPeak});
        }
        if (dt <= 0.0) push(step.t1, step.y1);
        last = {step.t1, step.y1};
        return true;
      },
      &traj.stats);
  push(last.t, last.y);

  if (traj.terminated == Termination::Blowup) {
    traj.events.push_back({traj.samples.back().t, EventKind::Blowup});
  }
  return traj;
}

PeakSeries detect_peaks(const ModelParams& params, const InitialState& init, double t_end, std::size_t max_peaks,
                        const IntegrationOptions& options) {
  validate(params);
  validate(init);
  PeakSeries series;
  if (max_peaks == 0) {
    series.stop = PeakStop::MaxPeaks;
    return series;
  }
  const PeakFinder finder{params, options.event_time_tol};
  const EquilibriumPoint P3 = equilibrium(EquilibriumKind::P3, params);
  const bool floor_active = P3.defined && P3.coords(kLeukemic) > 0.0;
  const double L3 = P3.coords(kLeukemic);
  bool collapsed = false;
  const bool single_crossing = params.rho_C * params.I0 - 1.0 / params.tau_C > 0.0;
  bool exhausted = false;

  const Termination term = integrate_steps(params, init.vector(), t_end, options, [&](const DenseStep& step) {
    const auto peak = finder.find(step);
    if (!peak) return true;
    if (floor_active && std::abs(peak->L - L3) < 1e-3 * L3) {
      collapsed = true;
      return false;
    }
    series.peaks.push_back(*peak);
    if (series.peaks.size() >= max_peaks) return false;
    exhausted = single_crossing;
    return !exhausted;
  });

  switch (term) {
    case Termination::TimeEnd: series.stop = PeakStop::TimeEnd; break;
    case Termination::Blowup: series.stop = PeakStop::Blowup; break;
    case Termination::Tolerance: series.stop = PeakStop::Tolerance; break;
    case Termination::Stopped:
      series.stop = collapsed ? PeakStop::AmplitudeFloor : exhausted ? PeakStop::NoFurtherPeaks : PeakStop::MaxPeaks;
      break;
  }
  return series;
}

std::vector<double> PeakSeries::deltas() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < peaks.size(); ++i) out.push_back(peaks[i].t - peaks[i - 1].t);
  return out;
}

std::vector<double> PeakSeries::ratios() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < peaks.size(); ++i) out.push_back(peaks[i].L / peaks[i - 1].L);
  return out;
}

std::vector<double> PeakSeries::deviation_ratios(double level) const {
  std::vector<double> out;
  for (std::size_t i = 1; i < peaks.size(); ++i) out.push_back((peaks[i - 1].L - level) / (peaks[i].L - level));
  return out;
}

TimeSeries distance_series(const Trajectory& trajectory, const State& point) {
  TimeSeries out;
  out.t.reserve(trajectory.samples.size());
  out.value.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) {
    out.t.push_back(s.t);
    out.value.push_back((s.y - point).norm());
  }
  return out;
}

BlowupCheck check_blowup(const Trajectory& trajectory) {
  BlowupCheck check;
  if (trajectory.terminated != Termination::Blowup) return check;
  check.blowup = true;
  for (const auto& e : trajectory.events) {
    if (e.kind == EventKind::Blowup) {
      check.time = e.t;
      break;
    }
  }
  if (!check.time) check.time = trajectory.samples.back().t;
  return check;
}

}  // namespace cart
