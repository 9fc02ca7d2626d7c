#include "zeno/phase.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zeno/error.hpp"
#include "zeno/rk4.hpp"

namespace zeno {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCurveSingular = 1e-12;
constexpr double kStallNorm = 1e-10;
constexpr double kNearCritical = 1e-6;

void require_zeno(double lambda) {
  if (!(lambda > 1.0)) {
    throw Error(ErrorCode::NoZenoRegime,
                "lambda = " + std::to_string(lambda) + " has no critical points (needs lambda > 1)");
  }
}

// Angle written as anchor + u with exact trigonometry of the anchor. `base` is
// 1 + lambda sin(anchor), set to exactly zero when the anchor is theta1.
struct AngleFrame {
  double anchor = 0.0;
  double sin_a = 0.0;
  double cos_a = 1.0;
  double base = 1.0;

  static AngleFrame for_params(double lambda) {
    if (lambda > 1.0) {
      return AngleFrame{-std::asin(1.0 / lambda), -1.0 / lambda,
                        std::sqrt(lambda * lambda - 1.0) / lambda, 0.0};
    }
    return AngleFrame{};
  }

  struct Trig {
    double sin_t;
    double one_minus_cos;
    double cos_t;
    double denom;  // 1 + lambda sin theta
  };

  Trig eval(double u, double lambda) const {
    const double su = std::sin(u);
    const double half = std::sin(0.5 * u);
    const double vers = 2.0 * half * half;  // 1 - cos u
    Trig t{};
    t.sin_t = sin_a * (1.0 - vers) + cos_a * su;
    t.cos_t = cos_a * (1.0 - vers) - sin_a * su;
    t.one_minus_cos = (1.0 - cos_a) + cos_a * vers + sin_a * su;
    t.denom = base - lambda * sin_a * vers + lambda * cos_a * su;
    return t;
  }
};

}  // namespace

PhaseParams::PhaseParams(double omega_s, double lambda) : omega_s_(omega_s), lambda_(lambda) {
  if (!(omega_s > 0.0) || !std::isfinite(omega_s)) {
    throw Error(ErrorCode::InvalidParameter, "omega_s must be finite and > 0");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidParameter, "lambda must be finite and >= 0");
  }
}

double wrap_angle(double theta) {
  if (theta >= -kPi && theta <= kPi) return theta;
  return theta - 2.0 * kPi * std::round(theta / (2.0 * kPi));
}

double cdj_hamiltonian(const PhasePoint& p, const PhaseParams& params) {
  return -2.0 * params.omega_s() * energy_level(p, params.lambda()).e;
}

EnergyLevel energy_level(const PhasePoint& p, double lambda) {
  return {p.p_theta * (1.0 + lambda * std::sin(p.theta)) + lambda * (1.0 - std::cos(p.theta))};
}

PhaseRate hamilton_rhs(const PhasePoint& p, const PhaseParams& params) {
  const double w = 2.0 * params.omega_s();
  const double lam = params.lambda();
  return {-w * (1.0 + lam * std::sin(p.theta)),
          w * lam * (p.p_theta * std::cos(p.theta) + std::sin(p.theta))};
}

Jacobian2 phase_jacobian(const PhasePoint& p, const PhaseParams& params) {
  const double w = 2.0 * params.omega_s();
  const double lam = params.lambda();
  const double s = std::sin(p.theta);
  const double c = std::cos(p.theta);
  return {{{-w * lam * c, 0.0}, {w * lam * (c - p.p_theta * s), w * lam * c}}};
}

double p_theta_curve(double theta, double lambda, EnergyLevel e) {
  const double denom = 1.0 + lambda * std::sin(theta);
  if (std::abs(denom) <= kCurveSingular) {
    throw Error(ErrorCode::CurveSingularity,
                "1 + lambda sin(theta) vanishes at theta = " + std::to_string(theta));
  }
  return (e.e - lambda * (1.0 - std::cos(theta))) / denom;
}

CriticalPointSet critical_points(const PhaseParams& params) {
  const double lam = params.lambda();
  require_zeno(lam);
  const double root = std::sqrt(lam * lam - 1.0);
  const double arc = std::asin(1.0 / lam);
  CriticalPointSet cp;
  cp.theta1 = -arc;
  cp.theta2 = arc - kPi;
  cp.p_theta1 = 1.0 / root;
  cp.p_theta2 = -1.0 / root;
  cp.exponent_plus = 2.0 * params.omega_s() * root;
  cp.exponent_minus = -cp.exponent_plus;
  return cp;
}

StabilityExponents stability_exponents(const PhaseParams& params) {
  const CriticalPointSet cp = critical_points(params);
  return {{cp.exponent_minus, cp.exponent_plus}, {cp.exponent_plus, cp.exponent_minus}};
}

SeparatrixEnergies separatrix_energies(double lambda) {
  if (!(lambda >= 1.0)) {
    throw Error(ErrorCode::NoZenoRegime, "separatrices need lambda >= 1");
  }
  const double root = std::sqrt(lambda * lambda - 1.0);
  return {lambda - root, lambda + root};
}

PhasePath integrate_phase_path(const PhasePoint& start, const PhaseParams& params, double dt,
                               double t_end) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParameter, "dt must be > 0");
  if (!(t_end >= 0.0)) throw Error(ErrorCode::InvalidParameter, "t_end must be >= 0");

  const double w = 2.0 * params.omega_s();
  const double lam = params.lambda();
  const AngleFrame frame = AngleFrame::for_params(lam);

  // State: (u, p_theta, action) with theta = anchor + u.
  const auto rhs = [&](const StateVec<3>& s) {
    const AngleFrame::Trig t = frame.eval(s[0], lam);
    return StateVec<3>{-w * t.denom, w * lam * (s[1] * t.cos_t + t.sin_t),
                       -w * lam * t.one_minus_cos};
  };

  bool has_saddles = lam > 1.0;
  CriticalPointSet cp;
  if (has_saddles) cp = critical_points(params);

  PhasePath path;
  const std::size_t n = step_count(dt, t_end);
  path.samples.reserve(n + 1);

  const auto record = [&](double t, const StateVec<3>& s) {
    const AngleFrame::Trig trig = frame.eval(s[0], lam);
    PhaseSample sample;
    sample.t = t;
    sample.theta_unwrapped = frame.anchor + s[0];
    sample.point = {wrap_angle(sample.theta_unwrapped), s[1]};
    sample.hamiltonian = -w * (s[1] * trig.denom + lam * trig.one_minus_cos);
    sample.action = s[2];
    path.samples.push_back(sample);

    const StateVec<3> r = rhs(s);
    if (std::hypot(r[0], r[1]) < kStallNorm) path.stalled = true;
    if (has_saddles) {
      for (const PhasePoint& c : {cp.p1(), cp.p2()}) {
        const double dth = wrap_angle(sample.point.theta - c.theta);
        if (std::hypot(dth, s[1] - c.p_theta) < kNearCritical) path.near_critical = true;
      }
    }
  };

  StateVec<3> s{start.theta - frame.anchor, start.p_theta, 0.0};
  double t = 0.0;
  record(t, s);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = step_size(dt, t_end, i, n);
    s = rk4_step(rhs, s, h);
    t = (i + 1 == n) ? t_end : dt * static_cast<double>(i + 1);
    record(t, s);
  }
  return path;
}

}  // namespace zeno
