#pragma once

#include <array>
#include <vector>

namespace zeno {

// Canonical pair of the reduced (y = sin theta, z = cos theta) dynamics.
struct PhasePoint {
  double theta = 0.0;  // radians, principal range [-pi, pi]
  double p_theta = 0.0;
};

class PhaseParams {
 public:
  PhaseParams(double omega_s, double lambda);

  double omega_s() const { return omega_s_; }
  double lambda() const { return lambda_; }

 private:
  double omega_s_;
  double lambda_;
};

// E = -H / (2 omega_s) = p_theta (1 + lambda sin theta) + lambda (1 - cos theta).
struct EnergyLevel {
  double e = 0.0;
};

struct PhaseRate {
  double dtheta = 0.0;
  double dp_theta = 0.0;
};

// Saddle points of the flow for lambda > 1.
struct CriticalPointSet {
  double theta1 = 0.0;  // -asin(1/lambda)
  double theta2 = 0.0;  // asin(1/lambda) - pi
  double p_theta1 = 0.0;
  double p_theta2 = 0.0;
  double exponent_plus = 0.0;   //  2 omega_s sqrt(lambda^2 - 1)
  double exponent_minus = 0.0;  // -2 omega_s sqrt(lambda^2 - 1)

  PhasePoint p1() const { return {theta1, p_theta1}; }
  PhasePoint p2() const { return {theta2, p_theta2}; }
};

// Linear growth rates along each canonical axis at one saddle.
// Negative = contracting (stable), positive = expanding (unstable).
struct AxisExponents {
  double theta = 0.0;
  double p_theta = 0.0;
};

// P1: theta contracts, p_theta expands. P2: the reverse.
struct StabilityExponents {
  AxisExponents p1;
  AxisExponents p2;
};

struct SeparatrixEnergies {
  double low = 0.0;   // lambda - sqrt(lambda^2 - 1), curve through P1
  double high = 0.0;  // lambda + sqrt(lambda^2 - 1), curve through P2
};

using Jacobian2 = std::array<std::array<double, 2>, 2>;

// Wraps an angle into [-pi, pi].
double wrap_angle(double theta);

double cdj_hamiltonian(const PhasePoint& p, const PhaseParams& params);
EnergyLevel energy_level(const PhasePoint& p, double lambda);

// (dH/dp_theta, -dH/dtheta).
PhaseRate hamilton_rhs(const PhasePoint& p, const PhaseParams& params);

// Analytic Jacobian of hamilton_rhs, rows (dtheta, dp_theta), columns (theta, p_theta).
Jacobian2 phase_jacobian(const PhasePoint& p, const PhaseParams& params);

// Momentum on the constant-energy curve E through angle theta.
// Throws CurveSingularity when |1 + lambda sin theta| <= 1e-12.
double p_theta_curve(double theta, double lambda, EnergyLevel e);

// Throw NoZenoRegime when lambda <= 1.
CriticalPointSet critical_points(const PhaseParams& params);
StabilityExponents stability_exponents(const PhaseParams& params);

// Throws NoZenoRegime when lambda < 1.
SeparatrixEnergies separatrix_energies(double lambda);

struct PhaseSample {
  double t = 0.0;
  PhasePoint point;              // theta wrapped to [-pi, pi]
  double theta_unwrapped = 0.0;  // continuous angle along the path
  double hamiltonian = 0.0;
  double action = 0.0;           // integral of -alpha/2 (1 - cos theta) dt from t = 0
};

struct PhasePath {
  std::vector<PhaseSample> samples;
  bool stalled = false;        // |rhs| < 1e-10 somewhere: sitting on a fixed point
  bool near_critical = false;  // passed within 1e-6 of a saddle
};

inline double default_phase_step(double omega_s) { return 1e-3 / omega_s; }

// Fixed-step RK4 on Hamilton's equations, sampled at every step.
//
// For lambda > 1 the angle is carried as an offset from theta1 so that
// 1 + lambda sin theta keeps full relative precision as the path is drawn into
// the stable angle; otherwise the momentum growth there would turn rounding of
// theta into large Hamiltonian drift.
PhasePath integrate_phase_path(const PhasePoint& start, const PhaseParams& params, double dt,
                               double t_end);

}  // namespace zeno
