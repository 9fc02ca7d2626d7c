#pragma once

#include <span>
#include <vector>

namespace zeno {

// Stochastic action in units of hbar.
struct ActionValue {
  double value = 0.0;
};

// Segment travel times and their inverse frequencies for lambda > 1:
//   segment 1:  0            -> theta1 + eps
//   segment 12: theta2 + eps -> theta1 - eps  (flow runs toward theta1)
//   segment 2:  theta2 - eps -> -pi
struct TransitionTimes {
  double epsilon = 0.0;
  double t1 = 0.0;
  double t12 = 0.0;
  double t2 = 0.0;
  double omega1 = 0.0;
  double omega12 = 0.0;
  double omega2 = 0.0;
};

// Actions evaluated around the stable angle theta1 (lambda > 1). The theta2 end
// of every path is offset by the same eps on the side the path arrives from.
struct ActionDiscontinuity {
  double epsilon = 0.0;
  // Flow-aligned pair: both paths leave the neighbourhood of theta1 against the
  // local flow, in opposite angular directions.
  ActionValue from_above;  // theta1 + eps -> theta2 + 2 pi - eps (anti-clockwise)
  ActionValue from_below;  // theta1 - eps -> theta2 + eps        (clockwise)
  // Same-direction pair (both anti-clockwise).
  ActionValue short_arc;   // theta2 + eps -> theta1 - eps
  ActionValue long_arc;    // theta1 + eps -> theta2 + 2 pi - eps
};

struct DensityPoint {
  double z_f = 0.0;
  double density = 0.0;
};

inline constexpr double kDefaultEpsilon = 1e-3;
inline constexpr double kLogWeightCap = 700.0;

// Integrand of the action in theta: F dt/dtheta = lambda (1 - cos theta) / (1 + lambda sin theta).
double action_integrand(double theta, double lambda);

// Closed-form action from theta_i to theta_f. lambda < 1 uses the arctangent
// form, lambda > 1 the logarithmic form. Endpoints may be any real angles; the
// arctangent branch is continued across tan(theta/2) poles.
// Throws UnsupportedLambda (lambda == 1) or SingularEndpoint (lambda > 1 and an
// endpoint within 1e-9 of theta1 or theta2 modulo 2 pi).
ActionValue action_closed_form(double theta_i, double theta_f, double lambda);

// Adaptive Gauss-Kronrod quadrature of action_integrand. Throws IntegrandSingular
// if a zero of 1 + lambda sin theta lies in the closed interval.
ActionValue action_quadrature(double theta_i, double theta_f, double lambda);

// Time to go from theta = 0 to theta = -pi for 0 <= lambda < 1, the exact value
// of the integral of dtheta / |dtheta/dt|:
//   T = [pi + 2 atan(lambda / sqrt(1 - lambda^2))] / (2 omega_s sqrt(1 - lambda^2))
// Throws UnsupportedLambda for lambda >= 1.
double transition_time_sub_zeno(double lambda, double omega_s);

// Throws UnsupportedLambda for lambda <= 1 and EpsilonTooLarge unless
// 0 < eps < min((theta1 - theta2) / 2, |theta1|).
TransitionTimes zeno_frequencies(double lambda, double omega_s,
                                 double epsilon = kDefaultEpsilon);

ActionDiscontinuity action_discontinuity(double lambda, double epsilon = kDefaultEpsilon);

// Normalized density over final z_f = cos theta_f with theta_f = -acos(z_f) in
// (-pi, 0). The log-weight of each grid point is the action accumulated along
// the most likely path from theta_f back to theta_i (i.e. -A(theta_i -> theta_f)),
// capped at kLogWeightCap; weights are normalized so the trapezoid integral over
// the grid is 1. Grid must be strictly increasing inside (-1, 1) with >= 2 points.
std::vector<DensityPoint> final_state_density(double lambda, double theta_i,
                                              std::span<const double> z_grid);

}  // namespace zeno
