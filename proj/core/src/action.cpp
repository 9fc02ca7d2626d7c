#include "zeno/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zeno/error.hpp"
#include "zeno/phase.hpp"

namespace zeno {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularEndpoint = 1e-9;
// Relative to the L1 norm of the integrand. Tighter targets sit under the
// round-off floor of the error estimate near a nullcline, and the recursion
// then runs to full depth.
constexpr double kQuadratureTolerance = 1e-10;
constexpr unsigned kQuadratureDepth = 15;

void require_not_one(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidParameter, "lambda must be finite and >= 0");
  }
  if (lambda == 1.0) {
    throw Error(ErrorCode::UnsupportedLambda, "lambda = 1 is only reachable as a limit");
  }
}

// Distance from theta to the nearest angle congruent to target (mod 2 pi).
double angular_distance(double theta, double target) {
  return std::abs(wrap_angle(theta - target));
}

// Nullclines theta1, theta2 (principal values) for lambda >= 1.
std::pair<double, double> nullclines(double lambda) {
  const double arc = std::asin(1.0 / lambda);
  return {-arc, arc - kPi};
}

// Splits theta = reduced + 2 pi k with reduced in (-pi, pi].
std::pair<double, double> reduce(double theta) {
  double k = std::floor((theta + kPi) / kTwoPi);
  double reduced = theta - kTwoPi * k;
  if (reduced <= -kPi) {
    reduced += kTwoPi;
    k -= 1.0;
  }
  return {reduced, k};
}

// Continuous antiderivative of lambda (1 - cos) / (1 + lambda sin), lambda < 1.
double antiderivative_sub_zeno(double theta, double lambda) {
  const double root = std::sqrt(1.0 - lambda * lambda);
  const auto [reduced, k] = reduce(theta);
  double arc = 0.5 * kPi;  // limit at reduced = pi
  if (reduced < kPi) arc = std::atan((lambda + std::tan(0.5 * reduced)) / root);
  return 2.0 * lambda / root * (arc + kPi * k) - std::log(1.0 + lambda * std::sin(theta));
}

// Antiderivative of 1 / (1 + lambda sin theta) for lambda > 1, up to the factor
// 1/sqrt(lambda^2 - 1). Continuous across tan(theta/2) poles (value 0 there).
double inverse_rate_log(double theta, double lambda) {
  const double root = std::sqrt(lambda * lambda - 1.0);
  const auto [reduced, k] = reduce(theta);
  (void)k;
  if (reduced == kPi) return 0.0;
  const double t = std::tan(0.5 * reduced);
  return std::log(std::abs((t + lambda - root) / (t + lambda + root)));
}

double antiderivative_zeno(double theta, double lambda) {
  const double root = std::sqrt(lambda * lambda - 1.0);
  return lambda / root * inverse_rate_log(theta, lambda) -
         std::log(std::abs(1.0 + lambda * std::sin(theta)));
}

void require_regular_endpoint(double theta, double lambda) {
  const auto [theta1, theta2] = nullclines(lambda);
  if (angular_distance(theta, theta1) < kSingularEndpoint ||
      angular_distance(theta, theta2) < kSingularEndpoint) {
    throw Error(ErrorCode::SingularEndpoint,
                "endpoint " + std::to_string(theta) + " sits on a critical angle");
  }
}

// True if a zero of 1 + lambda sin lies in [lo, hi] (lambda >= 1).
bool interval_hits_nullcline(double lo, double hi, double lambda) {
  const auto [theta1, theta2] = nullclines(lambda);
  for (double root : {theta1, theta2}) {
    const double k_lo = std::ceil((lo - kSingularEndpoint - root) / kTwoPi);
    const double candidate = root + kTwoPi * k_lo;
    if (candidate <= hi + kSingularEndpoint) return true;
  }
  return false;
}

}  // namespace

double action_integrand(double theta, double lambda) {
  return lambda * (1.0 - std::cos(theta)) / (1.0 + lambda * std::sin(theta));
}

ActionValue action_closed_form(double theta_i, double theta_f, double lambda) {
  require_not_one(lambda);
  if (lambda > 1.0) {
    require_regular_endpoint(theta_i, lambda);
    require_regular_endpoint(theta_f, lambda);
  }
  if (theta_i == theta_f || lambda == 0.0) return {0.0};
  if (lambda < 1.0) {
    return {antiderivative_sub_zeno(theta_f, lambda) - antiderivative_sub_zeno(theta_i, lambda)};
  }
  return {antiderivative_zeno(theta_f, lambda) - antiderivative_zeno(theta_i, lambda)};
}

ActionValue action_quadrature(double theta_i, double theta_f, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidParameter, "lambda must be finite and >= 0");
  }
  if (theta_i == theta_f) return {0.0};
  const double lo = std::min(theta_i, theta_f);
  const double hi = std::max(theta_i, theta_f);
  if (lambda >= 1.0 && interval_hits_nullcline(lo, hi, lambda)) {
    throw Error(ErrorCode::IntegrandSingular,
                "1 + lambda sin(theta) vanishes inside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  const auto f = [lambda](double theta) { return action_integrand(theta, lambda); };
  double error = 0.0;
  return {Quadrature::integrate(f, theta_i, theta_f, kQuadratureDepth, kQuadratureTolerance, &error)};
}

double transition_time_sub_zeno(double lambda, double omega_s) {
  if (!(omega_s > 0.0)) throw Error(ErrorCode::InvalidParameter, "omega_s must be > 0");
  if (!(lambda >= 0.0) || !(lambda < 1.0)) {
    throw Error(ErrorCode::UnsupportedLambda, "transition time needs 0 <= lambda < 1");
  }
  const double root = std::sqrt(1.0 - lambda * lambda);
  return (kPi + 2.0 * std::atan(lambda / root)) / (root * 2.0 * omega_s);
}

TransitionTimes zeno_frequencies(double lambda, double omega_s, double epsilon) {
  if (!(omega_s > 0.0)) throw Error(ErrorCode::InvalidParameter, "omega_s must be > 0");
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::UnsupportedLambda, "segment frequencies need lambda > 1");
  }
  const auto [theta1, theta2] = nullclines(lambda);
  const double limit = std::min(0.5 * (theta1 - theta2), -theta1);
  if (!(epsilon > 0.0) || !(epsilon < limit)) {
    throw Error(ErrorCode::EpsilonTooLarge,
                "epsilon must lie in (0, " + std::to_string(limit) + ")");
  }
  const double root = std::sqrt(lambda * lambda - 1.0);
  const auto travel = [&](double a, double b) {
    return std::abs(inverse_rate_log(b, lambda) - inverse_rate_log(a, lambda)) /
           (root * 2.0 * omega_s);
  };
  TransitionTimes out;
  out.epsilon = epsilon;
  out.t1 = travel(0.0, theta1 + epsilon);
  out.t12 = travel(theta2 + epsilon, theta1 - epsilon);
  out.t2 = travel(theta2 - epsilon, -kPi);
  out.omega1 = 1.0 / out.t1;
  out.omega12 = 1.0 / out.t12;
  out.omega2 = 1.0 / out.t2;
  return out;
}

ActionDiscontinuity action_discontinuity(double lambda, double epsilon) {
  require_not_one(lambda);
  if (!(lambda > 1.0)) {
    throw Error(ErrorCode::UnsupportedLambda, "the action discontinuity needs lambda > 1");
  }
  const auto [theta1, theta2] = nullclines(lambda);
  if (!(epsilon > 0.0) || !(epsilon < 0.5 * (theta1 - theta2))) {
    throw Error(ErrorCode::EpsilonTooLarge, "epsilon must lie in (0, (theta1 - theta2)/2)");
  }
  ActionDiscontinuity out;
  out.epsilon = epsilon;
  out.from_above = action_closed_form(theta1 + epsilon, theta2 + kTwoPi - epsilon, lambda);
  out.from_below = action_closed_form(theta1 - epsilon, theta2 + epsilon, lambda);
  out.short_arc = action_closed_form(theta2 + epsilon, theta1 - epsilon, lambda);
  out.long_arc = out.from_above;
  return out;
}

std::vector<DensityPoint> final_state_density(double lambda, double theta_i,
                                              std::span<const double> z_grid) {
  require_not_one(lambda);
  if (z_grid.size() < 2) throw Error(ErrorCode::InvalidParameter, "density grid needs >= 2 points");
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    const double z = z_grid[i];
    if (!(z > -1.0 && z < 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "z_f values must lie in (-1, 1)");
    }
    if (i > 0 && !(z > z_grid[i - 1])) {
      throw Error(ErrorCode::InvalidParameter, "z_f grid must be strictly increasing");
    }
  }
  if (lambda > 1.0) require_regular_endpoint(theta_i, lambda);

  std::vector<double> log_weight(z_grid.size());
  double theta1 = 0.0;
  if (lambda > 1.0) theta1 = nullclines(lambda).first;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    const double theta_f = -std::acos(z_grid[i]);
    double lw = 0.0;
    try {
      lw = -action_closed_form(theta_i, theta_f, lambda).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularEndpoint) throw;
      // Only theta_f can be singular here: the stable angle is the log-weight
      // maximum, the unstable one a zero of the density.
      lw = angular_distance(theta_f, theta1) < kSingularEndpoint
               ? kLogWeightCap
               : -std::numeric_limits<double>::infinity();
    }
    log_weight[i] = std::min(lw, kLogWeightCap);
  }

  const double peak = *std::max_element(log_weight.begin(), log_weight.end());
  std::vector<DensityPoint> out(z_grid.size());
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    out[i] = {z_grid[i], std::exp(log_weight[i] - peak)};
  }
  double area = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    area += 0.5 * (out[i].density + out[i - 1].density) * (out[i].z_f - out[i - 1].z_f);
  }
  for (auto& p : out) p.density /= area;
  return out;
}

}  // namespace zeno
