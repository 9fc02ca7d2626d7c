#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace zeno {

template <std::size_t N>
using StateVec = std::array<double, N>;

template <std::size_t N>
constexpr StateVec<N> axpy(const StateVec<N>& y, double h, const StateVec<N>& k) {
  StateVec<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

// One classic fourth-order Runge-Kutta step for an autonomous system y' = f(y).
template <std::size_t N, class Rhs>
StateVec<N> rk4_step(const Rhs& f, const StateVec<N>& y, double dt) {
  const StateVec<N> k1 = f(y);
  const StateVec<N> k2 = f(axpy(y, 0.5 * dt, k1));
  const StateVec<N> k3 = f(axpy(y, 0.5 * dt, k2));
  const StateVec<N> k4 = f(axpy(y, dt, k3));
  StateVec<N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Number of fixed steps covering [0, t_end]; the last step is shortened so the
// path ends exactly at t_end.
inline std::size_t step_count(double dt, double t_end) {
  const double n = t_end / dt;
  const double nearest = std::round(n);
  if (std::abs(n - nearest) <= 1e-9 * std::max(1.0, n)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(n));
}

// Step size of step `index` (0-based) out of `count` steps covering [0, t_end].
inline double step_size(double dt, double t_end, std::size_t index, std::size_t count) {
  if (index + 1 < count) return dt;
  return t_end - dt * static_cast<double>(count - 1);
}

}  // namespace zeno
