#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's numerical kernels.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace oracle {

using cd = std::complex<double>;
using Mat2 = std::array<std::array<cd, 2>, 2>;

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline Mat2 dagger(const Mat2& a) {
  return {{{std::conj(a[0][0]), std::conj(a[1][0])}, {std::conj(a[0][1]), std::conj(a[1][1])}}};
}

// rho for Bloch vector (x, y, z).
inline Mat2 rho_of(double x, double y, double z) {
  return {{{cd(0.5 * (1 + z)), cd(0.5 * x, -0.5 * y)}, {cd(0.5 * x, 0.5 * y), cd(0.5 * (1 - z))}}};
}

inline std::array<double, 3> bloch_of(const Mat2& r) {
  return {2 * r[1][0].real(), 2 * r[1][0].imag(), (r[0][0] - r[1][1]).real()};
}

// One post-selected step with plain complex arithmetic.
inline std::array<double, 3> postselected_bloch(double x, double y, double z, double omega,
                                                double j, double dt) {
  const double c = std::cos(omega * dt), s = std::sin(omega * dt);
  const Mat2 u{{{cd(c), cd(0, -s)}, {cd(0, -s), cd(c)}}};
  const Mat2 m0{{{cd(1), cd(0)}, {cd(0), cd(std::cos(j * dt))}}};
  const Mat2 k = mul(m0, u);
  Mat2 out = mul(mul(k, rho_of(x, y, z)), dagger(k));
  const cd tr = out[0][0] + out[1][1];
  for (auto& row : out)
    for (auto& e : row) e /= tr;
  return bloch_of(out);
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

// Adaptive Simpson with Richardson correction.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12) {
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 24);
}

// Classic RK4 on a 3-vector, written out independently of the library.
template <class F>
std::array<double, 3> rk4_3(F f, std::array<double, 3> y, double dt, std::size_t steps) {
  for (std::size_t i = 0; i < steps; ++i) {
    const auto k1 = f(y);
    std::array<double, 3> t{};
    for (int c = 0; c < 3; ++c) t[c] = y[c] + 0.5 * dt * k1[c];
    const auto k2 = f(t);
    for (int c = 0; c < 3; ++c) t[c] = y[c] + 0.5 * dt * k2[c];
    const auto k3 = f(t);
    for (int c = 0; c < 3; ++c) t[c] = y[c] + dt * k3[c];
    const auto k4 = f(t);
    for (int c = 0; c < 3; ++c) y[c] += dt / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  return y;
}

// Post-selected drift written from its definition.
inline std::array<double, 3> drift(const std::array<double, 3>& b, double omega, double lambda) {
  const double w = 2 * omega;
  return {-w * lambda * b[0] * b[2], -w * b[2] * (1 + lambda * b[1]),
          w * (lambda * (1 - b[2] * b[2]) + b[1])};
}

inline std::mt19937_64 rng(std::uint64_t seed = 20240601) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
