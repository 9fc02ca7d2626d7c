#pragma once

#include <complex>

#include <Eigen/Dense>

namespace zeno {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

inline Matrix2c identity2() { return Matrix2c::Identity(); }

inline Matrix2c sigma_x() {
  Matrix2c m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix2c sigma_y() {
  Matrix2c m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

inline Matrix2c sigma_z() {
  Matrix2c m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// |1><1| = (I - sigma_z)/2, the projector the detector couples to.
inline Matrix2c excited_projector() {
  Matrix2c m;
  m << 0.0, 0.0, 0.0, 1.0;
  return m;
}

// exp(A) for a 2x2 complex matrix via A = a I + B, tr B = 0, B^2 = s^2 I.
inline Matrix2c expm2(const Matrix2c& a) {
  const Complex mean = 0.5 * a.trace();
  const Matrix2c b = a - mean * identity2();
  const Complex s = std::sqrt(-b.determinant());
  Complex sinh_ratio = 1.0;
  if (std::abs(s) > 1e-8) {
    sinh_ratio = std::sinh(s) / s;
  } else {
    const Complex s2 = s * s;
    sinh_ratio = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
  }
  return std::exp(mean) * (std::cosh(s) * identity2() + sinh_ratio * b);
}

// Largest absolute entry; used for matrix residual checks.
inline double max_abs(const Matrix2c& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace zeno
