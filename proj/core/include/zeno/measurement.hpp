#pragma once

#include <cstddef>
#include <vector>

#include "zeno/linalg.hpp"

namespace zeno {

// Bloch coordinates of a qubit state; pure states lie on the unit sphere.
struct BlochState {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
};

// 2x2 Hermitian, unit-trace, positive semidefinite matrix.
//
// Construction validates all three invariants (tolerance 1e-12) and throws
// Error(InvalidState) otherwise. Layout:
//   rho = 1/2 [[1 + z, x - i y], [x + i y, 1 - z]]
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  DensityMatrix();  // |0><0|
  explicit DensityMatrix(const Matrix2c& elements);

  const Matrix2c& matrix() const { return elements_; }
  Complex operator()(int row, int col) const { return elements_(row, col); }

  // Smallest eigenvalue of the (Hermitian) matrix.
  double min_eigenvalue() const;

 private:
  Matrix2c elements_;
};

struct KrausPair {
  Matrix2c m0;  // outcome r = 0 (post-selected branch)
  Matrix2c m1;  // outcome r = 1

  // max |m0^dag m0 + m1^dag m1 - I|
  double completeness_residual() const;
};

// Measurement-regime parameters. alpha = J^2 dt and lambda = alpha / (4 omega_s)
// are always derived, never set independently.
class MeasurementParams {
 public:
  static constexpr double kDefaultTau = 100.0;

  static MeasurementParams from_coupling(double omega_s, double j_coupling, double dt,
                                         double tau = kDefaultTau);
  // Continuum scaling J^2 dt -> alpha: J = sqrt(alpha / dt).
  static MeasurementParams from_rate(double omega_s, double alpha, double dt,
                                     double tau = kDefaultTau);
  static MeasurementParams from_lambda(double omega_s, double lambda, double dt,
                                       double tau = kDefaultTau);

  double omega_s() const { return omega_s_; }
  double j_coupling() const { return j_coupling_; }
  double dt() const { return dt_; }
  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }

 private:
  MeasurementParams(double omega_s, double j_coupling, double dt, double tau);

  double omega_s_;
  double j_coupling_;
  double dt_;
  double alpha_;
  double lambda_;
  double tau_;
};

struct BlochRate {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
};

// M0 = diag(1, cos J dt), M1 = [[0, 0], [0, sin J dt]].
KrausPair kraus_pair(double j_coupling, double dt);

// exp(-i omega_s sigma_x dt) = cos(omega_s dt) I - i sin(omega_s dt) sigma_x.
// No global phase is stripped: at omega_s dt = pi/2 this is exactly -i sigma_x.
Matrix2c unitary_step(double omega_s, double dt);

// Post-selected (r = 0) update M0 U rho U^dag M0^dag / Tr[...].
// Throws NormalizationUnderflow when the trace is <= 1e-15.
DensityMatrix postselected_step(const DensityMatrix& rho, const MeasurementParams& params);

BlochState bloch_from_density(const DensityMatrix& rho);
// Throws InvalidState when |b| > 1 + 1e-9.
DensityMatrix density_from_bloch(const BlochState& b);

// Continuous-time post-selected drift:
//   dx/dt = -2 omega_s lambda x z
//   dy/dt = -2 omega_s z (1 + lambda y)
//   dz/dt =  2 omega_s (lambda (1 - z^2) + y)
BlochRate drift_rhs(const BlochState& b, double omega_s, double lambda);

// Iterates postselected_step n_steps times. The returned sequence includes b0,
// so it has n_steps + 1 entries.
std::vector<BlochState> mc_zeno_trajectory(const BlochState& b0, const MeasurementParams& params,
                                           std::size_t n_steps);

// RK4 integration of drift_rhs with the same sampling as mc_zeno_trajectory.
std::vector<BlochState> drift_trajectory(const BlochState& b0, double omega_s, double lambda,
                                         double dt, std::size_t n_steps);

}  // namespace zeno
