#include "zeno/measurement.hpp"

#include <cmath>
#include <string>

#include "zeno/error.hpp"
#include "zeno/rk4.hpp"

namespace zeno {
namespace {

constexpr double kTraceUnderflow = 1e-15;
constexpr double kBlochSlack = 1e-9;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

double BlochState::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityMatrix::DensityMatrix() : elements_(Matrix2c::Zero()) { elements_(0, 0) = 1.0; }

DensityMatrix::DensityMatrix(const Matrix2c& elements) : elements_(elements) {
  if (!elements_.allFinite()) {
    throw Error(ErrorCode::InvalidState, "density matrix has non-finite entries");
  }
  const double herm = max_abs(elements_ - elements_.adjoint());
  if (herm > kTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian (residual " +
                                             std::to_string(herm) + ")");
  }
  const Complex tr = elements_.trace();
  if (std::abs(tr - 1.0) > kTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");
  }
  if (min_eigenvalue() < -kTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix is not positive semidefinite");
  }
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(elements_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double KrausPair::completeness_residual() const {
  return max_abs(m0.adjoint() * m0 + m1.adjoint() * m1 - identity2());
}

MeasurementParams::MeasurementParams(double omega_s, double j_coupling, double dt, double tau)
    : omega_s_(omega_s),
      j_coupling_(j_coupling),
      dt_(dt),
      alpha_(j_coupling * j_coupling * dt),
      lambda_(alpha_ / (4.0 * omega_s)),
      tau_(tau) {
  require_positive(omega_s, "omega_s");
  require_positive(dt, "dt");
  require_positive(tau, "tau");
  if (!std::isfinite(j_coupling)) {
    throw Error(ErrorCode::InvalidParameter, "j_coupling must be finite");
  }
}

MeasurementParams MeasurementParams::from_coupling(double omega_s, double j_coupling, double dt,
                                                   double tau) {
  return MeasurementParams(omega_s, j_coupling, dt, tau);
}

MeasurementParams MeasurementParams::from_rate(double omega_s, double alpha, double dt,
                                               double tau) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha must be >= 0");
  require_positive(dt, "dt");
  return MeasurementParams(omega_s, std::sqrt(alpha / dt), dt, tau);
}

MeasurementParams MeasurementParams::from_lambda(double omega_s, double lambda, double dt,
                                                 double tau) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidParameter, "lambda must be >= 0");
  return from_rate(omega_s, 4.0 * omega_s * lambda, dt, tau);
}

KrausPair kraus_pair(double j_coupling, double dt) {
  const double angle = j_coupling * dt;
  KrausPair k{Matrix2c::Zero(), Matrix2c::Zero()};
  k.m0(0, 0) = 1.0;
  k.m0(1, 1) = std::cos(angle);
  k.m1(1, 1) = std::sin(angle);
  return k;
}

Matrix2c unitary_step(double omega_s, double dt) {
  const double angle = omega_s * dt;
  return std::cos(angle) * identity2() - Complex(0.0, std::sin(angle)) * sigma_x();
}

DensityMatrix postselected_step(const DensityMatrix& rho, const MeasurementParams& params) {
  const Matrix2c u = unitary_step(params.omega_s(), params.dt());
  const Matrix2c m0 = kraus_pair(params.j_coupling(), params.dt()).m0;
  const Matrix2c a = m0 * u;
  Matrix2c next = a * rho.matrix() * a.adjoint();
  const double tr = next.trace().real();
  if (!(tr > kTraceUnderflow)) {
    throw Error(ErrorCode::NormalizationUnderflow,
                "post-selected branch annihilated the state (trace " + std::to_string(tr) + ")");
  }
  next /= tr;
  return DensityMatrix(0.5 * (next + next.adjoint()));
}

BlochState bloch_from_density(const DensityMatrix& rho) {
  const Complex off = rho(1, 0);  // (x + i y) / 2
  return BlochState{2.0 * off.real(), 2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

DensityMatrix density_from_bloch(const BlochState& b) {
  double n = b.norm();
  if (!std::isfinite(n) || n > 1.0 + kBlochSlack) {
    throw Error(ErrorCode::InvalidState, "Bloch vector norm exceeds 1");
  }
  BlochState c = b;
  if (n > 1.0) {
    c.x /= n;
    c.y /= n;
    c.z /= n;
  }
  Matrix2c m;
  m << 1.0 + c.z, Complex(c.x, -c.y), Complex(c.x, c.y), 1.0 - c.z;
  return DensityMatrix(0.5 * m);
}

BlochRate drift_rhs(const BlochState& b, double omega_s, double lambda) {
  const double w = 2.0 * omega_s;
  return BlochRate{-w * lambda * b.x * b.z, -w * b.z * (1.0 + lambda * b.y),
                   w * (lambda * (1.0 - b.z * b.z) + b.y)};
}

std::vector<BlochState> mc_zeno_trajectory(const BlochState& b0, const MeasurementParams& params,
                                           std::size_t n_steps) {
  if (n_steps < 1) throw Error(ErrorCode::InvalidParameter, "n_steps must be >= 1");
  std::vector<BlochState> out;
  out.reserve(n_steps + 1);
  DensityMatrix rho = density_from_bloch(b0);
  out.push_back(bloch_from_density(rho));
  for (std::size_t i = 0; i < n_steps; ++i) {
    rho = postselected_step(rho, params);
    out.push_back(bloch_from_density(rho));
  }
  return out;
}

std::vector<BlochState> drift_trajectory(const BlochState& b0, double omega_s, double lambda,
                                         double dt, std::size_t n_steps) {
  require_positive(dt, "dt");
  const auto rhs = [&](const StateVec<3>& s) {
    const BlochRate r = drift_rhs(BlochState{s[0], s[1], s[2]}, omega_s, lambda);
    return StateVec<3>{r.dx, r.dy, r.dz};
  };
  std::vector<BlochState> out;
  out.reserve(n_steps + 1);
  StateVec<3> s{b0.x, b0.y, b0.z};
  out.push_back(b0);
  for (std::size_t i = 0; i < n_steps; ++i) {
    s = rk4_step(rhs, s, dt);
    out.push_back(BlochState{s[0], s[1], s[2]});
  }
  return out;
}

}  // namespace zeno
