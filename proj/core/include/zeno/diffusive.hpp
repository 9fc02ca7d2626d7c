#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "zeno/measurement.hpp"

namespace zeno {

// Gaussian-readout (diffusive) measurement regime.
class DiffusiveParams {
 public:
  static constexpr double kDefaultTau = 100.0;

  static DiffusiveParams from_alpha(double omega_s, double alpha, double tau = kDefaultTau);
  static DiffusiveParams from_lambda(double omega_s, double lambda, double tau = kDefaultTau);

  double omega_s() const { return omega_s_; }
  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  double lambda() const { return alpha_ / (4.0 * omega_s_); }

  // The detector model assumes tau >> total measurement time.
  bool weak_coupling(double t_end) const { return tau_ >= 10.0 * t_end; }

 private:
  DiffusiveParams(double omega_s, double alpha, double tau);

  double omega_s_;
  double alpha_;
  double tau_;
};

// Bloch coordinates plus conjugate momenta of the most-likely-path problem.
// r is derived: r = sqrt(alpha tau) (y p_x - x p_y).
struct ExtendedState {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;
  double r = 0.0;

  BlochState bloch() const { return {x, y, z}; }
};

using ExtendedRate = std::array<double, 6>;
using ExtendedJacobian = std::array<std::array<double, 6>, 6>;

enum class NoiseKind { Binary, Gaussian };

// Source of Wiener increments dW for a fixed step dt.
// Binary: +-sqrt(dt) with probability 1/2 each (one bit of a 64-bit Mersenne
// Twister draw). Gaussian: N(0, dt).
class WienerStream {
 public:
  WienerStream(std::uint64_t seed, double dt, NoiseKind kind = NoiseKind::Binary);

  double next();

  std::uint64_t seed() const { return seed_; }
  double dt() const { return dt_; }
  NoiseKind kind() const { return kind_; }

 private:
  std::uint64_t seed_;
  double dt_;
  double sqrt_dt_;
  NoiseKind kind_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Deterministic per-trajectory seed (splitmix64 of base and index).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

// Conditioned Bloch drift for readout r:
//   dx/dt = -alpha x z / 2 + r sqrt(alpha/tau) y
//   dy/dt = -alpha y z / 2 - r sqrt(alpha/tau) x - 2 omega_s z
//   dz/dt =  alpha (1 - z^2) / 2 + 2 omega_s y
BlochRate sme_rhs(const BlochState& b, double r, const DiffusiveParams& params);

// One exact Gaussian-Kraus update M_r rho M_r^dag / Tr with
//   M_r ~ exp(-i omega_s sigma_x dt - i sqrt(alpha/tau) r dt P1 - alpha dt P1 / 2),
// P1 = |1><1|. Agrees with an Euler step of sme_rhs to O(dt^2).
DensityMatrix gaussian_kraus_step(const DensityMatrix& rho, double r,
                                  const DiffusiveParams& params, double dt);

struct DiffusiveSample {
  double t = 0.0;
  BlochState state;
  double readout = 0.0;  // r of the step that ended here (0 for the first sample)
};

struct DiffusivePath {
  std::vector<DiffusiveSample> samples;
  bool weak_coupling_violated = false;
};

// Stochastic pure-state trajectory. Each step takes an RK4 step of the r = 0
// drift, adds the readout kick sqrt(alpha) dW (y, -x, 0) (equivalently
// r sqrt(alpha/tau) dt with r dt = sqrt(tau) dW) and renormalizes to the unit
// sphere. Throws StepTooLarge when dt > tau / 10.
DiffusivePath sample_trajectory(const BlochState& b0, const DiffusiveParams& params, double dt,
                                double t_end, WienerStream stream);

double mlp_readout(const ExtendedState& s, const DiffusiveParams& params);

// Stochastic Hamiltonian with r taken from the readout constraint.
double stochastic_hamiltonian(const ExtendedState& s, const DiffusiveParams& params);

// The six extremal-path equations; r is recomputed from the constraint.
ExtendedRate mlp_rhs(const ExtendedState& s, const DiffusiveParams& params);
ExtendedJacobian mlp_jacobian(const ExtendedState& s, const DiffusiveParams& params);

struct MlpSample {
  double t = 0.0;
  ExtendedState state;
  double hamiltonian = 0.0;
};

struct MlpPath {
  std::vector<MlpSample> samples;
  bool stalled = false;   // |rhs| < 1e-10 somewhere
  bool diverged = false;  // stopped early: non-finite state or stiff readout rotation
};

// Reference start point for the extremal-path examples.
inline ExtendedState default_mlp_start() { return {0.0, 0.4, 0.916, 0.5, 0.3, 0.2, 0.0}; }

// Fixed-step RK4 on mlp_rhs. Integration stops early (diverged = true) once a
// step would rotate (x, y) by more than 0.5 rad through the readout term or
// the state stops being finite.
MlpPath integrate_mlp(const ExtendedState& s0, const DiffusiveParams& params, double dt,
                      double t_end);

// Newton iteration on mlp_rhs = 0 from `guess`. Throws NoConvergence.
ExtendedState mlp_fixed_point(const ExtendedState& guess, const DiffusiveParams& params);

struct EnsembleOptions {
  NoiseKind noise = NoiseKind::Binary;
  unsigned threads = 1;
  std::size_t stride = 1;  // keep every stride-th time point
};

struct EnsembleSample {
  double t = 0.0;
  std::array<double, 3> mean{};
  std::array<double, 3> variance{};  // unbiased; 0 for n = 1
};

// Mean and variance of (x, y, z) over n trajectories seeded with
// derive_seed(base_seed, i). Trajectories are grouped in fixed chunks merged in
// index order, so the result does not depend on the thread count.
std::vector<EnsembleSample> ensemble_stats(const BlochState& b0, const DiffusiveParams& params,
                                           double dt, double t_end, std::size_t n,
                                           std::uint64_t base_seed,
                                           const EnsembleOptions& options = {});

}  // namespace zeno
