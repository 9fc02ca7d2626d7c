#include "zeno/diffusive.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "zeno/error.hpp"
#include "zeno/rk4.hpp"

namespace zeno {
namespace {

constexpr double kStallNorm = 1e-10;
constexpr double kMaxRotationPerStep = 0.5;
constexpr std::size_t kEnsembleChunk = 8;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be finite and > 0");
  }
}

StateVec<6> to_vec(const ExtendedState& s) { return {s.x, s.y, s.z, s.p_x, s.p_y, s.p_z}; }

ExtendedState from_vec(const StateVec<6>& v, const DiffusiveParams& params) {
  ExtendedState s{v[0], v[1], v[2], v[3], v[4], v[5], 0.0};
  s.r = mlp_readout(s, params);
  return s;
}

BlochState unit(const BlochState& b) {
  const double n = b.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidState, "cannot renormalize a zero or non-finite Bloch vector");
  }
  return {b.x / n, b.y / n, b.z / n};
}

// Welford accumulator over one time series of Bloch vectors.
struct SeriesStats {
  std::size_t count = 0;
  std::vector<std::array<double, 3>> mean;
  std::vector<std::array<double, 3>> m2;

  explicit SeriesStats(std::size_t length) : mean(length), m2(length) {}

  void add(const std::vector<DiffusiveSample>& samples, std::size_t stride) {
    ++count;
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const BlochState& b = samples[k * stride].state;
      const std::array<double, 3> v{b.x, b.y, b.z};
      for (int c = 0; c < 3; ++c) {
        const double delta = v[c] - mean[k][c];
        mean[k][c] += delta * inv;
        m2[k][c] += delta * (v[c] - mean[k][c]);
      }
    }
  }

  // Chan et al. pairwise merge.
  void merge(const SeriesStats& other) {
    if (other.count == 0) return;
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      for (int c = 0; c < 3; ++c) {
        const double delta = other.mean[k][c] - mean[k][c];
        mean[k][c] += delta * nb / n;
        m2[k][c] += other.m2[k][c] + delta * delta * na * nb / n;
      }
    }
    count += other.count;
  }
};

}  // namespace

DiffusiveParams::DiffusiveParams(double omega_s, double alpha, double tau)
    : omega_s_(omega_s), alpha_(alpha), tau_(tau) {
  require_positive(omega_s, "omega_s");
  require_positive(tau, "tau");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidParameter, "alpha must be finite and >= 0");
  }
}

DiffusiveParams DiffusiveParams::from_alpha(double omega_s, double alpha, double tau) {
  return DiffusiveParams(omega_s, alpha, tau);
}

DiffusiveParams DiffusiveParams::from_lambda(double omega_s, double lambda, double tau) {
  return DiffusiveParams(omega_s, 4.0 * omega_s * lambda, tau);
}

WienerStream::WienerStream(std::uint64_t seed, double dt, NoiseKind kind)
    : seed_(seed), dt_(dt), sqrt_dt_(std::sqrt(dt)), kind_(kind), engine_(seed) {
  require_positive(dt, "dt");
}

double WienerStream::next() {
  if (kind_ == NoiseKind::Gaussian) return sqrt_dt_ * normal_(engine_);
  return (engine_() >> 63) != 0 ? sqrt_dt_ : -sqrt_dt_;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BlochRate sme_rhs(const BlochState& b, double r, const DiffusiveParams& params) {
  const double a = params.alpha();
  const double w = 2.0 * params.omega_s();
  const double kick = r * std::sqrt(a / params.tau());
  return {-0.5 * a * b.x * b.z + kick * b.y, -0.5 * a * b.y * b.z - kick * b.x - w * b.z,
          0.5 * a * (1.0 - b.z * b.z) + w * b.y};
}

DensityMatrix gaussian_kraus_step(const DensityMatrix& rho, double r,
                                  const DiffusiveParams& params, double dt) {
  const Complex i(0.0, 1.0);
  const Matrix2c p1 = excited_projector();
  const Matrix2c generator = -i * params.omega_s() * dt * sigma_x() -
                             i * std::sqrt(params.alpha() / params.tau()) * r * dt * p1 -
                             0.5 * params.alpha() * dt * p1;
  const Matrix2c m = expm2(generator);
  Matrix2c next = m * rho.matrix() * m.adjoint();
  const double tr = next.trace().real();
  if (!(tr > 1e-15)) throw Error(ErrorCode::NormalizationUnderflow, "Kraus update annihilated state");
  next /= tr;
  return DensityMatrix(0.5 * (next + next.adjoint()));
}

DiffusivePath sample_trajectory(const BlochState& b0, const DiffusiveParams& params, double dt,
                                double t_end, WienerStream stream) {
  require_positive(dt, "dt");
  if (!(t_end >= 0.0)) throw Error(ErrorCode::InvalidParameter, "t_end must be >= 0");
  if (dt > params.tau() / 10.0) {
    throw Error(ErrorCode::StepTooLarge, "dt must not exceed tau / 10");
  }
  if (std::abs(stream.dt() - dt) > 1e-15 * dt) {
    throw Error(ErrorCode::InvalidParameter, "Wiener stream dt does not match trajectory dt");
  }

  const double sqrt_alpha = std::sqrt(params.alpha());
  const double sqrt_tau = std::sqrt(params.tau());
  const auto drift = [&](const StateVec<3>& s) {
    const BlochRate r = sme_rhs(BlochState{s[0], s[1], s[2]}, 0.0, params);
    return StateVec<3>{r.dx, r.dy, r.dz};
  };

  DiffusivePath path;
  path.weak_coupling_violated = !params.weak_coupling(t_end);
  // All steps have size dt so the Wiener increments keep variance dt.
  const auto n = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  path.samples.reserve(n + 1);

  BlochState b = unit(b0);
  path.samples.push_back({0.0, b, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    const double dw = stream.next();
    const StateVec<3> moved = rk4_step(drift, StateVec<3>{b.x, b.y, b.z}, dt);
    const double kick = sqrt_alpha * dw;
    b = unit(BlochState{moved[0] + kick * b.y, moved[1] - kick * b.x, moved[2]});
    path.samples.push_back({dt * static_cast<double>(i + 1), b, sqrt_tau * dw / dt});
  }
  return path;
}

double mlp_readout(const ExtendedState& s, const DiffusiveParams& params) {
  return std::sqrt(params.alpha() * params.tau()) * (s.y * s.p_x - s.x * s.p_y);
}

double stochastic_hamiltonian(const ExtendedState& s, const DiffusiveParams& params) {
  const double a = params.alpha();
  const double w = 2.0 * params.omega_s();
  const double k = s.y * s.p_x - s.x * s.p_y;
  return -0.5 * a * s.x * s.z * s.p_x - 0.5 * a * s.y * s.z * s.p_y - w * s.z * s.p_y +
         s.p_z * (0.5 * a * (1.0 - s.z * s.z) + w * s.y) - 0.5 * a * (1.0 - s.z) + 0.5 * a * k * k;
}

ExtendedRate mlp_rhs(const ExtendedState& s, const DiffusiveParams& params) {
  const double a = params.alpha();
  const double w = 2.0 * params.omega_s();
  const double kick = mlp_readout(s, params) * std::sqrt(a / params.tau());
  return {-0.5 * a * s.x * s.z + kick * s.y,
          -0.5 * a * s.y * s.z - kick * s.x - w * s.z,
          0.5 * a * (1.0 - s.z * s.z) + w * s.y,
          0.5 * a * s.z * s.p_x + kick * s.p_y,
          -kick * s.p_x + 0.5 * a * s.z * s.p_y - w * s.p_z,
          0.5 * a * s.x * s.p_x + 0.5 * a * s.y * s.p_y + w * s.p_y + a * s.z * s.p_z - 0.5 * a};
}

ExtendedJacobian mlp_jacobian(const ExtendedState& s, const DiffusiveParams& params) {
  const double a = params.alpha();
  const double w = 2.0 * params.omega_s();
  const double x = s.x, y = s.y, z = s.z, px = s.p_x, py = s.p_y, pz = s.p_z;
  const double k = a * (y * px - x * py);  // = r sqrt(alpha/tau)
  ExtendedJacobian j{};
  j[0] = {-0.5 * a * z - a * y * py, k + a * y * px, -0.5 * a * x, a * y * y, -a * x * y, 0.0};
  j[1] = {-k + a * x * py, -0.5 * a * z - a * x * px, -0.5 * a * y - w, -a * x * y, a * x * x, 0.0};
  j[2] = {0.0, w, -a * z, 0.0, 0.0, 0.0};
  j[3] = {-a * py * py, a * px * py, 0.5 * a * px, 0.5 * a * z + a * py * y, k - a * py * x, 0.0};
  j[4] = {a * px * py, -a * px * px, 0.5 * a * py, -k - a * px * y, a * px * x + 0.5 * a * z, -w};
  j[5] = {0.5 * a * px, 0.5 * a * py, a * pz, 0.5 * a * x, 0.5 * a * y + w, a * z};
  return j;
}

MlpPath integrate_mlp(const ExtendedState& s0, const DiffusiveParams& params, double dt,
                      double t_end) {
  require_positive(dt, "dt");
  if (!(t_end >= 0.0)) throw Error(ErrorCode::InvalidParameter, "t_end must be >= 0");

  const auto rhs = [&](const StateVec<6>& v) {
    return mlp_rhs(from_vec(v, params), params);
  };

  MlpPath path;
  const std::size_t n = step_count(dt, t_end);
  path.samples.reserve(n + 1);

  const auto record = [&](double t, const StateVec<6>& v) {
    const ExtendedState s = from_vec(v, params);
    path.samples.push_back({t, s, stochastic_hamiltonian(s, params)});
    const ExtendedRate r = mlp_rhs(s, params);
    double norm2 = 0.0;
    for (double c : r) norm2 += c * c;
    if (std::sqrt(norm2) < kStallNorm) path.stalled = true;
  };

  StateVec<6> v = to_vec(s0);
  record(0.0, v);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = step_size(dt, t_end, i, n);
    const ExtendedState s = from_vec(v, params);
    const double rotation = params.alpha() * std::abs(s.y * s.p_x - s.x * s.p_y) * h;
    if (!(rotation <= kMaxRotationPerStep)) {
      path.diverged = true;
      break;
    }
    const StateVec<6> next = rk4_step(rhs, v, h);
    if (!std::all_of(next.begin(), next.end(), [](double c) { return std::isfinite(c); })) {
      path.diverged = true;
      break;
    }
    v = next;
    record((i + 1 == n) ? t_end : dt * static_cast<double>(i + 1), v);
  }
  return path;
}

ExtendedState mlp_fixed_point(const ExtendedState& guess, const DiffusiveParams& params) {
  Eigen::Matrix<double, 6, 1> v;
  v << guess.x, guess.y, guess.z, guess.p_x, guess.p_y, guess.p_z;
  const auto state_of = [&](const Eigen::Matrix<double, 6, 1>& u) {
    ExtendedState s{u[0], u[1], u[2], u[3], u[4], u[5], 0.0};
    s.r = mlp_readout(s, params);
    return s;
  };
  for (int iter = 0; iter < 100; ++iter) {
    const ExtendedState s = state_of(v);
    const ExtendedRate f = mlp_rhs(s, params);
    const ExtendedJacobian jac = mlp_jacobian(s, params);
    Eigen::Matrix<double, 6, 1> rhs;
    Eigen::Matrix<double, 6, 6> m;
    for (int r = 0; r < 6; ++r) {
      rhs[r] = -f[r];
      for (int c = 0; c < 6; ++c) m(r, c) = jac[r][c];
    }
    const Eigen::Matrix<double, 6, 1> step = m.fullPivLu().solve(rhs);
    if (!step.allFinite()) break;
    v += step;
    if (step.norm() < 1e-14 * (1.0 + v.norm())) {
      const ExtendedState out = state_of(v);
      const ExtendedRate res = mlp_rhs(out, params);
      double norm2 = 0.0;
      for (double c : res) norm2 += c * c;
      if (std::sqrt(norm2) < 1e-10) return out;
      break;
    }
  }
  throw Error(ErrorCode::NoConvergence, "Newton iteration for the extremal fixed point failed");
}

std::vector<EnsembleSample> ensemble_stats(const BlochState& b0, const DiffusiveParams& params,
                                           double dt, double t_end, std::size_t n,
                                           std::uint64_t base_seed,
                                           const EnsembleOptions& options) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "ensemble size must be >= 1");
  if (options.stride < 1) throw Error(ErrorCode::InvalidParameter, "stride must be >= 1");

  const auto run = [&](std::size_t index) {
    return sample_trajectory(b0, params, dt, t_end,
                             WienerStream(derive_seed(base_seed, index), dt, options.noise));
  };

  // Probe the sampling grid once (also surfaces parameter errors early).
  const DiffusivePath first = run(0);
  const std::size_t length = (first.samples.size() - 1) / options.stride + 1;

  const std::size_t chunks = (n + kEnsembleChunk - 1) / kEnsembleChunk;
  const auto run_chunk = [&](std::size_t chunk) {
    SeriesStats stats(length);
    const std::size_t begin = chunk * kEnsembleChunk;
    const std::size_t end = std::min(n, begin + kEnsembleChunk);
    for (std::size_t i = begin; i < end; ++i) {
      if (i == 0) {
        stats.add(first.samples, options.stride);
      } else {
        stats.add(run(i).samples, options.stride);
      }
    }
    return stats;
  };

  const unsigned threads = std::max(1u, options.threads);
  SeriesStats total(length);
  for (std::size_t group = 0; group < chunks; group += threads) {
    const std::size_t group_end = std::min(chunks, group + threads);
    std::vector<SeriesStats> results(group_end - group, SeriesStats(0));
    if (threads == 1) {
      results[0] = run_chunk(group);
    } else {
      std::vector<std::jthread> workers;
      workers.reserve(results.size());
      for (std::size_t c = group; c < group_end; ++c) {
        workers.emplace_back([&, c] { results[c - group] = run_chunk(c); });
      }
    }
    for (const SeriesStats& s : results) total.merge(s);
  }

  std::vector<EnsembleSample> out(length);
  for (std::size_t k = 0; k < length; ++k) {
    out[k].t = first.samples[k * options.stride].t;
    out[k].mean = total.mean[k];
    for (int c = 0; c < 3; ++c) {
      out[k].variance[c] = n > 1 ? total.m2[k][c] / static_cast<double>(n - 1) : 0.0;
    }
  }
  return out;
}

}  // namespace zeno
