#include "zeno_cli/commands.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "zeno/action.hpp"
#include "zeno/diffusive.hpp"
#include "zeno/error.hpp"
#include "zeno/measurement.hpp"
#include "zeno/phase.hpp"

namespace zeno::cli {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> grid(const RunConfig& c) {
  const double start = c.real("start");
  const double stop = c.real("stop");
  const auto n = static_cast<std::size_t>(c.count("count"));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = stop;
  return out;
}

// A single --lambda (from flag or file) replaces the grid.
std::vector<double> lambda_values(const RunConfig& c) {
  if (c.has("lambda")) return {c.real("lambda")};
  return grid(c);
}

BlochState initial_bloch(const RunConfig& c) {
  return {c.real("x0"), c.real("y0"), c.real("z0")};
}

DiffusiveParams diffusive_params(const RunConfig& c) {
  return DiffusiveParams::from_alpha(c.real("omega_s"), c.real("alpha"), c.real("tau"));
}

Table portrait(const RunConfig& c) {
  Table t{{"energy[1]", "theta[rad]", "p_theta[1]"}, {}, {}};
  const double lambda = c.real("lambda");
  const std::vector<double> thetas = grid(c);
  for (double e : c.reals("energies")) {
    for (double theta : thetas) {
      try {
        t.rows.push_back({e, theta, p_theta_curve(theta, lambda, EnergyLevel{e})});
      } catch (const Error& err) {
        if (err.code() != ErrorCode::CurveSingularity) throw;
      }
    }
  }
  return t;
}

Table critical(const RunConfig& c) {
  const PhaseParams params(c.real("omega_s"), c.real("lambda"));
  const CriticalPointSet cp = critical_points(params);
  const StabilityExponents ex = stability_exponents(params);
  const double lambda = params.lambda();
  Table t{{"point[1]", "theta[rad]", "p_theta[1]", "exponent_theta[GHz]", "exponent_p_theta[GHz]",
           "energy[1]"},
          {},
          {}};
  t.rows.push_back({1.0, cp.theta1, cp.p_theta1, ex.p1.theta, ex.p1.p_theta,
                    energy_level(cp.p1(), lambda).e});
  t.rows.push_back({2.0, cp.theta2, cp.p_theta2, ex.p2.theta, ex.p2.p_theta,
                    energy_level(cp.p2(), lambda).e});
  return t;
}

Table action(const RunConfig& c) {
  const double lambda = c.real("lambda");
  const double ti = c.real("theta_i");
  const double tf = c.real("theta_f");
  const double closed = action_closed_form(ti, tf, lambda).value;
  double quad = kNan;
  try {
    quad = action_quadrature(ti, tf, lambda).value;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::IntegrandSingular) throw;
  }
  return {{"lambda[1]", "theta_i[rad]", "theta_f[rad]", "action_closed_form[hbar]",
           "action_quadrature[hbar]"},
          {{lambda, ti, tf, closed, quad}},
          {}};
}

Table transition(const RunConfig& c) {
  Table t{{"lambda[1]", "t[ns]", "frequency[GHz]"}, {}, {}};
  for (double lambda : lambda_values(c)) {
    const double time = transition_time_sub_zeno(lambda, c.real("omega_s"));
    t.rows.push_back({lambda, time, 1.0 / time});
  }
  return t;
}

Table frequencies(const RunConfig& c) {
  Table t{{"lambda[1]", "epsilon[rad]", "t1[ns]", "t12[ns]", "t2[ns]", "omega1[GHz]",
           "omega12[GHz]", "omega2[GHz]"},
          {},
          {}};
  for (double lambda : lambda_values(c)) {
    const TransitionTimes f = zeno_frequencies(lambda, c.real("omega_s"), c.real("epsilon"));
    t.rows.push_back({lambda, f.epsilon, f.t1, f.t12, f.t2, f.omega1, f.omega12, f.omega2});
  }
  return t;
}

Table density(const RunConfig& c) {
  const std::vector<double> z = grid(c);
  Table t{{"z_f[1]", "density[1]"}, {}, {}};
  for (const DensityPoint& p : final_state_density(c.real("lambda"), c.real("theta_i"), z)) {
    t.rows.push_back({p.z_f, p.density});
  }
  return t;
}

NoiseKind noise_kind(const RunConfig& c) {
  return c.text("noise") == "gaussian" ? NoiseKind::Gaussian : NoiseKind::Binary;
}

Table trajectory(const RunConfig& c) {
  const auto stride = static_cast<std::size_t>(c.count("stride"));
  const double dt = c.real("dt");
  if (c.text("model") == "postselected") {
    const MeasurementParams params =
        MeasurementParams::from_rate(c.real("omega_s"), c.real("alpha"), dt, c.real("tau"));
    const auto n = static_cast<std::size_t>(std::llround(std::ceil(c.real("t_end") / dt - 1e-9)));
    const std::vector<BlochState> states = mc_zeno_trajectory(initial_bloch(c), params, n);
    Table t{{"t[ns]", "x[1]", "y[1]", "z[1]"}, {}, {}};
    for (std::size_t i = 0; i < states.size(); i += stride) {
      const BlochState& b = states[i];
      t.rows.push_back({dt * static_cast<double>(i), b.x, b.y, b.z});
    }
    return t;
  }
  const DiffusivePath path =
      sample_trajectory(initial_bloch(c), diffusive_params(c), dt, c.real("t_end"),
                        WienerStream(c.count("seed"), dt, noise_kind(c)));
  Table t{{"t[ns]", "x[1]", "y[1]", "z[1]", "r[1]"}, {}, {}};
  for (std::size_t i = 0; i < path.samples.size(); i += stride) {
    const DiffusiveSample& s = path.samples[i];
    t.rows.push_back({s.t, s.state.x, s.state.y, s.state.z, s.readout});
  }
  t.diagnostics.emplace_back("weak_coupling_violated", path.weak_coupling_violated);
  return t;
}

Table mlp(const RunConfig& c) {
  const ExtendedState s0{c.real("x0"),  c.real("y0"),  c.real("z0"), c.real("px0"),
                         c.real("py0"), c.real("pz0"), 0.0};
  const MlpPath path = integrate_mlp(s0, diffusive_params(c), c.real("dt"), c.real("t_end"));
  const auto stride = static_cast<std::size_t>(c.count("stride"));
  Table t{{"t[ns]", "x[1]", "y[1]", "z[1]", "p_x[1]", "p_y[1]", "p_z[1]", "r[1]",
           "hamiltonian[GHz]"},
          {},
          {}};
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    if (i % stride != 0 && i + 1 != path.samples.size()) continue;
    const MlpSample& m = path.samples[i];
    const ExtendedState& s = m.state;
    t.rows.push_back({m.t, s.x, s.y, s.z, s.p_x, s.p_y, s.p_z, s.r, m.hamiltonian});
  }
  t.diagnostics.emplace_back("stalled", path.stalled);
  t.diagnostics.emplace_back("diverged", path.diverged);
  return t;
}

Table ensemble(const RunConfig& c) {
  EnsembleOptions options;
  options.noise = noise_kind(c);
  const auto threads = static_cast<unsigned>(c.count("threads"));
  options.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  options.stride = static_cast<std::size_t>(c.count("stride"));
  const std::vector<EnsembleSample> stats =
      ensemble_stats(initial_bloch(c), diffusive_params(c), c.real("dt"), c.real("t_end"),
                     static_cast<std::size_t>(c.count("n")), c.count("seed"), options);
  Table t{{"t[ns]", "mean_x[1]", "mean_y[1]", "mean_z[1]", "var_x[1]", "var_y[1]", "var_z[1]"},
          {},
          {}};
  for (const EnsembleSample& s : stats) {
    t.rows.push_back({s.t, s.mean[0], s.mean[1], s.mean[2], s.variance[0], s.variance[1],
                      s.variance[2]});
  }
  t.diagnostics.emplace_back("weak_coupling_violated",
                             !diffusive_params(c).weak_coupling(c.real("t_end")));
  return t;
}

}  // namespace

Table run_command(const RunConfig& config) {
  switch (config.command) {
    case Command::Portrait: return portrait(config);
    case Command::CriticalPoints: return critical(config);
    case Command::Action: return action(config);
    case Command::TransitionTime: return transition(config);
    case Command::ZenoFrequencies: return frequencies(config);
    case Command::Density: return density(config);
    case Command::Trajectory: return trajectory(config);
    case Command::Mlp: return mlp(config);
    case Command::Ensemble: return ensemble(config);
  }
  throw ValidationError("unknown command");
}

}  // namespace zeno::cli
