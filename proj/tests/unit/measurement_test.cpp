#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zeno/error.hpp"
#include "zeno/measurement.hpp"

namespace {

using namespace zeno;
constexpr double kPi = std::numbers::pi;

double distance(const BlochState& a, const BlochState& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

BlochState zeno_fixed_point(double lambda) {
  return {0.0, -1.0 / lambda, std::sqrt(1.0 - 1.0 / (lambda * lambda))};
}

BlochState random_bloch(std::mt19937_64& g) {
  const double r = std::cbrt(oracle::uniform(g, 0, 1));
  const double ct = oracle::uniform(g, -1, 1);
  const double phi = oracle::uniform(g, 0, 2 * kPi);
  const double st = std::sqrt(1 - ct * ct);
  return {r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
}

TEST(KrausPair, NoMeasurementLimit) {
  const KrausPair k = kraus_pair(1.0, 0.0);
  EXPECT_LT(max_abs(k.m0 - identity2()), 1e-15);
  EXPECT_LT(max_abs(k.m1), 1e-15);
}

TEST(KrausPair, ProjectiveLimit) {
  const KrausPair k = kraus_pair(kPi / 2, 1.0);
  EXPECT_NEAR(std::abs(k.m0(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k.m0(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k.m1(1, 1) - 1.0), 0.0, 1e-15);
}

TEST(KrausPair, CompletenessAtModerateCoupling) {
  const KrausPair k = kraus_pair(0.3, 1.0);
  const Matrix2c sum = k.m0.adjoint() * k.m0 + k.m1.adjoint() * k.m1;
  EXPECT_LT(max_abs(sum - identity2()), 1e-12);
  EXPECT_LT(k.completeness_residual(), 1e-12);
}

TEST(KrausPair, CompletenessProperty) {
  auto g = oracle::rng(1);
  for (int i = 0; i < 500; ++i) {
    const KrausPair k = kraus_pair(oracle::uniform(g, 0, 50), oracle::uniform(g, 0, 2));
    EXPECT_LT(k.completeness_residual(), 1e-12);
  }
}

TEST(UnitaryStep, ZeroTimeIsIdentity) {
  EXPECT_LT(max_abs(unitary_step(0.5, 0.0) - identity2()), 1e-15);
}

TEST(UnitaryStep, HalfPeriodFlip) {
  const Complex i(0, 1);
  EXPECT_LT(max_abs(unitary_step(1.0, kPi / 2) - (-i * sigma_x())), 1e-15);
}

TEST(UnitaryStep, Unitarity) {
  const Matrix2c u = unitary_step(0.5, 0.1);
  EXPECT_LT(max_abs(u.adjoint() * u - identity2()), 1e-14);
}

TEST(DensityMatrix, DefaultIsGroundState) {
  const BlochState b = bloch_from_density(DensityMatrix());
  EXPECT_EQ(b.x, 0.0);
  EXPECT_EQ(b.y, 0.0);
  EXPECT_EQ(b.z, 1.0);
}

TEST(DensityMatrix, RejectsInvalidMatrices) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = 0.7;
  EXPECT_THROW(DensityMatrix{m}, Error);  // trace 0.7
  m(1, 1) = 0.3;
  m(0, 1) = Complex(0.1, 0.0);
  EXPECT_THROW(DensityMatrix{m}, Error);  // not Hermitian
  m(1, 0) = Complex(0.1, 0.0);
  EXPECT_NO_THROW(DensityMatrix{m});
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  try {
    DensityMatrix bad(m);
    FAIL() << "negative eigenvalue accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidState);
  }
}

TEST(BlochConversion, PolesMapToBasisStates) {
  const DensityMatrix down = density_from_bloch({0, 0, -1});
  EXPECT_NEAR(down(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(down(1, 1).real(), 1.0, 1e-15);
  const BlochState up = bloch_from_density(DensityMatrix());
  EXPECT_DOUBLE_EQ(up.z, 1.0);
}

TEST(BlochConversion, LayoutMatchesOracle) {
  const DensityMatrix rho = density_from_bloch({0.3, -0.4, 0.5});
  const oracle::Mat2 ref = oracle::rho_of(0.3, -0.4, 0.5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_LT(std::abs(rho(i, j) - ref[i][j]), 1e-15);
}

TEST(BlochConversion, RoundTripProperty) {
  auto g = oracle::rng(2);
  for (int i = 0; i < 1000; ++i) {
    const BlochState b = random_bloch(g);
    const DensityMatrix rho = density_from_bloch(b);
    EXPECT_LT(distance(bloch_from_density(rho), b), 1e-12);
    const DensityMatrix again = density_from_bloch(bloch_from_density(rho));
    EXPECT_LT(max_abs(again.matrix() - rho.matrix()), 1e-12);
  }
}

TEST(BlochConversion, RejectsVectorsOutsideSphere) {
  try {
    density_from_bloch({0.0, 0.8, 0.8});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidState);
  }
  EXPECT_NO_THROW(density_from_bloch({0.0, 0.0, 1.0 + 5e-10}));
}

TEST(MeasurementParams, DerivedQuantities) {
  const auto p = MeasurementParams::from_coupling(0.5, 2.0, 0.01);
  EXPECT_DOUBLE_EQ(p.alpha(), 0.04);
  EXPECT_DOUBLE_EQ(p.lambda(), 0.04 / 2.0);
  const auto q = MeasurementParams::from_lambda(0.5, 1.5, 1e-3);
  EXPECT_NEAR(q.alpha(), 3.0, 1e-12);
  EXPECT_NEAR(q.j_coupling(), std::sqrt(3.0 / 1e-3), 1e-9);
}

TEST(MeasurementParams, Validation) {
  EXPECT_THROW(MeasurementParams::from_coupling(0.0, 1.0, 0.1), Error);
  EXPECT_THROW(MeasurementParams::from_coupling(0.5, 1.0, 0.0), Error);
  EXPECT_THROW(MeasurementParams::from_coupling(0.5, 1.0, 0.1, -1.0), Error);
  EXPECT_THROW(MeasurementParams::from_rate(0.5, -1.0, 0.1), Error);
  EXPECT_THROW(MeasurementParams::from_lambda(0.5, -0.1, 0.1), Error);
}

TEST(PostselectedStep, GroundStateStaysNormalized) {
  const auto p = MeasurementParams::from_coupling(0.5, 3.0, 0.05);
  const DensityMatrix out = postselected_step(DensityMatrix(), p);
  EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_LT(max_abs(out.matrix() - out.matrix().adjoint()), 1e-15);
}

TEST(PostselectedStep, MatchesPlainMatrixOracle) {
  auto g = oracle::rng(3);
  for (int i = 0; i < 200; ++i) {
    const BlochState b = random_bloch(g);
    const double omega = oracle::uniform(g, 0.1, 2.0);
    const double j = oracle::uniform(g, 0.0, 5.0);
    const double dt = oracle::uniform(g, 1e-3, 0.3);
    const auto p = MeasurementParams::from_coupling(omega, j, dt);
    const BlochState out = bloch_from_density(postselected_step(density_from_bloch(b), p));
    const auto ref = oracle::postselected_bloch(b.x, b.y, b.z, omega, j, dt);
    EXPECT_LT(distance(out, {ref[0], ref[1], ref[2]}), 1e-12);
  }
}

TEST(PostselectedStep, PreservesInvariantsProperty) {
  auto g = oracle::rng(4);
  for (int i = 0; i < 500; ++i) {
    const auto p = MeasurementParams::from_coupling(oracle::uniform(g, 0.05, 3.0),
                                                    oracle::uniform(g, 0.0, 10.0),
                                                    oracle::uniform(g, 1e-4, 0.5));
    const DensityMatrix out = postselected_step(density_from_bloch(random_bloch(g)), p);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(out.min_eigenvalue(), -1e-12);
  }
}

TEST(PostselectedStep, FixedPointMovesAtSecondOrder) {
  const double lambda = 1.5;
  const BlochState fp = zeno_fixed_point(lambda);
  double previous = 0.0;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    const auto p = MeasurementParams::from_lambda(0.5, lambda, dt);
    const double move = distance(bloch_from_density(postselected_step(density_from_bloch(fp), p)), fp);
    EXPECT_LT(move, 10 * dt * dt);
    if (previous > 0) {
      EXPECT_NEAR(previous / move, 4.0, 0.4);
    }
    previous = move;
  }
}

TEST(PostselectedStep, MaximallyMixedMatchesFirstOrderDrift) {
  const double dt = 1e-3;
  const auto p = MeasurementParams::from_coupling(0.5, 1.0, dt);
  const DensityMatrix half(0.5 * identity2());
  const BlochState out = bloch_from_density(postselected_step(half, p));
  const BlochRate r = drift_rhs({0, 0, 0}, 0.5, p.lambda());
  EXPECT_LT(distance(out, {dt * r.dx, dt * r.dy, dt * r.dz}), 10 * dt * dt);
}

TEST(PostselectedStep, AnnihilatedStateUnderflows) {
  const auto p = MeasurementParams::from_coupling(1e-9, kPi / 2, 1.0);
  try {
    postselected_step(density_from_bloch({0, 0, -1}), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormalizationUnderflow);
    EXPECT_NE(std::string(e.what()).find("NormalizationUnderflow"), std::string::npos);
  }
}

TEST(DriftRhs, PureRabi) {
  const BlochRate r = drift_rhs({0, 0, 1}, 0.5, 0.0);
  EXPECT_EQ(r.dx, 0.0);
  EXPECT_DOUBLE_EQ(r.dy, -1.0);
  EXPECT_EQ(r.dz, 0.0);
}

TEST(DriftRhs, VanishesAtZenoFixedPoint) {
  const BlochRate r = drift_rhs({0, -2.0 / 3.0, std::sqrt(1 - 4.0 / 9.0)}, 0.5, 1.5);
  EXPECT_NEAR(r.dx, 0.0, 1e-15);
  EXPECT_NEAR(r.dy, 0.0, 1e-15);
  EXPECT_NEAR(r.dz, 0.0, 1e-15);
}

TEST(DriftRhs, FixedPointResidualProperty) {
  for (double lambda = 1.001; lambda < 50; lambda *= 1.17) {
    const BlochRate r = drift_rhs(zeno_fixed_point(lambda), 0.5, lambda);
    EXPECT_LT(std::sqrt(r.dx * r.dx + r.dy * r.dy + r.dz * r.dz), 1e-12) << lambda;
  }
}

TEST(DriftRhs, MatchesFiniteDifferenceOfStep) {
  const BlochState b{0, 0.4, 0.9165};
  const double dt = 1e-6;
  const auto p = MeasurementParams::from_lambda(0.5, 0.5, dt);
  const BlochState next = bloch_from_density(postselected_step(density_from_bloch(b), p));
  const BlochRate r = drift_rhs(b, 0.5, 0.5);
  EXPECT_NEAR((next.y - b.y) / dt, r.dy, 1e-5 * std::abs(r.dy));
  EXPECT_NEAR((next.z - b.z) / dt, r.dz, 1e-5 * std::abs(r.dz));
  EXPECT_NEAR((next.x - b.x) / dt, r.dx, 1e-12);
}

TEST(DriftRhs, OneStepErrorIsSecondOrder) {
  const BlochState b{0.2, 0.3, 0.8};
  std::vector<double> errors;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    const auto p = MeasurementParams::from_lambda(0.5, 0.7, dt);
    const BlochState next = bloch_from_density(postselected_step(density_from_bloch(b), p));
    const BlochRate r = drift_rhs(b, 0.5, 0.7);
    errors.push_back(distance(next, {b.x + dt * r.dx, b.y + dt * r.dy, b.z + dt * r.dz}));
  }
  EXPECT_NEAR(errors[0] / errors[1], 4.0, 0.4);
  EXPECT_NEAR(errors[1] / errors[2], 4.0, 0.4);
}

TEST(McZenoTrajectory, IncludesInitialStateAndRejectsZeroSteps) {
  const auto p = MeasurementParams::from_lambda(0.5, 0.5, 0.01);
  EXPECT_EQ(mc_zeno_trajectory({0, 0, 1}, p, 10).size(), 11u);
  EXPECT_THROW(mc_zeno_trajectory({0, 0, 1}, p, 0), Error);
}

TEST(McZenoTrajectory, HalfRabiPeriodFlipsState) {
  const double dt = 1e-3;
  const auto p = MeasurementParams::from_lambda(0.5, 0.0, dt);
  const auto n = static_cast<std::size_t>(std::llround(kPi / dt));
  const BlochState end = mc_zeno_trajectory({0, 0, 1}, p, n).back();
  EXPECT_LT(distance(end, {0, 0, -1}), 5 * dt);
}

TEST(McZenoTrajectory, FreezesAtZenoFixedPoint) {
  const double dt = 1e-3;
  const auto p = MeasurementParams::from_lambda(0.5, 1.5, dt);
  const BlochState end = mc_zeno_trajectory({0, 0, 1}, p, 40000).back();
  EXPECT_LT(distance(end, {0, -0.666, 0.745}), 1e-2);
}

TEST(McZenoTrajectory, StaysInYzPlane) {
  const auto p = MeasurementParams::from_lambda(0.5, 0.8, 1e-2);
  for (const BlochState& b : mc_zeno_trajectory({0, 0.6, 0.8}, p, 2000)) EXPECT_EQ(b.x, 0.0);
  for (const BlochState& b : drift_trajectory({0, 0.6, 0.8}, 0.5, 0.8, 1e-2, 2000)) {
    EXPECT_EQ(b.x, 0.0);
  }
}

TEST(McZenoTrajectory, FirstOrderConvergenceToDrift) {
  const double t_end = 2.0;
  const double lambda = 0.5;
  const auto ref = oracle::rk4_3([&](const auto& b) { return oracle::drift(b, 0.5, lambda); },
                                 {0, 0, 1}, 1e-5, 200000);
  std::vector<double> errors;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const auto p = MeasurementParams::from_lambda(0.5, lambda, dt);
    const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
    errors.push_back(distance(mc_zeno_trajectory({0, 0, 1}, p, n).back(), {ref[0], ref[1], ref[2]}));
  }
  EXPECT_NEAR(errors[0] / errors[1], 2.0, 0.4);
  EXPECT_NEAR(errors[1] / errors[2], 2.0, 0.4);
}

TEST(DriftTrajectory, MatchesIndependentRk4) {
  const auto lib = drift_trajectory({0.1, 0.2, 0.9}, 0.5, 1.2, 1e-3, 3000).back();
  const auto ref = oracle::rk4_3([](const auto& b) { return oracle::drift(b, 0.5, 1.2); },
                                 {0.1, 0.2, 0.9}, 1e-3, 3000);
  EXPECT_LT(distance(lib, {ref[0], ref[1], ref[2]}), 1e-13);
}

}  // namespace
