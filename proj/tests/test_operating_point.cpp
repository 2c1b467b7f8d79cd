#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "sqzcool/operating_point.hpp"
#include "sqzcool/params.hpp"
#include "sqzcool/polynomial.hpp"
#include "support.hpp"

namespace sc = sqzcool;
using sc::testing::Draws;
using sc::testing::membrane;

// ---- params -----------------------------------------------------------------

TEST(Params, CoherentStatistics) {
  const auto s = sc::derive_photon_stats(0.0, 1.3);
  EXPECT_EQ(s.n_stat, 0.0);
  EXPECT_EQ(s.m_stat, 0.0);
}

TEST(Params, StatisticsAtUnitSqueezing) {
  const auto s = sc::derive_photon_stats(1.0, 0.0);
  EXPECT_NEAR(s.n_stat, 1.3810978455418157, 1e-14);
  EXPECT_NEAR(s.m_stat, 1.8134302039235093, 1e-14);
}

TEST(Params, PureStateRelationHolds) {
  Draws d(11);
  for (int i = 0; i < 500; ++i) {
    const double r = d.uniform(0.0, 4.0);
    const auto s = sc::derive_photon_stats(r, d.uniform(-10.0, 10.0));
    EXPECT_NEAR(s.m_stat * s.m_stat, s.n_stat * (s.n_stat + 1.0), 1e-12 * (1.0 + s.m_stat * s.m_stat));
    EXPECT_GE(s.phi, 0.0);
    EXPECT_LT(s.phi, sc::two_pi);
  }
}

TEST(Params, NegativeSqueezingRejected) {
  EXPECT_THROW(sc::derive_photon_stats(-0.1, 0.0), sc::DomainError);
}

TEST(Params, PhaseWrapsIntoPrincipalRange) {
  EXPECT_NEAR(sc::canonical_phase(-0.5 * std::numbers::pi), 1.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(sc::canonical_phase(5.0 * std::numbers::pi), std::numbers::pi, 1e-14);
  EXPECT_EQ(sc::canonical_phase(0.0), 0.0);
}

TEST(Params, BathOccupancyOfTheMembrane) {
  const double n = sc::thermal_occupancy(0.037, sc::hz_to_rad_s(10.1e6));
  EXPECT_NEAR(n, 75.83, 0.01);
}

TEST(Params, PumpAmplitude) {
  const double P = 1e-3, wp = sc::omega_from_wavelength(1064e-9), k = 1e6;
  EXPECT_NEAR(sc::pump_amplitude(P, wp, k), std::sqrt(P * k / (2.0 * sc::PhysicalConstants::hbar * wp)), 1e-6);
  EXPECT_THROW(sc::pump_amplitude(-1.0, wp, k), sc::DomainError);
}

TEST(Params, GeometricCoupling) {
  const double m = 1e-12, wm = 2e7, wc = 1.77e15, L = 1e-3;
  const auto g = sc::coupling_from_geometry(wc, L, m, wm);
  EXPECT_NEAR(g.x_zpf, std::sqrt(sc::PhysicalConstants::hbar / (2.0 * m * wm)), 1e-25);
  EXPECT_NEAR(g.g_m, wc / L * g.x_zpf, 1e-9 * g.g_m);
}

TEST(Params, ValidationRejectsBadInput) {
  auto p = membrane();
  EXPECT_NO_THROW(p.validate());
  auto q = p;
  q.kappa = 0.0;
  EXPECT_THROW(q.validate(), sc::DomainError);
  q = p;
  q.gamma_m = 1e-13 * p.omega_m;
  EXPECT_THROW(q.validate(), sc::DomainError);
  q = p;
  q.input_power = 1e-3;  // both drive modes
  q.omega_p = 1.0;
  EXPECT_THROW(q.validate(), sc::DomainError);
  q = p;
  q.bath_temperature = 0.0;
  EXPECT_THROW(q.validate(), sc::DomainError);
}

// ---- polynomial ---------------------------------------------------------------

TEST(Polynomial, DistinctRealRoots) {
  const auto r = sc::poly::real_roots({1.0, -6.0, 11.0, -6.0});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], 1.0, 1e-13);
  EXPECT_NEAR(r[1], 2.0, 1e-13);
  EXPECT_NEAR(r[2], 3.0, 1e-13);
}

TEST(Polynomial, DoubleRootCollapses) {
  // (x - 1)^2 (x + 2)
  const auto r = sc::poly::real_roots({1.0, 0.0, -3.0, 2.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], -2.0, 1e-12);
  EXPECT_NEAR(r[1], 1.0, 1e-7);
}

TEST(Polynomial, RouthCountsRightHalfPlaneRoots) {
  // (s + 1)(s + 2)(s - 3)(s + 4) = s^4 + 4 s^3 - 7 s^2 - 34 s - 24
  const auto r = sc::poly::routh_hurwitz({1.0, 4.0, -7.0, -34.0, -24.0});
  EXPECT_FALSE(r.stable);
  EXPECT_EQ(r.sign_changes, 1);
  // (s + 1)(s + 2)(s + 3)(s + 4)
  EXPECT_TRUE(sc::poly::routh_hurwitz({1.0, 10.0, 35.0, 50.0, 24.0}).stable);
}

TEST(Polynomial, RouthFlagsImaginaryAxisRoots) {
  // (s^2 + 1)(s + 1)(s + 2): roots on the imaginary axis are not strictly stable
  const auto r = sc::poly::routh_hurwitz({1.0, 3.0, 3.0, 3.0, 2.0});
  EXPECT_FALSE(r.stable);
}

// ---- steady state -------------------------------------------------------------

namespace {

// kappa = Delta0 = g_m = omega_m = 1 and eps = 1: the cubic becomes
// q^3 - 2 q^2 + 2 q - 1 = (q - 1)(q^2 - q + 1), with the single real root q = 1.
sc::SystemParams unit_cavity(double eps) {
  sc::SystemParams p;
  p.omega_m = 1.0;
  p.gamma_m = 0.01;
  p.kappa = 1.0;
  p.delta0 = 1.0;
  p.g_m = 1.0;
  p.bath_temperature = 1.0;
  p.omega_p = 1.0;
  p.input_power = 2.0 * sc::PhysicalConstants::hbar * eps * eps;  // eps^2 = P kappa / (2 hbar omega_p)
  return p;
}

double steady_residual(const sc::SystemParams& p, const sc::OperatingPoint& op) {
  // omega_m q = g_m eps^2 / (kappa^2 + (Delta0 - g_m q)^2)
  const double eps = sc::pump_amplitude(*p.input_power, *p.omega_p, p.kappa);
  const double q = *op.q_s;
  const double d = p.delta0 - p.g_m * q;
  const double lhs = p.omega_m * q;
  const double rhs = p.g_m * eps * eps / (p.kappa * p.kappa + d * d);
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

TEST(SteadyState, UnitCavityHasSingleRootAtOne) {
  const auto p = unit_cavity(1.0);
  const auto ops = sc::solve_steady_state(p);
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_NEAR(*ops[0].q_s, 1.0, 1e-12);
  EXPECT_TRUE(ops[0].principal);
  EXPECT_NEAR(ops[0].delta, 0.0, 1e-12);
  EXPECT_NEAR(*ops[0].a_s, 1.0, 1e-12);
  EXPECT_NEAR(ops[0].G, 1.0, 1e-12);
}

TEST(SteadyState, NoDriveMeansNoDisplacement) {
  auto p = unit_cavity(0.0);
  p.input_power = 0.0;
  const auto ops = sc::solve_steady_state(p);
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(*ops[0].q_s, 0.0);
  EXPECT_EQ(ops[0].G, 0.0);
  EXPECT_EQ(ops[0].delta, p.delta0);
}

TEST(SteadyState, BistableWindowYieldsThreeRootsAndLowestIsPrincipal) {
  // d = Delta0 / kappa = 3 > sqrt(3); u^3 - 6u^2 + 10u = P has three real roots
  // for P in (2.91, 5.09), and here P = eps^2 = 5
  auto p = unit_cavity(std::sqrt(5.0));
  p.delta0 = 3.0;
  const auto ops = sc::solve_steady_state(p);
  ASSERT_EQ(ops.size(), 3u);
  EXPECT_TRUE(ops[0].principal);
  EXPECT_FALSE(ops[1].principal);
  EXPECT_FALSE(ops[2].principal);
  for (const auto& op : ops) EXPECT_LT(steady_residual(p, op), 1e-12);
  EXPECT_LT(*ops[0].q_s, *ops[1].q_s);
  EXPECT_LT(*ops[1].q_s, *ops[2].q_s);
}

TEST(SteadyState, EveryRootSatisfiesTheBalanceEquation) {
  Draws d(7);
  for (int i = 0; i < 300; ++i) {
    auto p = unit_cavity(d.log_uniform(0.01, 10.0));
    p.delta0 = d.uniform(-5.0, 5.0);
    p.kappa = d.log_uniform(0.1, 3.0);
    p.omega_m = d.log_uniform(0.2, 5.0);
    p.g_m = d.log_uniform(0.1, 2.0);
    const auto ops = sc::solve_steady_state(p);
    ASSERT_FALSE(ops.empty());
    int principals = 0;
    for (const auto& op : ops) {
      EXPECT_LT(steady_residual(p, op), 1e-9);
      EXPECT_NEAR(op.delta, p.delta0 - p.g_m * *op.q_s, 1e-12 * (1.0 + std::abs(p.delta0)));
      principals += op.principal ? 1 : 0;
    }
    EXPECT_EQ(principals, 1);
  }
}

TEST(SteadyState, DirectModeRecordsImpliedAmplitude) {
  const auto p = membrane();
  const auto op = sc::resolve_operating_point(p);
  EXPECT_EQ(op.G, *p.direct_G);
  EXPECT_EQ(op.delta, *p.direct_delta);
  EXPECT_NEAR(*op.a_s, *p.direct_G / p.g_m, 1e-9);
}

// ---- drift matrix and stability -----------------------------------------------

namespace {

// Hand expansion of det(lambda I - A):
//   ((lambda + kappa)^2 + Delta^2)(lambda^2 + gamma lambda + omega_m^2) - 2 Delta G^2 omega_m
std::array<double, 5> expanded_char_poly(const sc::SystemParams& p, double G, double delta) {
  const double k = p.kappa, g = p.gamma_m, w = p.omega_m;
  const double k2d2 = k * k + delta * delta;
  return {1.0, g + 2.0 * k, w * w + 2.0 * k * g + k2d2, 2.0 * k * w * w + g * k2d2,
          k2d2 * w * w - 2.0 * delta * G * G * w};
}

}  // namespace

TEST(Stability, CharacteristicPolynomialMatchesHandExpansion) {
  Draws d(3);
  for (int i = 0; i < 500; ++i) {
    const auto p = d.any_direct();
    const auto op = sc::resolve_operating_point(p);
    const auto ref = expanded_char_poly(p, op.G, op.delta);
    double scale = 0.0;
    for (std::size_t k = 0; k < 5; ++k) scale = std::max(scale, std::abs(ref[k]) / std::pow(p.omega_m, double(k)));
    for (std::size_t k = 0; k < 5; ++k) {
      const double s = std::pow(p.omega_m, double(k));
      EXPECT_NEAR(op.stability.char_poly[k] / s, ref[k] / s, 1e-11 * scale) << "coefficient " << k;
    }
    EXPECT_LT(op.stability.char_poly_imag_residue, 1e-10);
  }
}

TEST(Stability, EigenvaluesAreRootsOfTheCharacteristicPolynomial) {
  Draws d(5);
  for (int i = 0; i < 100; ++i) {
    const auto p = d.any_direct();
    const auto op = sc::resolve_operating_point(p);
    const auto c = expanded_char_poly(p, op.G, op.delta);
    for (const auto& lam : op.stability.eigenvalues) {
      const std::complex<double> z = lam / p.omega_m;
      std::complex<double> acc = 0.0, mag = 0.0;
      for (std::size_t k = 0; k < 5; ++k) {
        const double ck = c[k] / std::pow(p.omega_m, double(k));
        acc = acc * z + ck;
        mag = std::abs(mag) * std::abs(z) + std::abs(ck);
      }
      EXPECT_LT(std::abs(acc), 1e-9 * std::abs(mag));
    }
  }
}

TEST(Stability, NoCouplingIsStable) {
  const auto op = sc::resolve_operating_point(membrane(0.2, 0.0, 1.0));
  EXPECT_TRUE(op.stable);
  EXPECT_TRUE(op.stability.routh_stable);
  EXPECT_NEAR(op.stability.max_real_part, -0.5 * sc::hz_to_rad_s(150.0), 1e-6);
}

TEST(Stability, StaticThresholdOnTheRedSide) {
  // a4 < 0 once G^2 > (kappa^2 + Delta^2) omega_m / (2 Delta)
  const double k = 0.2, d = 1.0;
  const double G_crit = std::sqrt((k * k + d * d) / (2.0 * d));
  const auto below = sc::resolve_operating_point(membrane(k, 0.98 * G_crit, d));
  const auto above = sc::resolve_operating_point(membrane(k, 1.02 * G_crit, d));
  EXPECT_TRUE(below.stable);
  EXPECT_FALSE(above.stable);
  EXPECT_FALSE(above.stability.routh_stable);
  EXPECT_GT(above.stability.max_real_part, 0.0);
}

TEST(Stability, BlueDetuningAntidamps) {
  const auto op = sc::resolve_operating_point(membrane(0.2, 0.1, -1.0));
  EXPECT_FALSE(op.stable);
  EXPECT_FALSE(op.stability.routh_stable);
  EXPECT_FALSE(op.stability.diagnostics().empty());
}

TEST(Stability, RouthAgreesWithEigenvalues) {
  Draws d(17);
  int stable = 0, unstable = 0;
  for (int i = 0; i < 300; ++i) {
    const auto op = sc::resolve_operating_point(d.any_direct());
    if (op.stability.in_margin_band) continue;
    EXPECT_TRUE(op.stability.agree) << op.stability.diagnostics();
    (op.stable ? stable : unstable)++;
  }
  EXPECT_GT(stable, 30);
  EXPECT_GT(unstable, 30);
}
