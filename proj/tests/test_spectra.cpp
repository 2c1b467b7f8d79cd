#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "sqzcool/quadrature.hpp"
#include "sqzcool/spectra.hpp"
#include "support.hpp"

namespace sc = sqzcool;
using cd = std::complex<double>;
using sc::testing::Draws;
using sc::testing::kBathT;
using sc::testing::membrane;

namespace {

// S_q straight from the input-noise correlators, with complex arithmetic:
//   <a a^dag> = N + 1, <a^dag a> = N, <a a> = M e^{-i phi}, <a^dag a^dag> = M e^{i phi}
double spectrum_from_correlators(double w, const sc::OperatingPoint& op, const sc::SystemParams& p,
                                 const sc::SqueezeField& sq, double T) {
  const cd i{0.0, 1.0};
  const double k = p.kappa, d = op.delta, G = op.G, wm = p.omega_m;
  const cd dfull = 2.0 * d * G * G * wm + (w + i * k - d) * (w + i * k + d) * (wm * wm - w * w - i * w * p.gamma_m);
  const cd ds = dfull / (d * d + (k - i * w) * (k - i * w));
  const double hbar = sc::PhysicalConstants::hbar, kb = sc::PhysicalConstants::k_B;
  const double xi = w == 0.0 ? p.gamma_m / wm * 2.0 * kb * T / hbar
                             : p.gamma_m / wm * w * (1.0 / std::tanh(hbar * w / (2.0 * kb * T)) + 1.0);
  const cd corr = 1.0 / ((w + i * k - d) * (w - i * k - d)) * (sq.n_stat + 1.0) +
                  1.0 / ((w + i * k + d) * (w - i * k + d)) * sq.n_stat +
                  1.0 / ((w + i * k + d) * (w - i * k - d)) * sq.m_stat * std::exp(i * sq.phi) +
                  1.0 / ((w + i * k - d) * (w - i * k + d)) * sq.m_stat * std::exp(-i * sq.phi);
  const cd total = wm * wm / std::norm(ds) * (xi + G * G * 2.0 * k * corr);
  return total.real();
}

}  // namespace

TEST(Spectra, ComponentsMatchTheCorrelatorForm) {
  Draws d(21);
  for (int i = 0; i < 400; ++i) {
    const auto p = d.stable_direct();
    const auto op = sc::resolve_operating_point(p);
    const auto sq = sc::derive_photon_stats(d.uniform(0.0, 2.5), d.uniform(0.0, sc::two_pi));
    const double w = d.uniform(-3.0, 3.0) * p.omega_m;
    const double ref = spectrum_from_correlators(w, op, p, sq, kBathT);
    const auto s = sc::spectrum_at(w, op, p, sq, kBathT);
    const double scale = s.s_th + s.s_ba + sq.n_stat * s.s_n + sq.m_stat * std::hypot(s.s_mc, s.s_ms);
    EXPECT_NEAR(s.s_q_total, ref, 1e-9 * scale) << "omega/omega_m = " << w / p.omega_m;
  }
}

TEST(Spectra, LorentzianProductIdentity) {
  // [(w - D)^2 + k^2][(w + D)^2 + k^2] = (w^2 - D^2 + k^2)^2 + 4 k^2 D^2
  Draws d(22);
  for (int i = 0; i < 1000; ++i) {
    const double w = d.uniform(-5, 5), D = d.uniform(-3, 3), k = d.log_uniform(0.01, 3);
    const double lhs = sc::lorentz_minus(w, D, k) * sc::lorentz_plus(w, D, k);
    const double x = w * w - D * D + k * k;
    EXPECT_NEAR(lhs, x * x + 4 * k * k * D * D, 1e-12 * lhs);
  }
}

TEST(Spectra, ReducedDenominatorAgreesWithEffectiveResponse) {
  Draws d(23);
  for (int i = 0; i < 2000; ++i) {
    const auto p = d.any_direct();
    const auto op = sc::direct_operating_point(*p.direct_G, *p.direct_delta, p);
    const double w = d.uniform(-3.0, 3.0) * p.omega_m;
    const auto ds = sc::reduced_denominator(w, op, p);
    const auto eff = sc::effective_freq_damping(w, op, p);
    // d_s = -(omega_eff^2 - omega^2 - i omega gamma_eff)
    const cd expected = -cd(eff.omega_eff_sq - w * w, -w * eff.gamma_eff);
    EXPECT_NEAR(ds.real(), expected.real(), 1e-9 * std::abs(expected) + 1e-12 * p.omega_m * p.omega_m);
    EXPECT_NEAR(ds.imag(), expected.imag(), 1e-9 * std::abs(expected) + 1e-12 * p.omega_m * p.omega_m);
  }
}

TEST(Spectra, ThermalBracketIsSmoothThroughZero) {
  const double T = kBathT;
  const double kt = sc::PhysicalConstants::k_B * T / sc::PhysicalConstants::hbar;
  EXPECT_NEAR(sc::thermal_bracket(0.0, T), 2.0 * kt, 1e-12 * kt);
  for (double x : {1e-5, 1e-4, 2e-4, 1e-2, 1.0, 30.0, -1e-5, -2e-4, -1.0, -30.0}) {
    const double w = 2.0 * kt * x;
    const double ref = w * (1.0 / std::tanh(x) + 1.0);
    EXPECT_NEAR(sc::thermal_bracket(w, T), ref, 1e-12 * std::max(std::abs(ref), kt)) << x;
  }
  // detailed balance: S(-w) = e^{-hbar w / kT} S(w)
  const double w = 3.0 * kt;
  EXPECT_NEAR(sc::thermal_bracket(-w, T), std::exp(-2.0 * w / (2.0 * kt)) * sc::thermal_bracket(w, T),
              1e-12 * sc::thermal_bracket(w, T));
}

TEST(Spectra, ComponentsAreNonnegativeWhereThePhysicsSaysSo) {
  Draws d(24);
  for (int i = 0; i < 200; ++i) {
    const auto p = d.stable_direct();
    const auto op = sc::resolve_operating_point(p);
    const auto sq = sc::derive_photon_stats(d.uniform(0.0, 3.0), d.uniform(0.0, sc::two_pi));
    for (int j = 0; j < 50; ++j) {
      const auto s = sc::spectrum_at(d.uniform(-4.0, 4.0) * p.omega_m, op, p, sq, kBathT);
      EXPECT_GE(s.s_th, 0.0);
      EXPECT_GE(s.s_ba, 0.0);
      EXPECT_GE(s.s_n, 0.0);
      // |(s_mc, s_ms)| = chi 4 G^2 kappa / sqrt(L- L+) <= s_n by AM-GM
      EXPECT_LE(std::hypot(s.s_mc, s.s_ms), s.s_n * (1.0 + 1e-12));
    }
  }
}

TEST(Spectra, UncoupledSpectrumPeaksAtTheMechanicalFrequency) {
  const auto p = membrane(0.2, 0.0, 1.0);
  const auto op = sc::resolve_operating_point(p);
  const auto at = [&](double w) { return sc::spectrum_at(w, op, p, {}, kBathT).s_q_total; };
  const double w0 = p.omega_m;
  EXPECT_GT(at(w0), at(w0 * (1 + 1e-6)));
  EXPECT_GT(at(w0), at(w0 * (1 - 1e-6)));
  EXPECT_EQ(sc::spectrum_at(w0, op, p, {}, kBathT).s_ba, 0.0);
}

TEST(Spectra, MomentumSpectrumScales) {
  const auto p = membrane();
  const auto op = sc::resolve_operating_point(p);
  const auto sq = sc::derive_photon_stats(0.7, 1.0);
  const double w = 0.83 * p.omega_m;
  EXPECT_DOUBLE_EQ(sc::momentum_spectrum_at(w, op, p, sq, kBathT),
                   0.83 * 0.83 * sc::spectrum_at(w, op, p, sq, kBathT).s_q_total);
}

// ---- quadrature ----------------------------------------------------------------

TEST(Quadrature, LorentzianOverTheRealLine) {
  const double g = 1e-4, w0 = 3.0;
  auto f = [&](double x) { return g / ((x - w0) * (x - w0) + g * g); };
  const auto r = sc::quad::integrate_real_line(f, {0.0, w0 - 10 * g, w0, w0 + 10 * g}, {1e-11, 0.0, 50000});
  EXPECT_NEAR(r.value, std::numbers::pi, 1e-9);
  EXPECT_LE(std::abs(r.value - std::numbers::pi), std::max(r.error, 1e-12));
}

TEST(Quadrature, GaussianAndOneOverXSquaredTail) {
  auto gauss = [](double x) { return std::exp(-x * x); };
  EXPECT_NEAR(sc::quad::integrate_real_line(gauss, {-1.0, 1.0}).value, std::sqrt(std::numbers::pi), 1e-10);
  auto tail = [](double x) { return 1.0 / (1.0 + x * x); };
  EXPECT_NEAR(sc::quad::integrate_real_line(tail, {-1.0, 0.0, 1.0}, {1e-12, 0.0, 50000}).value,
              std::numbers::pi, 1e-11);
}

TEST(Quadrature, SignChangingIntegrandUsesAbsoluteMass) {
  // integral of x e^{-x^2} (x - 1) = sqrt(pi)/2
  auto f = [](double x) { return x * (x - 1.0) * std::exp(-x * x); };
  const auto r = sc::quad::integrate_real_line(f, {-2.0, 0.0, 2.0}, {1e-12, 0.0, 50000});
  EXPECT_NEAR(r.value, 0.5 * std::sqrt(std::numbers::pi), 1e-11);
  EXPECT_GT(r.l1, r.value);
}

TEST(Quadrature, FiniteInterval) {
  auto f = [](double x) { return std::sqrt(x); };
  const auto r = sc::quad::integrate_interval(f, 0.0, 1.0, {}, {1e-10, 0.0, 50000});
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-9);
}

TEST(Quadrature, BudgetExhaustionReportsBestEstimate) {
  auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x)) * std::exp(-x * x); };
  try {
    sc::quad::integrate_real_line(f, {-1.0, 0.5, 1.0}, {1e-14, 0.0, 20});
    FAIL() << "expected non-convergence";
  } catch (const sc::ComputationError& e) {
    EXPECT_GT(e.best_estimate(), 0.0);
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(Quadrature, RepeatedRunsAreBitIdentical) {
  auto f = [](double x) { return std::cos(3 * x) / (1 + x * x * x * x); };
  const auto a = sc::quad::integrate_real_line(f, {-1, 0, 1});
  const auto b = sc::quad::integrate_real_line(f, {-1, 0, 1});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
}

TEST(Quadrature, CompensatedSumRecoversSmallTerms) {
  sc::quad::CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-17);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-14, 1e-20);
}
