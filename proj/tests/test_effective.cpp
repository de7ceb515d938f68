#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dlraman/effective.hpp"

using namespace dlraman;
using std::numbers::pi;

namespace {

ValidatedConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rabi(0.5, 10.0), det(-20.0, 20.0), phase(0.0, 2 * pi);
  BeamSet b;
  b.omega13 = rabi(rng);
  b.omega23 = rabi(rng);
  b.omega14 = rabi(rng) / 10;
  b.omega24 = rabi(rng) / 10;
  b.delta3 = det(rng);
  b.delta4 = det(rng);
  b.phi0 = phase(rng);
  return make_config(b);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no Error thrown");
  return ErrorCode::ConfigParse;
}

}  // namespace

TEST_CASE("dark/bright basis") {
  const DarkBrightBasis b = dark_bright(fig2_config(5.0, 0.0));
  CHECK(b.omega3_eff == doctest::Approx(12.2065556157337));
  CHECK(std::cos(b.theta3) == doctest::Approx(0.573462344363328));
  CHECK(std::sin(b.theta3) == doctest::Approx(10.0 / 12.2065556157337));
  CHECK(std::tan(b.theta4) == doctest::Approx(0.2 / 0.5));
  CHECK((b.transform * b.transform.adjoint() - Matrix2c::Identity()).norm() < 1e-15);
  // the dark state does not couple to |3>
  CHECK(std::abs(b.transform(0, 0) * 10.0 + b.transform(0, 1) * 7.0) < 1e-14);

  CHECK(code_of([] { dark_bright(make_config(BeamSet{0, 0, 1, 1, 0, 1, 0, 0})); }) == ErrorCode::ZeroPump);
}

TEST_CASE("pump-Lambda effective Hamiltonian") {
  const PumpEffective p = pump_effective(fig4_config(20.0, 0.0));
  CHECK(p.l3 == doctest::Approx(100.0 / 401.0).epsilon(1e-14));
  CHECK(p.hamiltonian(0, 0) == cd(0, 0));
  CHECK(p.hamiltonian(1, 1).real() == doctest::Approx(10.0 * 100.0 / 401.0));
  CHECK(p.hamiltonian(1, 1).imag() == doctest::Approx(-0.5 * 100.0 / 401.0));
}

TEST_CASE("probe couplings: frozen values") {
  const ProbeCouplings h = probe_couplings(fig2_config(5.0, 0.0));
  CHECK(h.h_d4.real() == doctest::Approx(0.294923491386855));
  CHECK(h.h_b4.real() == doctest::Approx(-0.450577556285472));
  CHECK(h.h_d4.imag() == doctest::Approx(0.0));

  // Phi0 = pi flips the Omega24 contribution
  const ProbeCouplings g = probe_couplings(fig2_config(5.0, pi));
  CHECK(g.h_d4.real() == doctest::Approx((-7 * 0.2 - 10 * 0.5) / 12.2065556157337));
  CHECK(g.h_b4.real() == doctest::Approx(-(10 * 0.2 - 7 * 0.5) / 12.2065556157337));
}

TEST_CASE("probe couplings equal twice the rotated Hamiltonian elements") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    const ValidatedConfig cfg = random_config(rng);
    const CMatrix h = build_hamiltonian_rwa(cfg);
    const Matrix2c t = dark_bright(cfg).transform;
    const Eigen::Vector2cd g4(h(0, 3), h(1, 3));
    const Eigen::Vector2cd x4 = t * g4;
    const ProbeCouplings p = probe_couplings(cfg);
    CHECK(std::abs(p.h_d4 - 2.0 * x4(0)) < 1e-13);
    CHECK(std::abs(p.h_b4 - 2.0 * x4(1)) < 1e-13);
  }
}

TEST_CASE("matched ratios at Phi0 = 0 decouple the dark state") {
  const ValidatedConfig cfg = make_config(BeamSet{6, 3, 0.4, 0.2, 2, 7, 0, 0});
  CHECK(std::abs(probe_couplings(cfg).h_d4) < 1e-15);
  const EffectiveSolution s = solve_effective(cfg);
  CHECK(s.rho2(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(s.coherences.rho14) < 1e-15);
  CHECK(std::abs(s.coherences.rho24) < 1e-15);
}

TEST_CASE("three-state Hamiltonian") {
  const ValidatedConfig cfg = fig2_config(5.0, pi / 4);
  const Matrix3c m = three_state_hamiltonian(cfg);
  const ProbeCouplings h = probe_couplings(cfg);
  const double l3 = 149.0 / 5.0;
  CHECK(m(0, 0) == cd(0, 0));
  CHECK(m(1, 1).real() == doctest::Approx(0.5 * l3 * 2.0));
  CHECK(m(1, 1).imag() == doctest::Approx(-0.5 * l3));
  CHECK(m(2, 2).real() == doctest::Approx(-5.0));
  CHECK(m(2, 2).imag() == doctest::Approx(-0.525));
  CHECK(std::abs(m(0, 2) - 0.5 * h.h_d4) < 1e-15);
  CHECK(std::abs(m(2, 1) - 0.5 * std::conj(h.h_b4)) < 1e-15);
  CHECK(m(0, 1) == cd(0, 0));
}

TEST_CASE("final two-level model eliminates |4> from the three-state model") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const ValidatedConfig cfg = random_config(rng);
    Matrix3c m = three_state_hamiltonian(cfg);
    m(2, 2) = -cfg.delta4();  // the reduction keeps only the probe detuning
    Matrix2c expect;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) expect(x, y) = m(x, y) - m(x, 2) * m(2, y) / m(2, 2);
    const EffectiveTwoLevel e = final_two_level(cfg);
    CHECK((e.hamiltonian2 - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(e.gamma_eq == doctest::Approx(e.l3));
    CHECK(std::abs(e.omega_eq - cd(0, -2) * e.hamiltonian2(0, 1)) < 1e-15);
    CHECK(e.omega2 == doctest::Approx((e.hamiltonian2(1, 1) - e.hamiltonian2(0, 0)).real()));
  }
}

TEST_CASE("equal-beams Hamiltonian equals the general one up to a shift") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 10.0), d(-20.0, 20.0), ph(0.0, 2 * pi);
  for (int i = 0; i < 50; ++i) {
    const double o3 = u(rng), d3 = d(rng), o4 = u(rng) / 10, d4 = d(rng), phi = ph(rng);
    const EffectiveTwoLevel e = final_two_level(equal_beams(o3, d3, o4, d4, phi));
    const Matrix2c shifted = e.hamiltonian2 - e.hamiltonian2(0, 0) * Matrix2c::Identity();
    const Matrix2c eb = equal_beams_hamiltonian(o3, d3, o4, d4, phi);
    CHECK((shifted - eb).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("analytic equal-beams steady state matches the numeric one") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.5, 10.0), d(-20.0, 20.0), ph(0.0, 2 * pi);
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const double o3 = u(rng), d3 = d(rng), o4 = u(rng) / 10, d4 = d(rng), phi = ph(rng);
    const DensityMatrix num = two_level_steady_state(final_two_level(equal_beams(o3, d3, o4, d4, phi)));
    const AnalyticTwoLevel a = analytic_equal_beams_state(o3, d3, o4, d4, phi);
    CHECK(std::abs(num(1, 1).real() - a.rho_bb) < 1e-10);
    CHECK(std::abs(num(0, 1) - a.rho_db) < 1e-10);
    CHECK(num.check().ok);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("analytic steady state: frozen value") {
  // Omega3 = 10, delta3 = 10, Omega4 = 1, delta4 = 20, Phi0 = pi/2:
  // rho_BB = 1 / (2 + 16 L3 * 100 * 400), L3 = 100/401
  const AnalyticTwoLevel a = analytic_equal_beams_state(10, 10, 1, 20, pi / 2);
  CHECK(a.rho_bb == doctest::Approx(6.26554648487061e-6).epsilon(1e-12));
  // Phi0 = 0: the bright state is empty
  const AnalyticTwoLevel z = analytic_equal_beams_state(10, 10, 1, 20, 0.0);
  CHECK(z.rho_bb == 0.0);
  CHECK(std::abs(z.rho_db) < 1e-18);
}

TEST_CASE("two-level steady state errors") {
  const EffectiveTwoLevel e = final_two_level(fig4_config(20.0, 1.0));
  CHECK(code_of([&] { two_level_steady_state(e, 0.0); }) == ErrorCode::NoRelaxation);
  CHECK(code_of([] { final_two_level(fig4_config(0.0, 1.0)); }) == ErrorCode::ZeroProbeDetuning);
  CHECK(code_of([] { final_two_level(make_config(BeamSet{5, 5, 1, 1, 1, 5, 0, 0.3})); }) ==
        ErrorCode::NonZeroTwoPhotonDetuning);
  CHECK(code_of([] { final_two_level(make_config(BeamSet{0, 0, 1, 1, 1, 5, 0, 0})); }) == ErrorCode::ZeroPump);
}

TEST_CASE("adiabatic coefficients") {
  const ValidatedConfig cfg = fig2_config(5.0, pi / 4);
  const AdiabaticCoefficients a = adiabatic_coefficients(cfg);
  const ProbeCouplings h = probe_couplings(cfg);
  CHECK(std::abs(a.a_d - std::conj(h.h_d4) / cd(10.0, 1.05)) < 1e-15);
  CHECK(std::abs(a.a_b - std::conj(h.h_b4) / cd(10.0, 1.05)) < 1e-15);
}

TEST_CASE("reconstruction follows the adiabatic amplitudes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const ValidatedConfig cfg = random_config(rng);
    const EffectiveSolution s = solve_effective(cfg);
    const Matrix2c t = dark_bright(cfg).transform;
    // ground block back in the |1>, |2> basis
    const Matrix2c g = t.transpose() * s.rho2.matrix() * t;
    CHECK(std::abs(s.coherences.rho11 - g(0, 0)) < 1e-14);
    CHECK(std::abs(s.coherences.rho22 - g(1, 1)) < 1e-14);
    CHECK(std::abs(s.coherences.rho12 - g(0, 1)) < 1e-14);
    CHECK(std::abs(s.coherences.rho11 + s.coherences.rho22 - 1.0) < 1e-12);
    // rho_g4 = sum_X rho_gX conj(A_X)
    const AdiabaticCoefficients a = adiabatic_coefficients(cfg);
    const Matrix2c gx = g * t.transpose();
    const cd p14 = gx(0, 0) * std::conj(a.a_d) + gx(0, 1) * std::conj(a.a_b);
    const cd p24 = gx(1, 0) * std::conj(a.a_d) + gx(1, 1) * std::conj(a.a_b);
    CHECK(std::abs(s.coherences.rho14 - p14) < 1e-14);
    CHECK(std::abs(s.coherences.rho24 - p24) < 1e-14);
  }
}

TEST_CASE("effective model tracks the exact solver far from probe resonance") {
  for (double phi : {0.0, pi / 4}) {
    for (double d4 : {-30.0, 20.0, 40.0}) {
      const ValidatedConfig cfg = fig2_config(d4, phi);
      const ExactCoherences ex = exact_coherences(exact_steady_state(cfg));
      const EffectiveSolution ef = solve_effective(cfg);
      CHECK(std::abs(ex.rho14 - ef.coherences.rho14) < 0.02 * std::abs(ex.rho14));
      CHECK(std::abs(ex.rho24 - ef.coherences.rho24) < 0.02 * std::abs(ex.rho24));
    }
  }
}

TEST_CASE("effective quantities are 2 pi periodic in Phi0") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const ValidatedConfig a = random_config(rng);
    const ValidatedConfig b = with_closed_loop_phase(a, closed_loop_phase(a) + 2 * pi);
    const EffectiveTwoLevel ea = final_two_level(a), eb = final_two_level(b);
    CHECK((ea.hamiltonian2 - eb.hamiltonian2).cwiseAbs().maxCoeff() < 1e-12);
    const EffectiveSolution sa = solve_effective(a), sb = solve_effective(b);
    CHECK(std::abs(sa.coherences.rho14 - sb.coherences.rho14) < 1e-12);
    CHECK(std::abs(sa.coherences.rho24 - sb.coherences.rho24) < 1e-12);
  }
}
