#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "dlraman/liouville.hpp"

using namespace dlraman;
using std::numbers::pi;

namespace {

ValidatedConfig random_config(std::mt19937_64& rng, bool probes = true) {
  std::uniform_real_distribution<double> rabi(0.1, 10.0), det(-20.0, 20.0), phase(0.0, 2 * pi), two(-1.0, 1.0);
  BeamSet b;
  b.omega13 = rabi(rng);
  b.omega23 = rabi(rng);
  b.omega14 = probes ? rabi(rng) / 5 : 0.0;
  b.omega24 = probes ? rabi(rng) / 5 : 0.0;
  b.delta3 = det(rng);
  b.delta4 = det(rng);
  b.phi0 = phase(rng);
  b.two_photon = two(rng);
  return make_config(b);
}

CMatrix ket_bra(int n, int i, int j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("rotating-frame Hamiltonian entries") {
  BeamSet b;
  b.omega13 = 10;
  b.omega23 = 7;
  b.omega14 = 0.2;
  b.omega24 = 0.5;
  b.delta3 = 1;
  b.delta4 = -3;
  b.phi0 = pi / 2;
  b.two_photon = 0.4;
  const CMatrix h = build_hamiltonian_rwa(make_config(b));
  CHECK(h(0, 0).real() == doctest::Approx(0.2));
  CHECK(h(1, 1).real() == doctest::Approx(-0.2));
  CHECK(h(2, 2).real() == doctest::Approx(-1.0));
  CHECK(h(3, 3).real() == doctest::Approx(3.0));
  CHECK(h(0, 2).real() == doctest::Approx(-5.0));
  CHECK(h(1, 2).real() == doctest::Approx(-3.5));
  CHECK(h(0, 3).real() == doctest::Approx(-0.1));
  // -(O24/2) e^{-i pi/2} = +0.25 i
  CHECK(h(1, 3).real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(h(1, 3).imag() == doctest::Approx(0.25));
  CHECK((h - h.adjoint()).norm() == 0.0);
  CHECK(std::abs(h(2, 3)) == 0.0);
  CHECK(std::abs(h(0, 1)) == 0.0);
}

TEST_CASE("Liouvillian preserves trace and Hermiticity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    ValidatedConfig cfg = random_config(rng);
    const Liouvillian l = build_liouvillian(cfg, DecayModel{0.3, 0.8});
    CHECK(trace_preservation_error(l) < 1e-13);
    CMatrix a(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) a(r, c) = cd(u(rng), u(rng));
    const DensityMatrix rho(a * a.adjoint() / (a * a.adjoint()).trace());
    const CMatrix d = l.apply(rho).matrix();
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(d.trace()) < 1e-13);
  }
}

TEST_CASE("Liouvillian matches the explicit master equation") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const ValidatedConfig cfg = random_config(rng);
  const Liouvillian l = build_liouvillian(cfg);
  CMatrix a(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a(r, c) = cd(u(rng), u(rng));
  const CMatrix rho = a * a.adjoint();
  const CMatrix h = l.hamiltonian;
  CMatrix expect = cd(0, -1) * (h * rho - rho * h);
  for (const CollapseOp& c : l.collapse_ops) {
    const CMatrix cdc = c.op.adjoint() * c.op;
    expect += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * (cdc * rho + rho * cdc));
  }
  CHECK((l.apply(DensityMatrix(rho)).matrix() - expect).norm() < 1e-12);
}

TEST_CASE("decay rates and branching") {
  const ValidatedConfig cfg = make_config(BeamSet{});
  const Liouvillian l = build_liouvillian(cfg, DecayModel{0.25, 0.75});
  const DensityMatrix r3 = l.apply(DensityMatrix::basis_state(4, 2));
  CHECK(r3(2, 2).real() == doctest::Approx(-1.0));
  CHECK(r3(0, 0).real() == doctest::Approx(0.25));
  CHECK(r3(1, 1).real() == doctest::Approx(0.75));
  const DensityMatrix r4 = l.apply(DensityMatrix::basis_state(4, 3));
  CHECK(r4(3, 3).real() == doctest::Approx(-1.05));
  CHECK(r4(0, 0).real() == doctest::Approx(0.75 * 1.05));
}

TEST_CASE("ground decoherence damps rho12 at its rate") {
  BeamSet b;
  b.ground_decoherence = 0.02;
  const Liouvillian l = build_liouvillian(make_config(b));
  CVector v = CVector::Zero(16);
  v(4) = 1.0;  // |1><2| in column-stacked order
  const CVector d = l.apply(v);
  CHECK(d(4).real() == doctest::Approx(-0.02));
}

TEST_CASE("driven two-level atom: closed-form steady state") {
  // H = -delta |e><e| + (Omega/2)(|g><e| + |e><g|), decay |g><e| at gamma
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double om = u(rng), de = u(rng) - 2.5, ga = u(rng);
    CMatrix h = CMatrix::Zero(2, 2);
    h(1, 1) = -de;
    h(0, 1) = h(1, 0) = 0.5 * om;
    const Liouvillian l = lindbladian(h, {{ket_bra(2, 0, 1), ga}});
    const DensityMatrix rho = steady_state(l);
    const double pe = 0.25 * om * om / (de * de + 0.25 * ga * ga + 0.5 * om * om);
    CHECK(rho(1, 1).real() == doctest::Approx(pe).epsilon(1e-12));
    // from d rho_ge/dt = 0
    const cd expect_ge = cd(0.5 * om) * (1.0 - 2.0 * pe) / cd(de, -0.5 * ga);
    CHECK(std::abs(rho(0, 1) - expect_ge) < 1e-12);
    CHECK(steady_state_residual(l, rho) < 1e-12);
  }
}

TEST_CASE("steady state: normalized, valid, unique") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const ValidatedConfig cfg = random_config(rng);
    const Liouvillian l = build_liouvillian(cfg);
    CHECK(kernel_dimension(l) == 1);
    const DensityMatrix rho = steady_state(l);
    CHECK(rho.check().ok);
    CHECK(steady_state_residual(l, rho) < 1e-10);
  }
}

TEST_CASE("steady state: degenerate kernel is reported") {
  // no fields: the whole ground block (populations and coherence) is stationary
  const Liouvillian l = build_liouvillian(make_config(BeamSet{}));
  CHECK(kernel_dimension(l) == 4);
  CHECK_THROWS_AS(steady_state(l), Error);
  try {
    steady_state(l);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSteadyState);
  }
}

TEST_CASE("pumps only, Delta = 0: population trapped in the dark state") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    ValidatedConfig cfg = random_config(rng, false);
    cfg = make_config(BeamSet{cfg.d13().rabi, cfg.d23().rabi, 0, 0, cfg.delta3(), 0, 0, 0});
    const DensityMatrix rho = exact_steady_state(cfg);
    const double o3 = cfg.omega3();
    Eigen::Vector4cd dark(cfg.d23().rabi / o3, -cfg.d13().rabi / o3, 0, 0);
    const double pd = (dark.adjoint() * rho.matrix() * dark)(0, 0).real();
    CHECK(pd >= 1.0 - 1e-9);
    CHECK(rho(2, 2).real() < 1e-10);
  }
}

TEST_CASE("matched Rabi ratios at Phi0 = 0: no excited population") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 8.0), d(-15.0, 15.0);
  for (int i = 0; i < 20; ++i) {
    const double o13 = u(rng), ratio = u(rng) / 4, o14 = u(rng) / 10;
    const ValidatedConfig cfg = make_config(BeamSet{o13, o13 * ratio, o14, o14 * ratio, d(rng), d(rng), 0.0, 0.0});
    const DensityMatrix rho = exact_steady_state(cfg);
    CHECK(rho(2, 2).real() + rho(3, 3).real() < 1e-10);
  }
}

TEST_CASE("pump-only block: bright-state eigenvalue at large detuning") {
  // The non-Hermitian pump block with level 3 at -delta3 - i/2 has a bright
  // eigenvalue (1/2) L3 (2 delta3 - i) at large delta3.
  for (double d3 : {50.0, 100.0, 200.0}) {
    const ValidatedConfig cfg = make_config(BeamSet{10, 7, 0, 0, d3, 0, 0, 0});
    const CMatrix h = build_hamiltonian_rwa(cfg);
    Eigen::Matrix3cd blk = h.topLeftCorner(3, 3);
    blk(2, 2) -= cd(0, 0.5);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(blk);
    const double o3sq = 149.0;
    const double l3 = o3sq / (1 + 4 * d3 * d3);
    const cd expect = 0.5 * l3 * cd(2 * d3, -1.0);
    double best = INFINITY;
    for (int k = 0; k < 3; ++k) best = std::min(best, std::abs(es.eigenvalues()(k) - expect));
    CHECK(best / std::abs(expect) < 1.5 * o3sq / (4 * d3 * d3 + 1));
  }
}

TEST_CASE("evolve matches the matrix exponential") {
  std::mt19937_64 rng(21);
  const ValidatedConfig cfg = random_config(rng);
  const Liouvillian l = build_liouvillian(cfg);
  const double dt = max_stable_step(l);
  const Trajectory tr = evolve(l, DensityMatrix::basis_state(4, 0), 2.0, dt);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(2.0));
  const CMatrix prop = (l.matrix * 2.0).exp();
  const CVector ref = prop * DensityMatrix::basis_state(4, 0).vec();
  CHECK((tr.states.back().vec() - ref).norm() < 1e-6);
  for (const DensityMatrix& s : tr.states) CHECK(s.check().ok);
}

TEST_CASE("evolve relaxes to the steady state") {
  const ValidatedConfig cfg = make_config(BeamSet{10, 7, 0.2, 0.5, 1, 5, pi / 4, 0});
  const Liouvillian l = build_liouvillian(cfg);
  EvolveOptions o;
  o.sample_stride = 1000;
  const Trajectory tr = evolve(l, DensityMatrix::basis_state(4, 0), 100.0, max_stable_step(l), o);
  const DensityMatrix ss = steady_state(l);
  CHECK((tr.states.back().matrix() - ss.matrix()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("evolve rejects an unstable step") {
  const Liouvillian l = build_liouvillian(make_config(BeamSet{10, 7, 0.2, 0.5, 1, 5, 0, 0}));
  const double lim = max_stable_step(l);
  CHECK(lim == doctest::Approx(0.05 / 10.0));
  try {
    evolve(l, DensityMatrix::basis_state(4, 0), 1.0, 2.0 * lim);
    FAIL("expected StepSizeTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepSizeTooLarge);
  }
}

TEST_CASE("state checks") {
  CHECK(DensityMatrix::basis_state(3, 1).check().ok);
  CMatrix m = CMatrix::Identity(2, 2) * 0.5;
  m(0, 1) = cd(0.1, 0.0);
  CHECK_FALSE(DensityMatrix(m).check().ok);  // not Hermitian
  m(1, 0) = cd(0.1, 0.0);
  CHECK(DensityMatrix(m).check().ok);
  m(0, 0) = 0.6;
  CHECK_FALSE(DensityMatrix(m).check().ok);  // trace 1.1
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  const StateCheck c = DensityMatrix(neg).check();
  CHECK_FALSE(c.ok);
  CHECK(c.min_eigenvalue == doctest::Approx(-0.2));
  const DensityMatrix p = DensityMatrix::pure(Eigen::Vector3cd(1, cd(0, 1), 0));
  CHECK(p.check().ok);
  CHECK(std::abs(p(0, 1) - cd(0, -0.5)) < 1e-15);
}

TEST_CASE("exact_coherences needs four levels") {
  CHECK_THROWS_AS(exact_coherences(DensityMatrix::basis_state(3, 0)), Error);
  const DensityMatrix rho = exact_steady_state(make_config(BeamSet{10, 7, 0.2, 0.5, 1, 5, pi / 4, 0}));
  const ExactCoherences c = exact_coherences(rho);
  CHECK(c.rho14 == rho(0, 3));
  CHECK(c.rho24 == rho(1, 3));
  CHECK(c.rho13 == rho(0, 2));
  CHECK(c.rho23 == rho(1, 2));
}

TEST_CASE("vec / from_vec are column-stacked inverses") {
  CMatrix m(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = cd(r, c);
  const DensityMatrix d(m);
  const CVector v = d.vec();
  CHECK(v(1) == m(1, 0));
  CHECK(v(3) == m(0, 1));
  CHECK(DensityMatrix::from_vec(v, 3).matrix() == m);
}
