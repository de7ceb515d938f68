#include "dlraman/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace dlraman {

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const CVector& amplitudes) {
  const CVector psi = amplitudes / amplitudes.norm();
  return DensityMatrix(psi * psi.adjoint());
}

CVector DensityMatrix::vec() const { return Eigen::Map<const CVector>(m_.data(), m_.size()); }

DensityMatrix DensityMatrix::from_vec(const CVector& v, int dim) {
  return DensityMatrix(Eigen::Map<const CMatrix>(v.data(), dim, dim));
}

StateCheck DensityMatrix::check(const StateTolerance& tol) const {
  StateCheck c;
  c.hermiticity_error = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(m_.trace() - cd(1.0, 0.0));
  const CMatrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  c.ok = c.hermiticity_error <= tol.hermitian && c.trace_error <= tol.trace &&
         c.min_eigenvalue >= tol.positivity;
  return c;
}

DensityMatrix Liouvillian::apply(const DensityMatrix& rho) const {
  return DensityMatrix::from_vec(matrix * rho.vec(), dim);
}

Liouvillian lindbladian(const CMatrix& hamiltonian, std::vector<CollapseOp> collapse_ops) {
  using Eigen::kroneckerProduct;
  const auto n = hamiltonian.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const cd i(0.0, 1.0);

  // vec(A X B) = (B^T (x) A) vec(X)
  CMatrix L = -i * (CMatrix(kroneckerProduct(id, hamiltonian)) -
                    CMatrix(kroneckerProduct(hamiltonian.transpose(), id)));
  for (const CollapseOp& c : collapse_ops) {
    if (c.rate == 0.0) continue;
    const CMatrix cdc = c.op.adjoint() * c.op;
    L += c.rate * (CMatrix(kroneckerProduct(c.op.conjugate(), c.op)) -
                   0.5 * CMatrix(kroneckerProduct(id, cdc)) -
                   0.5 * CMatrix(kroneckerProduct(cdc.transpose(), id)));
  }
  Liouvillian out;
  out.dim = static_cast<int>(n);
  out.matrix = std::move(L);
  out.hamiltonian = hamiltonian;
  out.collapse_ops = std::move(collapse_ops);
  return out;
}

CMatrix build_hamiltonian_rwa(const ValidatedConfig& cfg) {
  const double delta = cfg.two_photon();
  const double phi0 = closed_loop_phase(cfg);
  CMatrix h = CMatrix::Zero(4, 4);
  h(0, 0) = 0.5 * delta;
  h(1, 1) = -0.5 * delta;
  h(2, 2) = -cfg.delta3();
  h(3, 3) = -cfg.delta4();
  h(0, 2) = h(2, 0) = -0.5 * cfg.d13().rabi;
  h(1, 2) = h(2, 1) = -0.5 * cfg.d23().rabi;
  h(0, 3) = h(3, 0) = -0.5 * cfg.d14().rabi;
  h(1, 3) = -0.5 * cfg.d24().rabi * std::polar(1.0, -phi0);
  h(3, 1) = std::conj(h(1, 3));
  return h;
}

namespace {

CMatrix ket_bra(int dim, int i, int j) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

Liouvillian build_liouvillian(const ValidatedConfig& cfg, const DecayModel& decay) {
  const double g3 = cfg.gamma3();
  const double g4 = cfg.gamma4();
  std::vector<CollapseOp> ops{
      {ket_bra(4, 0, 2), decay.branch3 * g3},
      {ket_bra(4, 1, 2), (1.0 - decay.branch3) * g3},
      {ket_bra(4, 0, 3), decay.branch4 * g4},
      {ket_bra(4, 1, 3), (1.0 - decay.branch4) * g4},
  };
  if (cfg.ground_decoherence() > 0.0) {
    ops.push_back({ket_bra(4, 0, 0) - ket_bra(4, 1, 1), 0.5 * cfg.ground_decoherence()});
  }
  return lindbladian(build_hamiltonian_rwa(cfg), std::move(ops));
}

double trace_preservation_error(const Liouvillian& liou) {
  CVector id = CVector::Zero(liou.dim * liou.dim);
  for (int k = 0; k < liou.dim; ++k) id(k * liou.dim + k) = 1.0;
  return (id.transpose() * liou.matrix).norm();
}

int kernel_dimension(const Liouvillian& liou, double rel_tol) {
  Eigen::JacobiSVD<CMatrix> svd(liou.matrix);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return static_cast<int>(s.size());
  return static_cast<int>((s.array() <= rel_tol * s(0)).count());
}

DensityMatrix steady_state(const Liouvillian& liou) {
  const int n = liou.dim;
  const int nn = n * n;
  const int kdim = kernel_dimension(liou);
  if (kdim > 1) {
    std::ostringstream os;
    os << "kernel of the Liouvillian has dimension " << kdim;
    throw Error(ErrorCode::DegenerateSteadyState, os.str());
  }
  CMatrix a = liou.matrix;
  a.row(0).setZero();
  for (int k = 0; k < n; ++k) a(0, k * n + k) = 1.0;
  CVector b = CVector::Zero(nn);
  b(0) = 1.0;
  const CVector x = a.partialPivLu().solve(b);
  CMatrix rho = Eigen::Map<const CMatrix>(x.data(), n, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

double steady_state_residual(const Liouvillian& liou, const DensityMatrix& rho) {
  return liou.apply(rho.vec()).norm();
}

double max_stable_step(const Liouvillian& liou) {
  const CMatrix& h = liou.hamiltonian;
  double scale = 0.0;
  for (int i = 0; i < h.rows(); ++i) {
    for (int j = 0; j < h.cols(); ++j) {
      scale = std::max(scale, (i == j ? 1.0 : 2.0) * std::abs(h(i, j)));
    }
  }
  // loss rate of each level: diagonal of sum_k g_k C_k^+ C_k
  CMatrix loss = CMatrix::Zero(h.rows(), h.cols());
  for (const CollapseOp& c : liou.collapse_ops) loss += c.rate * c.op.adjoint() * c.op;
  for (int i = 0; i < loss.rows(); ++i) scale = std::max(scale, std::abs(loss(i, i)));
  return scale > 0.0 ? 0.05 / scale : std::numeric_limits<double>::infinity();
}

Trajectory evolve(const Liouvillian& liou, const DensityMatrix& rho0, double t_final, double dt,
                  const EvolveOptions& opts) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) {
    throw Error(ErrorCode::StepSizeTooLarge, "dt must be > 0 and t_final >= 0");
  }
  const double limit = max_stable_step(liou);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds 0.05 / fastest scale = " << limit;
    throw Error(ErrorCode::StepSizeTooLarge, os.str());
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final > 0.0 ? t_final / static_cast<double>(steps) : 0.0;

  // For the autonomous linear system one RK4 step is exactly the degree-4
  // Taylor polynomial of exp(h L); build it once.
  const auto nn = liou.matrix.rows();
  const CMatrix hl = h * liou.matrix;
  CMatrix prop = CMatrix::Identity(nn, nn);
  CMatrix term = CMatrix::Identity(nn, nn);
  for (int k = 1; k <= 4; ++k) {
    term = (term * hl / static_cast<double>(k)).eval();
    prop += term;
  }

  const int stride = std::max(1, opts.sample_stride);
  Trajectory traj;
  auto record = [&](double t, const CVector& v) {
    DensityMatrix rho = DensityMatrix::from_vec(v, liou.dim);
    const StateCheck c = rho.check(opts.tolerance);
    if (!c.ok) {
      std::ostringstream os;
      os << "state invariant violated at t = " << t << " (hermiticity " << c.hermiticity_error
         << ", trace " << c.trace_error << ", min eigenvalue " << c.min_eigenvalue << ")";
      throw Error(ErrorCode::StepSizeTooLarge, os.str());
    }
    traj.times.push_back(t);
    traj.states.push_back(std::move(rho));
  };

  CVector v = rho0.vec();
  record(0.0, v);
  if (t_final == 0.0) return traj;
  for (long s = 1; s <= steps; ++s) {
    v = prop * v;
    if (s % stride == 0 || s == steps) record(h * static_cast<double>(s), v);
  }
  return traj;
}

ExactCoherences exact_coherences(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::InvalidLevels, "exact_coherences needs a 4-level state");
  return {rho(0, 3), rho(1, 3), rho(0, 2), rho(1, 2)};
}

DensityMatrix exact_steady_state(const ValidatedConfig& cfg, const DecayModel& decay) {
  return steady_state(build_liouvillian(cfg, decay));
}

}  // namespace dlraman
