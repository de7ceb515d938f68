#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dlraman/core.hpp"

namespace dlraman {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Tolerances every physical state must satisfy.
struct StateTolerance {
  double hermitian = 1e-12;
  double trace = 1e-10;
  double positivity = -1e-9;  // smallest eigenvalue must be >= this
};

struct StateCheck {
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double trace_error = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;
  bool ok = false;
};

/// dim x dim density matrix, dim in {2, 3, 4}. Stores whatever it is given;
/// physicality is queried with check().
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix basis_state(int dim, int k);
  static DensityMatrix pure(const CVector& amplitudes);

  int dim() const { return static_cast<int>(m_.rows()); }
  cd operator()(int i, int j) const { return m_(i, j); }
  const CMatrix& matrix() const { return m_; }

  /// Column-stacked vec(rho).
  CVector vec() const;
  static DensityMatrix from_vec(const CVector& v, int dim);

  StateCheck check(const StateTolerance& tol = {}) const;

 private:
  CMatrix m_;
};

struct CollapseOp {
  CMatrix op;
  double rate = 0.0;
};

/// Decay branching of the excited states: fraction of |3> (|4>) decay that
/// lands in |1>; the rest goes to |2>.
struct DecayModel {
  double branch3 = 0.5;
  double branch4 = 0.5;
};

/// Lindblad superoperator acting on column-stacked density matrices.
struct Liouvillian {
  int dim = 0;
  CMatrix matrix;       // dim^2 x dim^2
  CMatrix hamiltonian;  // dim x dim
  std::vector<CollapseOp> collapse_ops;

  CVector apply(const CVector& vec_rho) const { return matrix * vec_rho; }
  DensityMatrix apply(const DensityMatrix& rho) const;
};

/// Generic L(rho) = -i[H, rho] + sum_k g_k (C rho C^+ - {C^+C, rho}/2).
Liouvillian lindbladian(const CMatrix& hamiltonian, std::vector<CollapseOp> collapse_ops);

/// Rotating-frame Hamiltonian on {|1~>,|2~>,|3~>,|4~>}, hbar = 1, units of Gamma3:
///   diag(Delta/2, -Delta/2, -delta3, -delta4),
///   H13 = -Omega13/2, H23 = -Omega23/2, H14 = -Omega14/2,
///   H24 = -(Omega24/2) exp(-i Phi0),
/// zero on 1-2 and 3-4. The two-photon detuning is split symmetrically.
CMatrix build_hamiltonian_rwa(const ValidatedConfig& cfg);

/// Four-level Lindbladian: jumps |1><3|, |2><3| (rates b3 G3, (1-b3) G3),
/// |1><4|, |2><4| (b4 G4, (1-b4) G4) and, if nonzero, ground dephasing
/// (|1><1| - |2><2|) at rate gamma_g/2 so rho12 decays at gamma_g.
Liouvillian build_liouvillian(const ValidatedConfig& cfg, const DecayModel& decay = {});

/// Norm of tr(L(.)) i.e. || id^T L ||, zero for a trace-preserving generator.
double trace_preservation_error(const Liouvillian& liou);

/// Unique steady state via bordered dense LU (one row replaced by the trace
/// constraint). Throws DegenerateSteadyState if the kernel of L has
/// dimension > 1.
DensityMatrix steady_state(const Liouvillian& liou);

/// || L(rho) ||_2 on vec(rho).
double steady_state_residual(const Liouvillian& liou, const DensityMatrix& rho);

/// Dimension of the numerical kernel of L (relative singular value cutoff).
int kernel_dimension(const Liouvillian& liou, double rel_tol = 1e-11);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

struct EvolveOptions {
  int sample_stride = 1;  // keep every n-th step (first and last always kept)
  StateTolerance tolerance{};
};

/// Largest step allowed by the 0.05 / (fastest scale) rule.
double max_stable_step(const Liouvillian& liou);

/// Fixed-step classical RK4 on d rho/dt = L(rho). The step is shrunk so an
/// integer number of steps lands on t_final. Throws StepSizeTooLarge if dt
/// exceeds max_stable_step or a sample violates the state invariants.
Trajectory evolve(const Liouvillian& liou, const DensityMatrix& rho0, double t_final, double dt,
                  const EvolveOptions& opts = {});

struct ExactCoherences {
  cd rho14, rho24, rho13, rho23;
};

/// <m~|rho|n~> in the rotating frame; requires dim == 4.
ExactCoherences exact_coherences(const DensityMatrix& rho);

/// Convenience: steady state of build_liouvillian(cfg, decay).
DensityMatrix exact_steady_state(const ValidatedConfig& cfg, const DecayModel& decay = {});

}  // namespace dlraman
