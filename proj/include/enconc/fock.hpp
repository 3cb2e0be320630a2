#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace enconc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Parameter left the regime where the truncated simulation is trustworthy.
struct guard_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity is numerically meaningless (PSD violation, zero norm, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Truncated Fock space: each mode keeps levels 0..cutoff, so a k-mode object
// lives on (cutoff+1)^k dimensions.  The flat index of (n_1,...,n_k) is
// sum_i n_i * (cutoff+1)^(k-i), i.e. mode 1 is the most significant digit.
// ---------------------------------------------------------------------------

struct StateVector {
  Vec amp;
  int modes = 1;
  int cutoff = 0;

  int dim() const { return static_cast<int>(amp.size()); }
  double norm_squared() const { return amp.squaredNorm(); }
  /// Throws numeric_error on (numerically) zero norm; never normalizes silently.
  StateVector normalized() const;
};

struct FockOperator {
  Mat m;
  int modes = 1;
  int cutoff = 0;

  int dim() const { return static_cast<int>(m.rows()); }
  FockOperator dagger() const { return {m.adjoint(), modes, cutoff}; }
};

struct DensityMatrix {
  Mat m;
  int modes = 1;
  int cutoff = 0;
  bool normalized = false;

  int dim() const { return static_cast<int>(m.rows()); }
  double trace_real() const { return m.trace().real(); }
};

inline int fock_dim(int modes, int cutoff) {
  int d = 1;
  for (int i = 0; i < modes; ++i) d *= cutoff + 1;
  return d;
}

/// Stride of `mode` (1-based) in the flat index.
inline int mode_stride(int mode, int modes, int cutoff) {
  int s = 1;
  for (int i = 0; i < modes - mode; ++i) s *= cutoff + 1;
  return s;
}

/// Truncated annihilation operator: <n-1|a|n> = sqrt(n).  cutoff >= 1.
FockOperator annihilation(int cutoff);
FockOperator creation(int cutoff);
FockOperator identity_op(int modes, int cutoff);

/// Single-mode op -> k-mode op acting on target_mode, identity elsewhere.
FockOperator embed(const FockOperator& op, int target_mode, int total_modes);

/// Trace out every mode not listed in keep_modes (1-based, strictly increasing).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep_modes);

/// Two-mode partial transpose: <m,n|rho^T|p,q> = <p,n|rho|m,q> for mode 1.
/// Output is Hermitian and trace-preserving but in general not PSD.
DensityMatrix partial_transpose(const DensityMatrix& rho, int transposed_mode);

/// Eigenvalues (ascending) of 0.5*(M + M^dag).  Rejects non-finite input and
/// input whose anti-Hermitian part exceeds 1e-10; never silently repairs more.
Eigen::VectorXd hermitian_eigenvalues(const Mat& m);

DensityMatrix density_from_pure(const StateVector& psi);

/// Exchange the two modes of a two-mode density matrix.
DensityMatrix swap_modes(const DensityMatrix& rho);

/// Apply a single-mode operator on `mode` of a k-mode state, in place index
/// arithmetic -- no k-mode matrix is ever materialized.
StateVector apply_one_mode(const FockOperator& op, const StateVector& psi, int mode);

/// Same for a two-mode operator on ordered mode pair (mode_a, mode_b).
StateVector apply_two_mode(const FockOperator& op, const StateVector& psi,
                           int mode_a, int mode_b);

}  // namespace enconc
