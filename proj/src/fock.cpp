#include "enconc/fock.hpp"

#include <cmath>
#include <string>

namespace enconc {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw guard_error(msg);
}

// digits of a flat index, mode 1 first
void unflatten(int idx, int modes, int d, int* out) {
  for (int m = modes - 1; m >= 0; --m) {
    out[m] = idx % d;
    idx /= d;
  }
}

}  // namespace

StateVector StateVector::normalized() const {
  const double n2 = norm_squared();
  if (n2 < 1e-30)
    throw numeric_error("cannot normalize a zero-norm state (filter annihilated the input)");
  return {amp / std::sqrt(n2), modes, cutoff};
}

FockOperator annihilation(int cutoff) {
  require(cutoff >= 1, "annihilation: cutoff must be >= 1 (a single basis state cannot host a ladder operator)");
  const int d = cutoff + 1;
  Mat a = Mat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {std::move(a), 1, cutoff};
}

FockOperator creation(int cutoff) { return annihilation(cutoff).dagger(); }

FockOperator identity_op(int modes, int cutoff) {
  require(modes >= 1 && cutoff >= 0, "identity_op: bad dimensions");
  const int d = fock_dim(modes, cutoff);
  return {Mat::Identity(d, d), modes, cutoff};
}

FockOperator embed(const FockOperator& op, int target_mode, int total_modes) {
  require(op.modes == 1, "embed: only single-mode operators can be embedded");
  require(target_mode >= 1 && target_mode <= total_modes, "embed: target mode out of range");
  const int d = op.dim();
  const int stride = mode_stride(target_mode, total_modes, op.cutoff);
  const int dim = fock_dim(total_modes, op.cutoff);
  Mat out = Mat::Zero(dim, dim);
  // row/col differ only in the target-mode digit
  for (int i = 0; i < dim; ++i) {
    const int ni = (i / stride) % d;
    const int base = i - ni * stride;
    for (int nj = 0; nj < d; ++nj) {
      const cplx v = op.m(ni, nj);
      if (v != cplx(0.0, 0.0)) out(i, base + nj * stride) = v;
    }
  }
  return {std::move(out), total_modes, op.cutoff};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep_modes) {
  require(!keep_modes.empty() && static_cast<int>(keep_modes.size()) <= rho.modes,
          "partial_trace: keep set must be a nonempty subset of the modes");
  for (std::size_t i = 0; i < keep_modes.size(); ++i) {
    require(keep_modes[i] >= 1 && keep_modes[i] <= rho.modes, "partial_trace: mode out of range");
    require(i == 0 || keep_modes[i] > keep_modes[i - 1], "partial_trace: keep modes must be strictly increasing");
  }
  const int d = rho.cutoff + 1;
  const int kKeep = static_cast<int>(keep_modes.size());
  const int kTrace = rho.modes - kKeep;
  std::vector<int> traced;
  {
    std::size_t j = 0;
    for (int m = 1; m <= rho.modes; ++m) {
      if (j < keep_modes.size() && keep_modes[j] == m)
        ++j;
      else
        traced.push_back(m);
    }
  }
  const int dimK = fock_dim(kKeep, rho.cutoff);
  const int dimT = fock_dim(kTrace, rho.cutoff);
  std::vector<int> strideKeep(kKeep), strideTrace(kTrace);
  for (int i = 0; i < kKeep; ++i) strideKeep[i] = mode_stride(keep_modes[i], rho.modes, rho.cutoff);
  for (int i = 0; i < kTrace; ++i) strideTrace[i] = mode_stride(traced[i], rho.modes, rho.cutoff);

  std::vector<int> dig(std::max(kKeep, 1));
  Mat out = Mat::Zero(dimK, dimK);
  for (int r = 0; r < dimK; ++r) {
    unflatten(r, kKeep, d, dig.data());
    int baseR = 0;
    for (int i = 0; i < kKeep; ++i) baseR += dig[i] * strideKeep[i];
    for (int c = 0; c < dimK; ++c) {
      unflatten(c, kKeep, d, dig.data());
      int baseC = 0;
      for (int i = 0; i < kKeep; ++i) baseC += dig[i] * strideKeep[i];
      cplx sum = 0.0;
      std::vector<int> tdig(std::max(kTrace, 1));
      for (int t = 0; t < dimT; ++t) {
        unflatten(t, kTrace, d, tdig.data());
        int off = 0;
        for (int i = 0; i < kTrace; ++i) off += tdig[i] * strideTrace[i];
        sum += rho.m(baseR + off, baseC + off);
      }
      out(r, c) = sum;
    }
  }
  return {std::move(out), kKeep, rho.cutoff, rho.normalized};
}

DensityMatrix partial_transpose(const DensityMatrix& rho, int transposed_mode) {
  require(rho.modes == 2, "partial_transpose: implemented for two-mode states only");
  require(transposed_mode == 1 || transposed_mode == 2, "partial_transpose: mode must be 1 or 2");
  const int d = rho.cutoff + 1;
  Mat out(rho.dim(), rho.dim());
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          // transpose the chosen mode's indices, leave the other untouched
          if (transposed_mode == 1)
            out(m * d + n, p * d + q) = rho.m(p * d + n, m * d + q);
          else
            out(m * d + n, p * d + q) = rho.m(m * d + q, p * d + n);
        }
  return {std::move(out), 2, rho.cutoff, rho.normalized};
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  require(m.rows() == m.cols() && m.rows() > 0, "hermitian_eigenvalues: matrix must be square");
  if (!m.allFinite()) throw numeric_error("hermitian_eigenvalues: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10 * scale)
    throw numeric_error("hermitian_eigenvalues: input deviates from Hermitian beyond 1e-10");
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw numeric_error("hermitian_eigenvalues: eigensolver failed to converge");
  return solver.eigenvalues();  // ascending
}

DensityMatrix density_from_pure(const StateVector& psi) {
  return {psi.amp * psi.amp.adjoint(), psi.modes, psi.cutoff,
          std::abs(psi.norm_squared() - 1.0) < 1e-12};
}

DensityMatrix swap_modes(const DensityMatrix& rho) {
  require(rho.modes == 2, "swap_modes: two-mode only");
  const int d = rho.cutoff + 1;
  Mat out(rho.dim(), rho.dim());
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          out(n * d + m, q * d + p) = rho.m(m * d + n, p * d + q);
  return {std::move(out), 2, rho.cutoff, rho.normalized};
}

StateVector apply_one_mode(const FockOperator& op, const StateVector& psi, int mode) {
  require(op.modes == 1 && op.cutoff == psi.cutoff, "apply_one_mode: operator/state mismatch");
  require(mode >= 1 && mode <= psi.modes, "apply_one_mode: mode out of range");
  const int d = op.dim();
  const int stride = mode_stride(mode, psi.modes, psi.cutoff);
  const int dim = psi.dim();
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    const int ni = (i / stride) % d;
    const int base = i - ni * stride;
    cplx sum = 0.0;
    for (int nj = 0; nj < d; ++nj) sum += op.m(ni, nj) * psi.amp(base + nj * stride);
    out(i) = sum;
  }
  return {std::move(out), psi.modes, psi.cutoff};
}

StateVector apply_two_mode(const FockOperator& op, const StateVector& psi,
                           int mode_a, int mode_b) {
  require(op.modes == 2 && op.cutoff == psi.cutoff, "apply_two_mode: operator/state mismatch");
  require(mode_a >= 1 && mode_a <= psi.modes && mode_b >= 1 && mode_b <= psi.modes && mode_a != mode_b,
          "apply_two_mode: bad mode pair");
  const int d = psi.cutoff + 1;
  const int sa = mode_stride(mode_a, psi.modes, psi.cutoff);
  const int sb = mode_stride(mode_b, psi.modes, psi.cutoff);
  const int dim = psi.dim();
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    const int na = (i / sa) % d;
    const int nb = (i / sb) % d;
    const int base = i - na * sa - nb * sb;
    const int row = na * d + nb;  // op's own two-mode index, first mode most significant
    cplx sum = 0.0;
    for (int ma = 0; ma < d; ++ma)
      for (int mb = 0; mb < d; ++mb) {
        const cplx v = op.m(row, ma * d + mb);
        if (v != cplx(0.0, 0.0)) sum += v * psi.amp(base + ma * sa + mb * sb);
      }
    out(i) = sum;
  }
  return {std::move(out), psi.modes, psi.cutoff};
}

}  // namespace enconc
