#include "enconc/measures.hpp"

#include <cmath>

#include "enconc/protocols.hpp"

namespace enconc {

namespace {
constexpr double kPsdFloor = -1e-10;
}

EntanglementReport log_negativity(const DensityMatrix& rho) {
  if (rho.modes != 2) throw guard_error("log_negativity: two-mode states only");
  if (!rho.m.allFinite()) throw numeric_error("log_negativity: non-finite state");
  const double tr = rho.trace_real();
  if (!(tr > 0.0)) throw numeric_error("log_negativity: nonpositive trace");
  DensityMatrix n{rho.m / tr, 2, rho.cutoff, true};
  if (hermitian_eigenvalues(n.m)(0) < kPsdFloor)
    throw numeric_error("log_negativity: input violates positivity beyond the 1e-10 floor");

  const Eigen::VectorXd mu = hermitian_eigenvalues(partial_transpose(n, 1).m);
  const double trace_norm = mu.cwiseAbs().sum();
  const double min_ev = mu(0);
  // PT spectra that are nonnegative up to round-off mean a PPT state: report
  // exactly zero rather than log2(1 + eps)
  const double en = (min_ev >= kPsdFloor) ? 0.0 : std::max(0.0, std::log2(trace_norm));
  return {en, trace_norm, min_ev};
}

double fidelity_pure(const DensityMatrix& rho, const StateVector& target) {
  if (rho.modes != target.modes || rho.cutoff != target.cutoff)
    throw guard_error("fidelity_pure: shape mismatch");
  if (std::abs(target.norm_squared() - 1.0) > 1e-8)
    throw guard_error("fidelity_pure: target must be normalized");
  const double tr = rho.trace_real();
  if (!(tr > 0.0)) throw numeric_error("fidelity_pure: nonpositive trace");
  const cplx f = (target.amp.adjoint() * rho.m * target.amp)(0) / tr;
  if (std::abs(f.imag()) > 1e-10)
    throw numeric_error("fidelity_pure: expectation came out non-real; state is not Hermitian");
  return f.real();
}

double overlap_pure(const StateVector& psi, const StateVector& target) {
  if (psi.modes != target.modes || psi.cutoff != target.cutoff)
    throw guard_error("overlap_pure: shape mismatch");
  if (std::abs(target.norm_squared() - 1.0) > 1e-8)
    throw guard_error("overlap_pure: target must be normalized");
  return std::abs(cplx((target.amp.adjoint() * psi.normalized().amp)(0)));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.modes != b.modes || a.cutoff != b.cutoff) throw guard_error("trace_distance: shape mismatch");
  return 0.5 * hermitian_eigenvalues(a.m - b.m).cwiseAbs().sum();
}

double schmidt_log_negativity(const StateVector& psi) {
  if (psi.modes != 2) throw guard_error("schmidt_log_negativity: two-mode states only");
  const int d = psi.cutoff + 1;
  const Vec amp = psi.normalized().amp;
  Mat coeff(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) coeff(i, j) = amp(i * d + j);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Mat>(coeff).singularValues();
  const double s = sv.sum();
  return std::log2(s * s);
}

double entanglement_gain(const ConcentrationOutcome& outcome, const DensityMatrix& input) {
  return log_negativity(outcome.rho_normalized).log_negativity -
         log_negativity(input).log_negativity;
}

}  // namespace enconc
