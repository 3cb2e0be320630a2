#include "enconc/protocols.hpp"

#include <cmath>

#include "enconc/gaussian_ops.hpp"
#include "enconc/measures.hpp"

namespace enconc {

namespace {

constexpr double kZeroSuccess = 1e-15;
constexpr double kPsdFloor = -1e-10;

void check_two_mode(const StateVector& psi, const char* who) {
  if (psi.modes != 2) throw guard_error(std::string(who) + ": two-mode states only");
}

/// sigma = local op applied to the (possibly lossy) source state.
DensityMatrix prepared_state(const ProtocolParams& p, double extra_nu = 0.0) {
  DensityMatrix rho = density_from_pure(tmsv_pure(p.lambda, p.cutoff).state);
  if (p.nu > 0.0) {
    rho = apply_loss(rho, 1, p.nu);
    rho = apply_loss(rho, 2, p.nu);
  }
  switch (p.local_op.kind) {
    case LocalOp::Kind::none:
      break;
    case LocalOp::Kind::displacement: {
      const Mat da = embed(displacement_operator(p.local_op.alpha, p.cutoff), 1, 2).m;
      const Mat db = embed(displacement_operator(p.local_op.beta, p.cutoff), 2, 2).m;
      rho.m = db * (da * rho.m * da.adjoint()) * db.adjoint();
      break;
    }
    case LocalOp::Kind::squeezing: {
      const Mat sa = embed(squeezing_operator(p.local_op.s, p.cutoff), 1, 2).m;
      const Mat sb = embed(squeezing_operator(p.local_op.s, p.cutoff), 2, 2).m;
      rho.m = sb * (sa * rho.m * sa.adjoint()) * sb.adjoint();
      break;
    }
  }
  if (extra_nu > 0.0) {
    rho = apply_loss(rho, 1, extra_nu);
    rho = apply_loss(rho, 2, extra_nu);
  }
  return rho;
}

ConcentrationOutcome make_outcome(Mat m, const ProtocolParams& p) {
  m = 0.5 * (m + m.adjoint().eval());  // enforce hermiticity against round-off
  DensityMatrix rho_out{std::move(m), 2, p.cutoff, false};
  const double psucc = rho_out.trace_real();
  if (!(psucc >= kZeroSuccess)) throw zero_success_error(psucc);
  DensityMatrix rho_norm{rho_out.m / psucc, 2, p.cutoff, true};
  const Eigen::VectorXd ev = hermitian_eigenvalues(rho_norm.m);
  if (ev(0) < kPsdFloor)
    throw numeric_error("conditional state violates positivity beyond the 1e-10 floor");
  return {std::move(rho_out), std::move(rho_norm), psucc, p};
}

ConcentrationOutcome conditional_click_state(DensityMatrix sigma, double reflectance,
                                             double eta, const ProtocolParams& p) {
  const DensityMatrix la = tap_trace(sigma, 1, reflectance);
  const DensityMatrix va = tap_noclick(sigma, 1, reflectance, eta);
  Mat out = tap_trace(la, 2, reflectance).m - tap_trace(va, 2, reflectance).m -
            tap_noclick(la, 2, reflectance, eta).m + tap_noclick(va, 2, reflectance, eta).m;
  return make_outcome(std::move(out), p);
}

}  // namespace

void ProtocolParams::validate() const {
  if (cutoff < 4) throw guard_error("ProtocolParams: cutoff must be >= 4");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw guard_error("ProtocolParams: lambda must lie in [0, 1)");
  if (std::pow(lambda, 2.0 * (cutoff + 1)) >= 1e-6)
    throw guard_error("ProtocolParams: lambda too large for the cutoff (norm deficit >= 1e-6)");
  if (!(reflectance >= 0.0 && reflectance < 1.0))
    throw guard_error("ProtocolParams: reflectance must lie in [0, 1)");
  if (!(eta > 0.0 && eta <= 1.0)) throw guard_error("ProtocolParams: eta must lie in (0, 1]");
  if (!(nu >= 0.0 && nu <= 1.0)) throw guard_error("ProtocolParams: nu must lie in [0, 1]");
  switch (local_op.kind) {
    case LocalOp::Kind::none:
      break;
    case LocalOp::Kind::displacement:
      if (std::abs(local_op.alpha) > 2.0 || std::abs(local_op.beta) > 2.0)
        throw guard_error("ProtocolParams: displacement beyond the |alpha| <= 2 truncation guard");
      break;
    case LocalOp::Kind::squeezing:
      if (std::abs(local_op.s) > 1.5)
        throw guard_error("ProtocolParams: squeezing beyond the |s| <= 1.5 truncation guard");
      break;
  }
}

StateVector ideal_subtraction_filter(const StateVector& psi) {
  check_two_mode(psi, "ideal_subtraction_filter");
  const FockOperator a = annihilation(psi.cutoff);
  return apply_one_mode(a, apply_one_mode(a, psi, 1), 2);
}

StateVector ideal_displaced_filter(const StateVector& psi, cplx alpha, cplx beta) {
  check_two_mode(psi, "ideal_displaced_filter");
  const FockOperator a = annihilation(psi.cutoff);
  StateVector t = apply_one_mode(a, psi, 1);
  t.amp += alpha * psi.amp;
  StateVector out = apply_one_mode(a, t, 2);
  out.amp += beta * t.amp;
  return out;
}

StateVector ideal_squeezed_filter(const StateVector& psi, double s) {
  check_two_mode(psi, "ideal_squeezed_filter");
  if (std::abs(s) > 1.5)
    throw guard_error("ideal_squeezed_filter: squeezing beyond the |s| <= 1.5 truncation guard");
  FockOperator f = annihilation(psi.cutoff);
  f.m = std::cosh(s) * f.m + std::sinh(s) * f.m.adjoint().eval();
  return apply_one_mode(f, apply_one_mode(f, psi, 1), 2);
}

StateVector ideal_nonlocal_filter(const StateVector& psi) {
  check_two_mode(psi, "ideal_nonlocal_filter");
  const FockOperator a = annihilation(psi.cutoff);
  StateVector out = apply_one_mode(a, psi, 1);
  out.amp += apply_one_mode(a, psi, 2).amp;
  return out;
}

DensityMatrix tap_trace(const DensityMatrix& rho, int mode, double reflectance) {
  return apply_loss(rho, mode, reflectance);
}

DensityMatrix tap_noclick(const DensityMatrix& rho, int mode, double reflectance, double eta) {
  std::vector<double> w(rho.cutoff + 1);
  double g = 1.0;
  for (int k = 0; k <= rho.cutoff; ++k) {
    w[k] = g;  // (1-eta)^k: chance that all k tapped photons escape detection
    g *= 1.0 - eta;
  }
  return apply_loss_kraus_weighted(rho, mode, reflectance, w);
}

ConcentrationOutcome run_realistic(const ProtocolParams& p) {
  p.validate();
  return conditional_click_state(prepared_state(p), p.reflectance, p.eta, p);
}

ConcentrationOutcome run_realistic_reparametrized(const ProtocolParams& p, bool keep_t_tilde) {
  p.validate();
  const InefficiencyReduction red = inefficiency_reduction(p.eta, p.reflectance);
  DensityMatrix sigma = prepared_state(p, keep_t_tilde ? 1.0 - red.t_tilde : 0.0);
  return conditional_click_state(std::move(sigma), red.r_eff, 1.0, p);
}

ConcentrationOutcome run_bruteforce_oracle(const ProtocolParams& p) {
  p.validate();
  if (p.nu != 0.0)
    throw guard_error("run_bruteforce_oracle: pure inputs only (nu must be 0)");
  const int d = p.cutoff + 1;

  // modes (A, B, C, D) = (1, 2, 3, 4); C, D are the tap ancillas
  StateVector big = vacuum_state(4, p.cutoff);
  big.amp.setZero();
  {
    const Vec two = tmsv_pure(p.lambda, p.cutoff).state.amp;
    const int sA = mode_stride(1, 4, p.cutoff), sB = mode_stride(2, 4, p.cutoff);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) big.amp(a * sA + b * sB) = two(a * d + b);
  }

  switch (p.local_op.kind) {
    case LocalOp::Kind::none:
      break;
    case LocalOp::Kind::displacement:
      big = apply_one_mode(displacement_operator(p.local_op.alpha, p.cutoff), big, 1);
      big = apply_one_mode(displacement_operator(p.local_op.beta, p.cutoff), big, 2);
      break;
    case LocalOp::Kind::squeezing: {
      const FockOperator s = squeezing_operator(p.local_op.s, p.cutoff);
      big = apply_one_mode(s, big, 1);
      big = apply_one_mode(s, big, 2);
      break;
    }
  }

  const FockOperator bs = beam_splitter_unitary(p.reflectance, p.cutoff);
  big = apply_two_mode(bs, big, 1, 3);
  big = apply_two_mode(bs, big, 2, 4);

  // on-off POVM on C and D: click element is diagonal, 1 - (1-eta)^n per mode
  std::vector<double> w(d);
  for (int n = 0; n < d; ++n) w[n] = 1.0 - std::pow(1.0 - p.eta, n);
  const int sA = mode_stride(1, 4, p.cutoff), sB = mode_stride(2, 4, p.cutoff);
  const int sC = mode_stride(3, 4, p.cutoff), sD = mode_stride(4, 4, p.cutoff);
  Mat out = Mat::Zero(d * d, d * d);
  Vec slice(d * d);
  for (int c = 1; c < d; ++c)
    for (int e = 1; e < d; ++e) {
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) slice(a * d + b) = big.amp(a * sA + b * sB + c * sC + e * sD);
      out.noalias() += (w[c] * w[e]) * (slice * slice.adjoint());
    }
  return make_outcome(std::move(out), p);
}

std::vector<IdealLimitPoint> realistic_to_ideal_limit(const ProtocolParams& p,
                                                      const std::vector<double>& reflectances) {
  p.validate();
  if (p.nu != 0.0)
    throw guard_error("realistic_to_ideal_limit: the weak-tap limit statement assumes a pure input (nu = 0)");
  if (reflectances.empty()) throw guard_error("realistic_to_ideal_limit: empty reflectance sequence");

  const StateVector psi = tmsv_pure(p.lambda, p.cutoff).state;
  StateVector target{Vec{}, 2, p.cutoff};
  switch (p.local_op.kind) {
    case LocalOp::Kind::none:
      target = ideal_subtraction_filter(psi);
      break;
    case LocalOp::Kind::displacement:
      target = ideal_displaced_filter(psi, p.local_op.alpha, p.local_op.beta);
      break;
    case LocalOp::Kind::squeezing:
      target = ideal_squeezed_filter(psi, p.local_op.s);
      break;
  }
  const DensityMatrix projector = density_from_pure(target.normalized());

  // undo the local unitary on the heralded state before comparing: it passes
  // through the weak tap unchanged, so the filter limit is reached only up to
  // this known factor
  Mat undo = Mat::Identity(fock_dim(2, p.cutoff), fock_dim(2, p.cutoff));
  if (p.local_op.kind == LocalOp::Kind::displacement)
    undo = embed(displacement_operator(-p.local_op.beta, p.cutoff), 2, 2).m *
           embed(displacement_operator(-p.local_op.alpha, p.cutoff), 1, 2).m;
  else if (p.local_op.kind == LocalOp::Kind::squeezing)
    undo = embed(squeezing_operator(-p.local_op.s, p.cutoff), 2, 2).m *
           embed(squeezing_operator(-p.local_op.s, p.cutoff), 1, 2).m;

  std::vector<IdealLimitPoint> record;
  record.reserve(reflectances.size());
  for (double r : reflectances) {
    ProtocolParams q = p;
    q.reflectance = r;
    ConcentrationOutcome out = run_realistic(q);
    DensityMatrix cmp{undo * out.rho_normalized.m * undo.adjoint(), 2, p.cutoff, false};
    cmp.m /= cmp.trace_real();  // undo is only near-unitary on the truncated block
    record.push_back({r, trace_distance(cmp, projector)});
  }
  return record;
}

}  // namespace enconc
