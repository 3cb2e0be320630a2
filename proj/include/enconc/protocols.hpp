#pragma once

#include "enconc/states.hpp"

namespace enconc {

struct LocalOp {
  enum class Kind { none, displacement, squeezing };
  Kind kind = Kind::none;
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
  double s = 0.0;

  static LocalOp off() { return {}; }
  static LocalOp displaced(cplx a, cplx b) { return {Kind::displacement, a, b, 0.0}; }
  static LocalOp squeezed(double s) { return {Kind::squeezing, {}, {}, s}; }
};

struct ProtocolParams {
  double lambda = 0.1;       // TMSV parameter, tanh of the squeezing of the source
  double reflectance = 0.1;  // tap beam-splitter reflectance R
  double eta = 1.0;          // on-off detector efficiency
  double nu = 0.0;           // channel loss applied symmetrically to both modes
  LocalOp local_op;
  int cutoff = 10;

  void validate() const;  // throws guard_error
};

struct ConcentrationOutcome {
  DensityMatrix rho_out;         // unnormalized conditional state; trace = P_succ
  DensityMatrix rho_normalized;  // rho_out / P_succ
  double success_probability = 0.0;
  ProtocolParams params;
};

/// Success probability fell below anything the truncated simulation can
/// distinguish from zero; carries the raw value for diagnostics.
struct zero_success_error : numeric_error {
  double success_probability;
  explicit zero_success_error(double p)
      : numeric_error("success probability below 1e-15: conditional state is numerically meaningless"),
        success_probability(p) {}
};

// --- ideal (weak-tap limit) filters; linear maps, never normalized ---------

/// a (x) b, the plain two-photon-subtraction filter.
StateVector ideal_subtraction_filter(const StateVector& psi);

/// (a + alpha) (x) (b + beta): subtraction with pre-displaced taps.
StateVector ideal_displaced_filter(const StateVector& psi, cplx alpha, cplx beta);

/// (a cosh s + a^dag sinh s) (x) (b cosh s + b^dag sinh s).
StateVector ideal_squeezed_filter(const StateVector& psi, double s);

/// a + b, the delocalized single-subtraction filter (benchmark, not LOCC).
StateVector ideal_nonlocal_filter(const StateVector& psi);

// --- realistic protocol: tap + on-off detector per mode --------------------

/// Unconditional tap channel Lambda (ancilla traced out): loss with nu = R.
DensityMatrix tap_trace(const DensityMatrix& rho, int mode, double reflectance);

/// No-click branch V: Kraus terms weighted (1-eta)^k; eta = 1 keeps only K_0.
DensityMatrix tap_noclick(const DensityMatrix& rho, int mode, double reflectance, double eta);

/// Both-detectors-click conditional state via inclusion-exclusion
///   rho_out = L_A L_B(s) - V_A L_B(s) - L_A V_B(s) + V_A V_B(s),
/// evaluated entirely on two-mode objects (the four-mode state is never built).
ConcentrationOutcome run_realistic(const ProtocolParams& p);

/// Same protocol with detector inefficiency folded into the optics:
/// loss of transmittance t_tilde on each mode followed by a perfect-detector
/// tap of reflectance r_eff.  keep_t_tilde=false drops the loss step (the
/// commonly quoted small-R shortcut); the exact form is the default.
ConcentrationOutcome run_realistic_reparametrized(const ProtocolParams& p,
                                                  bool keep_t_tilde = true);

/// Literal four-mode reference: builds the (cutoff+1)^4 state vector, applies
/// the displacement/squeezing and tap unitaries mode-wise, then the on-off
/// POVM on the ancillas.  Pure inputs only (nu = 0).  Exists to check
/// run_realistic against an independent computation path.
ConcentrationOutcome run_bruteforce_oracle(const ProtocolParams& p);

struct IdealLimitPoint {
  double reflectance;
  double trace_distance;
};

/// Trace distance between the realistic conditional state (local unitary
/// undone, since it survives the weak tap as a known residual) and the
/// matching ideal filter output, along a decreasing R sequence.
std::vector<IdealLimitPoint> realistic_to_ideal_limit(const ProtocolParams& p,
                                                      const std::vector<double>& reflectances);

}  // namespace enconc
