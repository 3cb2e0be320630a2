#pragma once

#include "enconc/fock.hpp"

namespace enconc {

struct TmsvState {
  StateVector state;
  double norm_deficit;  // weight of the chopped tail, lambda^(2(cutoff+1))
};

/// Two-mode squeezed vacuum sqrt(1-lambda^2) sum_n lambda^n |n,n>, truncated.
/// Guards: lambda in [0,1) and norm deficit < 1e-6 at the requested cutoff.
TmsvState tmsv_pure(double lambda, int cutoff);

StateVector vacuum_state(int modes, int cutoff);

/// Pure-loss channel on one mode: Kraus K_k = sqrt(nu^k/k!) T^{n/2} a^k with
/// T = 1 - nu, k = 0..cutoff.  Trace preserving on the truncated space.
DensityMatrix apply_loss(const DensityMatrix& rho, int mode, double nu);

/// sum_k w_k K_k rho K_k^dag with the same Kraus family; the per-k weights are
/// what distinguish a traced tap (w=1), a no-click branch (w=(1-eta)^k) and a
/// plain loss channel.  Exposed for the tap maps in the protocol layer.
DensityMatrix apply_loss_kraus_weighted(const DensityMatrix& rho, int mode, double nu,
                                        const std::vector<double>& k_weights);

struct InefficiencyReduction {
  double r_eff;    // eta R / (1 - (1-eta) R)
  double t_tilde;  // 1 - (1-eta) R
};

/// Fold detector efficiency eta into the tap: inefficient detection behind a
/// reflectance-R tap equals perfect detection behind a reflectance-r_eff tap
/// preceded by a loss channel of transmittance t_tilde.
InefficiencyReduction inefficiency_reduction(double eta, double reflectance);

}  // namespace enconc
