#include "enconc/states.hpp"

#include <cmath>

namespace enconc {

TmsvState tmsv_pure(double lambda, int cutoff) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw guard_error("tmsv_pure: lambda must lie in [0, 1)");
  if (cutoff < 1) throw guard_error("tmsv_pure: cutoff must be >= 1");
  const double deficit = std::pow(lambda, 2.0 * (cutoff + 1));
  if (deficit >= 1e-6)
    throw guard_error("tmsv_pure: truncated-norm deficit >= 1e-6; raise the cutoff or lower lambda");
  const int d = cutoff + 1;
  Vec amp = Vec::Zero(d * d);
  const double g = std::sqrt(1.0 - lambda * lambda);
  double p = 1.0;
  for (int n = 0; n < d; ++n) {
    amp(n * d + n) = g * p;
    p *= lambda;
  }
  return {{std::move(amp), 2, cutoff}, deficit};
}

StateVector vacuum_state(int modes, int cutoff) {
  if (modes < 1 || cutoff < 0) throw guard_error("vacuum_state: bad dimensions");
  Vec amp = Vec::Zero(fock_dim(modes, cutoff));
  amp(0) = 1.0;
  return {std::move(amp), modes, cutoff};
}

DensityMatrix apply_loss_kraus_weighted(const DensityMatrix& rho, int mode, double nu,
                                        const std::vector<double>& k_weights) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw guard_error("apply_loss: nu must lie in [0, 1]");
  if (mode < 1 || mode > rho.modes) throw guard_error("apply_loss: mode out of range");
  if (static_cast<int>(k_weights.size()) != rho.cutoff + 1)
    throw guard_error("apply_loss: need one weight per Kraus index 0..cutoff");
  const int d = rho.cutoff + 1;
  const int stride = mode_stride(mode, rho.modes, rho.cutoff);
  const int dim = rho.dim();
  const double T = 1.0 - nu;

  std::vector<int> digit(dim);
  for (int i = 0; i < dim; ++i) digit[i] = (i / stride) % d;

  Mat out = Mat::Zero(dim, dim);
  // u[n] = <n|K_k|n+k> = sqrt(nu^k/k!) T^{n/2} sqrt((n+k)!/n!)
  std::vector<double> u(d);
  double ck = 1.0;  // sqrt(nu^k / k!)
  for (int k = 0; k < d; ++k) {
    if (k > 0) {
      if (nu == 0.0) break;  // only K_0 survives
      ck *= std::sqrt(nu / k);
    }
    if (k_weights[k] == 0.0) continue;
    for (int n = 0; n + k < d; ++n) {
      double r = 1.0;
      for (int j = n + 1; j <= n + k; ++j) r *= j;
      u[n] = ck * std::pow(T, 0.5 * n) * std::sqrt(r);
    }
    const double w = k_weights[k];
    for (int i = 0; i < dim; ++i) {
      if (digit[i] + k >= d) continue;
      const int si = i + k * stride;
      for (int j = 0; j < dim; ++j) {
        if (digit[j] + k >= d) continue;
        out(i, j) += w * u[digit[i]] * u[digit[j]] * rho.m(si, j + k * stride);
      }
    }
  }
  return {std::move(out), rho.modes, rho.cutoff, false};
}

DensityMatrix apply_loss(const DensityMatrix& rho, int mode, double nu) {
  std::vector<double> ones(rho.cutoff + 1, 1.0);
  DensityMatrix out = apply_loss_kraus_weighted(rho, mode, nu, ones);
  out.normalized = rho.normalized;  // channel is trace preserving
  return out;
}

InefficiencyReduction inefficiency_reduction(double eta, double reflectance) {
  if (!(eta > 0.0 && eta <= 1.0)) throw guard_error("inefficiency_reduction: eta must lie in (0, 1]");
  if (!(reflectance >= 0.0 && reflectance < 1.0))
    throw guard_error("inefficiency_reduction: reflectance must lie in [0, 1)");
  const double t_tilde = 1.0 - (1.0 - eta) * reflectance;
  return {eta * reflectance / t_tilde, t_tilde};
}

}  // namespace enconc
