#pragma once

#include "enconc/fock.hpp"

namespace enconc {

struct ConcentrationOutcome;  // protocols.hpp

struct EntanglementReport {
  double log_negativity;     // log2 || rho^T_A ||_1, in e-bits; clamped >= 0
  double trace_norm_pt;      // || rho^T_A ||_1 after normalization
  double min_pt_eigenvalue;  // most negative partial-transpose eigenvalue
};

/// Logarithmic negativity of a two-mode state.  Unnormalized input is
/// normalized by its trace first; non-PSD input (beyond a -1e-10 floor) is an
/// error.  Reports 0 exactly when the PT spectrum is nonnegative at the floor.
EntanglementReport log_negativity(const DensityMatrix& rho);

/// <target| rho |target> for a normalized pure target.
double fidelity_pure(const DensityMatrix& rho, const StateVector& target);

/// |<target|psi>| with psi normalized first; amplitude-level overlap.
double overlap_pure(const StateVector& psi, const StateVector& target);

/// 0.5 || a - b ||_1 for states of equal shape.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Independent pure-state route: log2((sum of Schmidt coefficients)^2) from an
/// SVD of the amplitude matrix, no partial transpose involved.
double schmidt_log_negativity(const StateVector& psi);

/// E_N(outcome) - E_N(input).
double entanglement_gain(const ConcentrationOutcome& outcome, const DensityMatrix& input);

}  // namespace enconc
