#pragma once

#include "enconc/fock.hpp"

namespace enconc {

// Gaussian unitaries as truncated Fock-basis matrices.  Displacement and
// squeezing are built at an enlarged internal cutoff (requested + pad) and
// cropped back, which pushes the exponentiation artifacts outside the block
// that is kept.  The beam splitter is assembled block by block in total photon
// number and is exactly number conserving.

constexpr int kGaussianPad = 10;

/// exp(alpha a^dag - conj(alpha) a), cropped to cutoff+1 dimensions.
/// Guard |alpha| <= 2: beyond that the cutoff-10 truncation error of the
/// cropped block is unacceptable.
FockOperator displacement_operator(cplx alpha, int cutoff);

/// exp(s/2 (a^dag^2 - a^2)); convention S(s)^dag a S(s) = a cosh s + a^dag sinh s.
/// Guard |s| <= 1.5 for the same truncation reason.
FockOperator squeezing_operator(double s, int cutoff);

/// Two-mode tap coupling (signal, ancilla) with Heisenberg action
///   a -> sqrt(1-R) a + sqrt(R) c,   c -> sqrt(1-R) c - sqrt(R) a,
/// i.e. |1,0> -> sqrt(1-R)|1,0> - sqrt(R)|0,1> in the Schroedinger picture.
/// Exactly unitary on every complete fixed-total-photon block.
FockOperator beam_splitter_unitary(double reflectance, int cutoff);

}  // namespace enconc
