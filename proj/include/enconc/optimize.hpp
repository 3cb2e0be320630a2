#pragma once

#include <string>
#include <utility>

#include "enconc/protocols.hpp"

namespace enconc {

struct OptimizeResult {
  double alpha_opt = 0.0;  // beta is locked to -alpha
  double e_n = 0.0;
  double p_succ = 0.0;
  int iterations = 0;  // golden-section refinements after the coarse grid
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Maximize E_N of run_realistic over real alpha in (0, 1] with beta = -alpha:
/// 21-point coarse grid, then golden-section until the bracket is < 1e-4 wide.
/// The landscape is symmetric under alpha -> -alpha, so only the positive
/// branch is searched.  Flat/degenerate landscapes raise numeric_error.
OptimizeResult optimize_displacement(const ProtocolParams& base);

struct SweepGrid {
  std::string param;  // lambda | reflectance | eta | nu | alpha | beta | squeezing
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

struct SweepRow {
  std::vector<double> values;  // aligned with SweepTable::columns; NaN on error
  std::string error;           // empty when the row succeeded
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
};

/// One protocol run per grid point (cartesian product, first grid outermost,
/// rows in grid order).  Failed points are tagged in their row, never dropped.
/// With optimize_alpha the row carries the lossy-input E_N, the bare
/// subtraction run and the displacement-optimized run side by side.
SweepTable sweep(const ProtocolParams& base, const std::vector<SweepGrid>& grids,
                 bool optimize_alpha);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<std::pair<double, double>>& pts);

/// Success-probability scaling exponent in lambda; enforces the asymptotic
/// regime (>= 4 points, every lambda <= 0.06, every P > 0).
double scaling_exponent(const std::vector<std::pair<double, double>>& lambda_p);

}  // namespace enconc
