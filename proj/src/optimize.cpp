#include "enconc/optimize.hpp"

#include <cmath>
#include <limits>

#include "enconc/measures.hpp"

namespace enconc {

namespace {

constexpr int kGridPoints = 21;
constexpr double kBracketTol = 1e-4;

double en_at(const ProtocolParams& base, double alpha) {
  ProtocolParams p = base;
  p.local_op = LocalOp::displaced(alpha, -alpha);
  return log_negativity(run_realistic(p).rho_normalized).log_negativity;
}

void set_param(ProtocolParams& p, const std::string& name, double v) {
  if (name == "lambda") {
    p.lambda = v;
  } else if (name == "reflectance") {
    p.reflectance = v;
  } else if (name == "eta") {
    p.eta = v;
  } else if (name == "nu") {
    p.nu = v;
  } else if (name == "alpha") {
    if (p.local_op.kind == LocalOp::Kind::squeezing)
      throw guard_error("sweep: cannot sweep alpha while the local operation is a squeezer");
    p.local_op.kind = LocalOp::Kind::displacement;
    p.local_op.alpha = v;
  } else if (name == "beta") {
    if (p.local_op.kind == LocalOp::Kind::squeezing)
      throw guard_error("sweep: cannot sweep beta while the local operation is a squeezer");
    p.local_op.kind = LocalOp::Kind::displacement;
    p.local_op.beta = v;
  } else if (name == "squeezing") {
    if (p.local_op.kind == LocalOp::Kind::displacement)
      throw guard_error("sweep: cannot sweep squeezing while the local operation is a displacement");
    p.local_op.kind = LocalOp::Kind::squeezing;
    p.local_op.s = v;
  } else {
    throw guard_error("sweep: unknown parameter '" + name + "'");
  }
}

std::vector<double> grid_values(const SweepGrid& g) {
  if (!(g.step > 0.0)) throw guard_error("sweep: grid step must be positive");
  if (g.stop < g.start - 1e-12) throw guard_error("sweep: grid stop must be >= start");
  const long n = std::lround(std::floor((g.stop - g.start) / g.step + 1e-9)) + 1;
  if (n > 100000) throw guard_error("sweep: grid has more than 1e5 points");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = g.start + static_cast<double>(i) * g.step;
  return v;
}

}  // namespace

OptimizeResult optimize_displacement(const ProtocolParams& base) {
  base.validate();
  if (!(base.lambda > 0.0))
    throw guard_error("optimize_displacement: lambda must be positive");

  // coarse grid over (0, 1]
  double grid[kGridPoints], val[kGridPoints];
  int best = -1;
  int failed = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = static_cast<double>(i + 1) / kGridPoints;
    try {
      val[i] = en_at(base, grid[i]);
    } catch (const numeric_error&) {
      val[i] = -std::numeric_limits<double>::infinity();
      ++failed;
      continue;
    }
    if (best < 0 || val[i] > val[best]) best = i;
  }
  if (best < 0)
    throw numeric_error("optimize_displacement: every grid point failed; landscape is degenerate");
  double spread = 0.0;
  for (int i = 0; i < kGridPoints; ++i)
    if (std::isfinite(val[i])) spread = std::max(spread, val[best] - val[i]);
  if (failed == 0 && spread < 1e-12)
    throw numeric_error("optimize_displacement: flat landscape, no interior maximum");

  double lo = (best == 0) ? grid[0] / 8.0 : grid[best - 1];
  double hi = (best == kGridPoints - 1) ? grid[best] : grid[best + 1];

  // golden-section refinement of the bracket
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = en_at(base, x1);
  double f2 = en_at(base, x2);
  int iters = 0;
  while (hi - lo > kBracketTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = en_at(base, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = en_at(base, x1);
    }
    ++iters;
  }
  const double alpha = 0.5 * (lo + hi);
  ProtocolParams p = base;
  p.local_op = LocalOp::displaced(alpha, -alpha);
  const ConcentrationOutcome out = run_realistic(p);
  return {alpha, log_negativity(out.rho_normalized).log_negativity, out.success_probability,
          iters, lo, hi};
}

SweepTable sweep(const ProtocolParams& base, const std::vector<SweepGrid>& grids,
                 bool optimize_alpha) {
  if (grids.empty()) throw guard_error("sweep: at least one grid is required");
  bool sweeps_displacement = false, sweeps_squeezing = false;
  for (const SweepGrid& g : grids) {
    if (g.param == "alpha" || g.param == "beta")
      sweeps_displacement = true;
    else if (g.param == "squeezing")
      sweeps_squeezing = true;
    else if (g.param != "lambda" && g.param != "reflectance" && g.param != "eta" &&
             g.param != "nu")
      throw guard_error("sweep: unknown parameter '" + g.param + "'");
  }
  if (sweeps_displacement && sweeps_squeezing)
    throw guard_error("sweep: cannot sweep displacement and squeezing together");
  if (sweeps_displacement && base.local_op.kind == LocalOp::Kind::squeezing)
    throw guard_error("sweep: cannot sweep alpha while the local operation is a squeezer");
  if (sweeps_squeezing && base.local_op.kind == LocalOp::Kind::displacement)
    throw guard_error("sweep: cannot sweep squeezing while the local operation is a displacement");
  std::vector<std::vector<double>> values;
  values.reserve(grids.size());
  for (const SweepGrid& g : grids) {
    if (optimize_alpha && (g.param == "alpha" || g.param == "beta" || g.param == "squeezing"))
      throw guard_error("sweep: cannot sweep the local operation while optimizing alpha");
    values.push_back(grid_values(g));
  }

  SweepTable table;
  for (const SweepGrid& g : grids) table.columns.push_back(g.param);
  if (optimize_alpha) {
    table.columns.insert(table.columns.end(),
                         {"E_N_input", "E_N_subtracted", "E_N_displaced",
                          "P_succ_subtracted", "P_succ_displaced", "alpha_opt"});
  } else {
    table.columns.insert(table.columns.end(), {"E_N", "P_succ"});
  }
  const std::size_t extra = table.columns.size() - grids.size();

  std::vector<std::size_t> idx(grids.size(), 0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  while (true) {
    SweepRow row;
    for (std::size_t g = 0; g < grids.size(); ++g) row.values.push_back(values[g][idx[g]]);
    try {
      ProtocolParams p = base;
      for (std::size_t g = 0; g < grids.size(); ++g) set_param(p, grids[g].param, row.values[g]);
      if (optimize_alpha) {
        DensityMatrix input = density_from_pure(tmsv_pure(p.lambda, p.cutoff).state);
        if (p.nu > 0.0) input = apply_loss(apply_loss(input, 1, p.nu), 2, p.nu);
        const double e_in = log_negativity(input).log_negativity;
        ProtocolParams sub = p;
        sub.local_op = LocalOp::off();
        const ConcentrationOutcome bare = run_realistic(sub);
        const OptimizeResult opt = optimize_displacement(sub);
        row.values.insert(row.values.end(),
                          {e_in, log_negativity(bare.rho_normalized).log_negativity, opt.e_n,
                           bare.success_probability, opt.p_succ, opt.alpha_opt});
      } else {
        const ConcentrationOutcome out = run_realistic(p);
        row.values.insert(row.values.end(),
                          {log_negativity(out.rho_normalized).log_negativity,
                           out.success_probability});
      }
    } catch (const guard_error& e) {
      row.values.resize(grids.size() + extra, nan);
      row.error = e.what();
    } catch (const numeric_error& e) {
      row.values.resize(grids.size() + extra, nan);
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));

    // odometer, last grid fastest
    std::size_t g = grids.size();
    while (g > 0) {
      --g;
      if (++idx[g] < values[g].size()) break;
      idx[g] = 0;
      if (g == 0) return table;
    }
  }
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw guard_error("loglog_slope: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0 && y > 0.0)) throw guard_error("loglog_slope: coordinates must be positive");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / static_cast<double>(pts.size());
  const double my = sy / static_cast<double>(pts.size());
  double num = 0.0, den = 0.0;
  for (const auto& [x, y] : pts) {
    const double dx = std::log(x) - mx;
    num += dx * (std::log(y) - my);
    den += dx * dx;
  }
  if (!(den > 0.0)) throw guard_error("loglog_slope: abscissae are all identical");
  return num / den;
}

double scaling_exponent(const std::vector<std::pair<double, double>>& lambda_p) {
  if (lambda_p.size() < 4) throw guard_error("scaling_exponent: need at least four points");
  for (const auto& [lambda, psucc] : lambda_p) {
    if (lambda > 0.06)
      throw guard_error("scaling_exponent: lambda > 0.06 is outside the asymptotic regime");
    if (!(psucc > 0.0)) throw guard_error("scaling_exponent: success probabilities must be positive");
  }
  return loglog_slope(lambda_p);
}

}  // namespace enconc
