#include "doctest.h"

#include <cmath>

#include "enconc/measures.hpp"
#include "enconc/optimize.hpp"

using namespace enconc;

TEST_CASE("loglog_slope recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.5, 1.0, 2.0, 4.0}) pts.emplace_back(x, 3.7 * std::pow(x, 2.5));
  CHECK(std::abs(loglog_slope(pts) - 2.5) < 1e-12);

  CHECK_THROWS_AS(loglog_slope({{1.0, 2.0}}), guard_error);
  CHECK_THROWS_AS(loglog_slope({{1.0, 2.0}, {2.0, -1.0}}), guard_error);
  CHECK_THROWS_AS(loglog_slope({{1.0, 2.0}, {1.0, 3.0}}), guard_error);
}

TEST_CASE("scaling_exponent enforces the asymptotic regime") {
  std::vector<std::pair<double, double>> good;
  for (double lam : {0.02, 0.03, 0.04, 0.05}) good.emplace_back(lam, lam * lam);
  CHECK(std::abs(scaling_exponent(good) - 2.0) < 1e-12);

  auto three = good;
  three.pop_back();
  CHECK_THROWS_AS(scaling_exponent(three), guard_error);

  auto big = good;
  big.emplace_back(0.07, 0.0049);
  CHECK_THROWS_AS(scaling_exponent(big), guard_error);

  auto dead = good;
  dead[1].second = 0.0;
  CHECK_THROWS_AS(scaling_exponent(dead), guard_error);
}

TEST_CASE("optimal displacement tracks sqrt(lambda) in the weak-squeezing limit") {
  ProtocolParams p;
  p.lambda = 0.01;
  p.reflectance = 0.1;
  p.cutoff = 8;
  auto r = optimize_displacement(p);
  CHECK(std::abs(r.alpha_opt - 0.1) < 0.01);  // within 10% of sqrt(lambda)
  CHECK(r.bracket_hi - r.bracket_lo <= 1e-4);
  CHECK(r.alpha_opt >= r.bracket_lo);
  CHECK(r.alpha_opt <= r.bracket_hi);
  CHECK(r.iterations > 0);
  CHECK(r.p_succ > 0.0);
  CHECK(r.e_n > 0.9);

  // deterministic: the whole search replays bit for bit
  auto r2 = optimize_displacement(p);
  CHECK(r.alpha_opt == r2.alpha_opt);
  CHECK(r.e_n == r2.e_n);
}

TEST_CASE("optimized displacement beats plain subtraction") {
  ProtocolParams p;
  p.lambda = 0.15;
  p.reflectance = 0.1;
  p.cutoff = 8;
  auto r = optimize_displacement(p);
  ProtocolParams sub = p;
  sub.local_op = LocalOp::off();
  const double en_sub = log_negativity(run_realistic(sub).rho_normalized).log_negativity;
  CHECK(r.e_n > en_sub + 0.1);
}

TEST_CASE("optimizer guards") {
  ProtocolParams zero;
  zero.lambda = 0.0;
  CHECK_THROWS_AS(optimize_displacement(zero), guard_error);

  // R = 0: the tap never clicks, every grid point dies of zero success
  ProtocolParams silent;
  silent.lambda = 0.1;
  silent.reflectance = 0.0;
  silent.cutoff = 6;
  CHECK_THROWS_AS(optimize_displacement(silent), numeric_error);
}

TEST_CASE("sweep over a single parameter") {
  ProtocolParams base;
  base.reflectance = 0.1;
  base.cutoff = 8;
  auto table = sweep(base, {{"lambda", 0.1, 0.2, 0.1}}, false);
  REQUIRE(table.columns == std::vector<std::string>{"lambda", "E_N", "P_succ"});
  REQUIRE(table.rows.size() == 2);
  for (const auto& row : table.rows) {
    CHECK(row.error.empty());
    REQUIRE(row.values.size() == 3);
  }
  CHECK(table.rows[0].values[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(table.rows[1].values[0] == doctest::Approx(0.2).epsilon(1e-12));
  // more squeezing, more entanglement and more clicks
  CHECK(table.rows[1].values[1] > table.rows[0].values[1]);
  CHECK(table.rows[1].values[2] > table.rows[0].values[2]);
}

TEST_CASE("cartesian sweep order: first grid outermost, last fastest") {
  ProtocolParams base;
  base.cutoff = 6;
  auto table = sweep(base, {{"lambda", 0.1, 0.15, 0.05}, {"reflectance", 0.05, 0.15, 0.05}}, false);
  REQUIRE(table.rows.size() == 6);
  const double lam[] = {0.1, 0.1, 0.1, 0.15, 0.15, 0.15};
  const double refl[] = {0.05, 0.1, 0.15, 0.05, 0.1, 0.15};
  for (int i = 0; i < 6; ++i) {
    CHECK(table.rows[i].values[0] == doctest::Approx(lam[i]).epsilon(1e-12));
    CHECK(table.rows[i].values[1] == doctest::Approx(refl[i]).epsilon(1e-12));
    CHECK(table.rows[i].error.empty());
  }
}

TEST_CASE("sweep rows that trip a guard are tagged, not dropped") {
  ProtocolParams base;
  base.lambda = 0.15;
  base.cutoff = 6;
  auto table = sweep(base, {{"alpha", 2.5, 2.5, 1.0}}, false);
  REQUIRE(table.rows.size() == 1);
  CHECK_FALSE(table.rows[0].error.empty());
  CHECK(table.rows[0].values[0] == doctest::Approx(2.5).epsilon(1e-12));  // swept value kept
  CHECK(std::isnan(table.rows[0].values[1]));
  CHECK(std::isnan(table.rows[0].values[2]));

  // a good neighbour in the same sweep still succeeds
  auto mixed = sweep(base, {{"alpha", 0.3, 0.5, 0.2}}, false);
  REQUIRE(mixed.rows.size() == 2);
  CHECK(mixed.rows[0].error.empty());
  CHECK(mixed.rows[1].error.empty());
}

TEST_CASE("sweep with alpha optimization emits the three-curve comparison") {
  ProtocolParams base;
  base.reflectance = 0.1;
  base.cutoff = 8;
  auto table = sweep(base, {{"lambda", 0.1, 0.1, 0.1}}, true);
  REQUIRE(table.columns == std::vector<std::string>{"lambda", "E_N_input", "E_N_subtracted",
                                                    "E_N_displaced", "P_succ_subtracted",
                                                    "P_succ_displaced", "alpha_opt"});
  REQUIRE(table.rows.size() == 1);
  const auto& v = table.rows[0].values;
  REQUIRE(v.size() == 7);
  CHECK(table.rows[0].error.empty());
  CHECK(v[3] > v[2]);           // displacement beats subtraction
  CHECK(v[3] > v[1]);           // and concentrates past the input
  CHECK(v[2] > v[1]);           // subtraction concentrates too at this lambda
  CHECK(v[6] > 0.0);
  CHECK(v[6] <= 1.0);
  CHECK(v[5] > 0.0);
}

TEST_CASE("sweep conflict and input guards") {
  ProtocolParams base;
  CHECK_THROWS_AS(sweep(base, {}, false), guard_error);
  CHECK_THROWS_AS(sweep(base, {{"alpha", 0.1, 0.2, 0.1}}, true), guard_error);
  CHECK_THROWS_AS(sweep(base, {{"frequency", 0.1, 0.2, 0.1}}, false), guard_error);
  CHECK_THROWS_AS(sweep(base, {{"lambda", 0.1, 0.2, 0.0}}, false), guard_error);
  CHECK_THROWS_AS(sweep(base, {{"lambda", 0.2, 0.1, 0.05}}, false), guard_error);
  CHECK_THROWS_AS(sweep(base, {{"alpha", 0.1, 0.2, 0.1}, {"squeezing", 0.1, 0.2, 0.1}}, false),
                  guard_error);
}
