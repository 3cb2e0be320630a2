#include "doctest.h"

#include <cmath>

#include "enconc/gaussian_ops.hpp"
#include "test_support.hpp"

using namespace enconc;
using testutil::max_abs_diff;
using testutil::taylor_exp_apply;

namespace {

double block_max(const Mat& m, int n) {
  return m.topLeftCorner(n + 1, n + 1).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("displacement of vacuum is a coherent state") {
  const cplx alpha(0.3, 0.0);
  auto d = displacement_operator(alpha, 10);
  REQUIRE(d.dim() == 11);
  // <0|D(0.3)|0> = exp(-|alpha|^2/2)
  CHECK(std::abs(d.m(0, 0) - cplx(0.9559974818331)) < 1e-12);
  // full coherent column alpha^n exp(-|alpha|^2/2)/sqrt(n!)
  double fact = 1.0;
  for (int n = 0; n <= 10; ++n) {
    if (n > 0) fact *= n;
    cplx expect = std::exp(-0.045) * std::pow(alpha, n) / std::sqrt(fact);
    CHECK(std::abs(d.m(n, 0) - expect) < 1e-12);
  }
}

TEST_CASE("displacement matches a Taylor-series exponential oracle") {
  const cplx alpha(0.45, -0.2);
  const int big = 40;  // oracle space large enough that truncation is moot
  Mat a = annihilation(big).m;
  Mat g = alpha * a.adjoint() - std::conj(alpha) * a;
  auto d = displacement_operator(alpha, 10);
  for (int col : {0, 1, 4}) {
    Vec e = Vec::Zero(big + 1);
    e(col) = 1.0;
    Vec oracle = taylor_exp_apply(g, e);
    CHECK(max_abs_diff(Vec(d.m.col(col).head(9)), Vec(oracle.head(9))) < 1e-10);
  }
}

TEST_CASE("squeezing of vacuum") {
  const double s = 0.4;
  auto sq = squeezing_operator(s, 10);
  // <0|S(0.4)|0> = 1/sqrt(cosh 0.4)
  CHECK(std::abs(sq.m(0, 0) - cplx(0.9617730771370943)) < 1e-12);
  // only even levels populated
  for (int n = 1; n <= 9; n += 2) CHECK(std::abs(sq.m(n, 0)) < 1e-14);
  // <2|S|0> / <0|S|0> = tanh(s)/sqrt(2)
  cplx ratio = sq.m(2, 0) / sq.m(0, 0);
  CHECK(std::abs(ratio - cplx(std::tanh(s) / std::sqrt(2.0))) < 1e-12);
  // Taylor oracle on the vacuum column
  const int big = 40;
  Mat a = annihilation(big).m;
  Mat ad = a.adjoint();
  Mat g = 0.5 * s * (ad * ad - a * a);
  Vec e = Vec::Zero(big + 1);
  e(0) = 1.0;
  Vec oracle = taylor_exp_apply(g, e);
  CHECK(max_abs_diff(Vec(sq.m.col(0).head(9)), Vec(oracle.head(9))) < 1e-8);
}

TEST_CASE("zero-parameter operators are exact identities") {
  CHECK(max_abs_diff(displacement_operator(cplx(0.0, 0.0), 6).m, Mat::Identity(7, 7)) == 0.0);
  CHECK(max_abs_diff(squeezing_operator(0.0, 6).m, Mat::Identity(7, 7)) == 0.0);
  CHECK(max_abs_diff(beam_splitter_unitary(0.0, 5).m, Mat::Identity(36, 36)) == 0.0);
}

TEST_CASE("pad-then-crop entries are already converged at the requested cutoff") {
  // the retained block must not change when the requested cutoff (and with it
  // the internal padding headroom) grows
  Mat d10 = displacement_operator(cplx(0.7, 0.2), 10).m;
  Mat d30 = displacement_operator(cplx(0.7, 0.2), 30).m;
  CHECK((d10 - d30.topLeftCorner(11, 11)).cwiseAbs().maxCoeff() < 1e-10);
  Mat s10 = squeezing_operator(0.1, 10).m;
  Mat s30 = squeezing_operator(0.1, 30).m;
  CHECK((s10 - s30.topLeftCorner(11, 11)).cwiseAbs().maxCoeff() < 1e-9);
  // squeezing tails reach further; at s = 0.15 the block is converged to ~1e-7
  Mat t10 = squeezing_operator(0.15, 10).m;
  Mat t30 = squeezing_operator(0.15, 30).m;
  CHECK((t10 - t30.topLeftCorner(11, 11)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("displacement unitarity and conjugation on interior blocks") {
  // the cropped matrix is near-unitary only on blocks well below the crop;
  // the bounds below are measured worst cases with an order of margin
  const int c = 20;
  Mat d = displacement_operator(cplx(0.7, 0.0), c).m;
  Mat uu = d.adjoint() * d - Mat::Identity(c + 1, c + 1);
  CHECK(block_max(uu, 8) < 1e-8);  // measured 1.1e-9

  // D(a)^dag a D(a) = a + a*I on indices <= 8 needs crop >= 22 at |a| = 0.7
  const int cc = 22;
  Mat d2 = displacement_operator(cplx(0.7, 0.0), cc).m;
  Mat a = annihilation(cc).m;
  Mat defect = d2.adjoint() * a * d2 - (a + 0.7 * Mat::Identity(cc + 1, cc + 1));
  CHECK(block_max(defect, 8) < 1e-8);  // measured 7.0e-11

  // complex argument variant
  const cplx al(0.3, 0.4);
  Mat d3 = displacement_operator(al, cc).m;
  Mat defect3 = d3.adjoint() * a * d3 - (a + al * Mat::Identity(cc + 1, cc + 1));
  CHECK(block_max(defect3, 8) < 1e-8);
}

TEST_CASE("displacement round trip on low-lying states") {
  const int c = 20;
  Mat rt = displacement_operator(cplx(0.7, 0.0), c).m *
               displacement_operator(cplx(-0.7, 0.0), c).m -
           Mat::Identity(c + 1, c + 1);
  // columns 0..2: support far below the crop
  CHECK(rt.leftCols(3).cwiseAbs().maxCoeff() < 1e-8);  // measured 1.5e-11
}

TEST_CASE("squeezing conjugation S^dag a S = a cosh s + a^dag sinh s") {
  // squeezing tails decay much more slowly than displacement tails, so the
  // crop must sit far above the compared block; bounds again measured
  struct Case {
    double s;
    int crop;
    double tol;
  };
  for (auto [s, crop, tol] : {Case{0.15, 30, 1e-10}, Case{0.4, 45, 1e-8}}) {
    Mat sq = squeezing_operator(s, crop).m;
    Mat a = annihilation(crop).m;
    Mat defect = sq.adjoint() * a * sq -
                 (std::cosh(s) * a + std::sinh(s) * a.transpose());
    CHECK(block_max(defect, 8) < tol);
  }
}

TEST_CASE("squeezing round trip on low-lying states") {
  const int c = 20;
  Mat rt = squeezing_operator(0.1, c).m * squeezing_operator(-0.1, c).m -
           Mat::Identity(c + 1, c + 1);
  CHECK(rt.leftCols(3).cwiseAbs().maxCoeff() < 1e-8);  // measured 3.7e-10
}

TEST_CASE("guards on displacement and squeezing strength") {
  CHECK_THROWS_AS(displacement_operator(cplx(2.1, 0.0), 10), guard_error);
  CHECK_THROWS_AS(displacement_operator(cplx(1.5, 1.5), 10), guard_error);
  CHECK_THROWS_AS(squeezing_operator(1.6, 10), guard_error);
  CHECK_THROWS_AS(squeezing_operator(-1.6, 10), guard_error);
  CHECK_THROWS_AS(displacement_operator(cplx(0.1, 0.0), 0), guard_error);
  CHECK_THROWS_AS(beam_splitter_unitary(-0.1, 5), guard_error);
  CHECK_THROWS_AS(beam_splitter_unitary(1.1, 5), guard_error);
  // boundary values are allowed
  CHECK_NOTHROW(displacement_operator(cplx(2.0, 0.0), 10));
  CHECK_NOTHROW(squeezing_operator(1.5, 10));
  CHECK_NOTHROW(beam_splitter_unitary(0.0, 5));
  CHECK_NOTHROW(beam_splitter_unitary(1.0, 5));
}

TEST_CASE("beam splitter single-photon block") {
  const double r = 0.1;
  auto u = beam_splitter_unitary(r, 5);
  const int d = 6;
  // |1,0> -> sqrt(1-R)|1,0> - sqrt(R)|0,1>
  CHECK(std::abs(u.m(1 * d + 0, 1 * d + 0) - cplx(0.9486832980505138)) < 1e-12);
  CHECK(std::abs(u.m(0 * d + 1, 1 * d + 0) - cplx(-0.31622776601683794)) < 1e-12);
  // |0,1> -> sqrt(R)|1,0> + sqrt(1-R)|0,1>
  CHECK(std::abs(u.m(1 * d + 0, 0 * d + 1) - cplx(0.31622776601683794)) < 1e-12);
  CHECK(std::abs(u.m(0 * d + 1, 0 * d + 1) - cplx(0.9486832980505138)) < 1e-12);
  // vacuum is untouched
  CHECK(u.m(0, 0) == cplx(1.0));
}

TEST_CASE("beam splitter conserves photon number exactly") {
  const int c = 5;
  const int d = c + 1;
  auto u = beam_splitter_unitary(0.37, c);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          if (m + n != p + q) CHECK(u.m(p * d + q, m * d + n) == cplx(0.0));
}

TEST_CASE("beam splitter is unitary on complete photon-number blocks") {
  const int c = 6;
  const int d = c + 1;
  Mat u = beam_splitter_unitary(0.37, c).m;
  Mat g = u.adjoint() * u - Mat::Identity(d * d, d * d);
  double worst = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          if (m + n <= c && p + q <= c)
            worst = std::max(worst, std::abs(g(m * d + n, p * d + q)));
  CHECK(worst < 1e-12);
}

TEST_CASE("beam splitter Heisenberg action on complete columns") {
  const int c = 6;
  const int d = c + 1;
  const double r = 0.3;
  Mat u = beam_splitter_unitary(r, c).m;
  Mat a1 = embed(annihilation(c), 1, 2).m;
  Mat a2 = embed(annihilation(c), 2, 2).m;
  Mat lhs1 = u.adjoint() * a1 * u;
  Mat rhs1 = std::sqrt(1.0 - r) * a1 + std::sqrt(r) * a2;
  Mat lhs2 = u.adjoint() * a2 * u;
  Mat rhs2 = std::sqrt(1.0 - r) * a2 - std::sqrt(r) * a1;
  double worst = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      if (m + n <= c) {
        worst = std::max(worst, (lhs1.col(m * d + n) - rhs1.col(m * d + n)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (lhs2.col(m * d + n) - rhs2.col(m * d + n)).cwiseAbs().maxCoeff());
      }
  CHECK(worst < 1e-12);
}

TEST_CASE("beam splitter at R=1/2 shows the two-photon interference dip") {
  const int c = 4;
  const int d = c + 1;
  Mat u = beam_splitter_unitary(0.5, c).m;
  Vec in = Vec::Zero(d * d);
  in(1 * d + 1) = 1.0;  // |1,1>
  Vec out = u * in;
  CHECK(std::abs(out(1 * d + 1)) < 1e-14);                              // no coincidence
  CHECK(std::abs(out(2 * d + 0) - cplx(std::sqrt(0.5))) < 1e-12);       // |2,0>
  CHECK(std::abs(out(0 * d + 2) - cplx(-std::sqrt(0.5))) < 1e-12);      // |0,2>
}
