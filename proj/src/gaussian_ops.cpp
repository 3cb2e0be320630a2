#include "enconc/gaussian_ops.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace enconc {

namespace {

// factorials up to 40! fit a 64-bit-mantissa long double exactly enough
long double factorial(int n) {
  long double f = 1.0L;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binom(int n, int k) {
  long double b = 1.0L;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return static_cast<double>(b);
}

Mat cropped_exp(const Mat& generator, int cutoff) {
  Mat u = generator.exp();  // scaling-and-squaring, Pade core
  return u.topLeftCorner(cutoff + 1, cutoff + 1);
}

}  // namespace

FockOperator displacement_operator(cplx alpha, int cutoff) {
  if (cutoff < 1) throw guard_error("displacement_operator: cutoff must be >= 1");
  if (std::abs(alpha) > 2.0)
    throw guard_error("displacement_operator: |alpha| > 2 -- truncation error at the working cutoff is unacceptable");
  const int big = cutoff + kGaussianPad;
  const Mat a = annihilation(big).m;
  Mat g = alpha * a.adjoint() - std::conj(alpha) * a;
  return {cropped_exp(g, cutoff), 1, cutoff};
}

FockOperator squeezing_operator(double s, int cutoff) {
  if (cutoff < 1) throw guard_error("squeezing_operator: cutoff must be >= 1");
  if (std::abs(s) > 1.5)
    throw guard_error("squeezing_operator: |s| > 1.5 -- truncation error at the working cutoff is unacceptable");
  const int big = cutoff + kGaussianPad;
  const Mat a = annihilation(big).m;
  const Mat ad = a.adjoint();
  Mat g = 0.5 * s * (ad * ad - a * a);
  return {cropped_exp(g, cutoff), 1, cutoff};
}

FockOperator beam_splitter_unitary(double reflectance, int cutoff) {
  if (cutoff < 1) throw guard_error("beam_splitter_unitary: cutoff must be >= 1");
  if (!(reflectance >= 0.0 && reflectance <= 1.0))
    throw guard_error("beam_splitter_unitary: reflectance must lie in [0, 1]");
  const int d = cutoff + 1;
  const double c = std::sqrt(1.0 - reflectance);
  const double s = std::sqrt(reflectance);
  Mat u = Mat::Zero(d * d, d * d);
  // |m,n> -> sum_p A_p |p, N-p| within each total-photon block N = m+n
  for (int N = 0; N <= 2 * cutoff; ++N) {
    const int lo = std::max(0, N - cutoff);
    const int hi = std::min(N, cutoff);
    for (int m = lo; m <= hi; ++m) {
      const int n = N - m;
      for (int p = lo; p <= hi; ++p) {
        const int q = N - p;
        double sum = 0.0;
        for (int i = std::max(0, p - n); i <= std::min(m, p); ++i) {
          const int j = p - i;
          double term = binom(m, i) * binom(n, j) *
                        std::pow(c, i + n - j) * std::pow(s, m - i + j);
          if ((m - i) % 2 != 0) term = -term;
          sum += term;
        }
        const long double norm =
            std::sqrt(factorial(p) * factorial(q) / (factorial(m) * factorial(n)));
        u(p * d + q, m * d + n) = static_cast<double>(norm) * sum;
      }
    }
  }
  return {std::move(u), 2, cutoff};
}

}  // namespace enconc
