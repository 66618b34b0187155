#include "mislabel/stats.hpp"

#include <cmath>
#include <limits>

#include "mislabel/dataset.hpp"

namespace mislabel {

namespace {

// Continued fraction for the incomplete beta (modified Lentz method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error("incomplete beta requires positive parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double incomplete_beta_inverse(double a, double b, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  // Bisection; 100 halvings reach machine precision.
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_incomplete_beta(a, b, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double student_t_two_sided_p(double t, double df) {
  if (df <= 0.0) throw Error("t-test requires positive degrees of freedom");
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

double binomial_upper_bound(double errors, double n, double cf) {
  if (n <= 0.0) return 0.0;
  if (errors >= n) return 1.0;
  if (errors <= 0.0) return 1.0 - std::pow(cf, 1.0 / n);
  // Smallest p with P(X <= errors | n, p) = cf, i.e.
  // I_p(errors + 1, n - errors) = 1 - cf.
  return incomplete_beta_inverse(errors + 1.0, n - errors, 1.0 - cf);
}

double binomial_upper_tail(int m, int k, double p) {
  if (k > m) return 0.0;
  if (k <= 0) return 1.0;
  // Pascal's triangle row for exact small-m binomial coefficients.
  std::vector<double> coeff(static_cast<std::size_t>(m) + 1, 0.0);
  coeff[0] = 1.0;
  for (int row = 1; row <= m; ++row) {
    for (int j = row; j >= 1; --j) coeff[j] += coeff[j - 1];
  }
  double total = 0.0;
  for (int j = k; j <= m; ++j) {
    total += coeff[static_cast<std::size_t>(j)] * std::pow(p, j) *
             std::pow(1.0 - p, m - j);
  }
  return total;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double paired_t_test(const std::vector<double>& a,
                     const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("paired t-test: length mismatch");
  if (a.size() < 2) throw Error("paired t-test needs at least two pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double md = mean(d);
  const double sd = sample_sd(d);
  if (sd == 0.0) return md == 0.0 ? 1.0 : 0.0;
  const double n = static_cast<double>(d.size());
  const double t = md / (sd / std::sqrt(n));
  return student_t_two_sided_p(t, n - 1.0);
}

}  // namespace mislabel
