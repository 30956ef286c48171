#include "tsorder/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsorder::num {

double pow1p(double t, double e) {
  if (t <= -1.0) throw std::domain_error("pow1p: requires t > -1");
  return std::exp(e * std::log1p(t));
}

double pow1m(double s, double e) {
  if (s > 1.0) throw std::domain_error("pow1m: requires s <= 1");
  if (s == 1.0) return e == 0.0 ? 1.0 : 0.0;
  return std::exp(e * std::log1p(-s));
}

double lbeta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double lchoose(double n, int k) {
  if (k < 0) throw std::domain_error("lchoose: requires k >= 0");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double beta_pdf(double u, double a, double b) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) -
                  lbeta(a, b));
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double x, double a, double b) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("reg_inc_beta: requires a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(x, a, b) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - lbeta(b, a)) *
                   betacf(1.0 - x, b, a) / b;
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, a, b);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double ks_distance(std::span<const double> empirical_cdf,
                   std::span<const double> reference_cdf) {
  if (empirical_cdf.size() != reference_cdf.size()) {
    throw std::invalid_argument("ks_distance: size mismatch");
  }
  double d = 0.0;
  for (size_t i = 0; i < empirical_cdf.size(); ++i) {
    d = std::max(d, std::abs(empirical_cdf[i] - reference_cdf[i]));
  }
  return d;
}

double ks_critical(double alpha, double n) {
  const double c = alpha <= 0.01 ? 1.628 : 1.358;
  return c / std::sqrt(n);
}

double ks_critical_two_sample(double alpha, double n, double m) {
  const double c = alpha <= 0.01 ? 1.628 : 1.358;
  return c * std::sqrt((n + m) / (n * m));
}

double ks_two_sample(std::span<const double> sorted_a,
                     std::span<const double> sorted_b) {
  const size_t n = sorted_a.size();
  const size_t m = sorted_b.size();
  if (n == 0 || m == 0) throw std::invalid_argument("ks_two_sample: empty");
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    const double x = std::min(sorted_a[i], sorted_b[j]);
    while (i < n && sorted_a[i] <= x) ++i;
    while (j < m && sorted_b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n -
                             static_cast<double>(j) / m));
  }
  return d;
}

}  // namespace tsorder::num
