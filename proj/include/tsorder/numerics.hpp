#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tsorder::num {

/// (1+t)^e computed through log1p; exact 0 on deep underflow.
double pow1p(double t, double e);

/// (1-s)^e for s < 1 computed through log1p.
double pow1m(double s, double e);

/// log of the beta function B(a, b).
double lbeta(double a, double b);

/// log binomial coefficient C(n, k) for real n, integer 0 <= k.
double lchoose(double n, int k);

/// Density of Beta(a, b) at u in (0, 1).
double beta_pdf(double u, double a, double b);

/// Regularized incomplete beta I_x(a, b) via the standard continued
/// fraction (Lentz), with the symmetry switch at x > (a+1)/(a+b+2).
double reg_inc_beta(double x, double a, double b);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-9, int max_depth = 40);

/// One-sample KS distance between an empirical cdf sampled at `points`
/// and a reference cdf, both tabulated on the same points.
double ks_distance(std::span<const double> empirical_cdf,
                   std::span<const double> reference_cdf);

/// One-sample KS critical value c(alpha)/sqrt(n); alpha in {0.05, 0.01}.
double ks_critical(double alpha, double n);

/// Two-sample KS critical value c(alpha) * sqrt((n+m)/(n*m)).
double ks_critical_two_sample(double alpha, double n, double m);

/// Exact two-sample KS statistic from two sorted samples.
double ks_two_sample(std::span<const double> sorted_a,
                     std::span<const double> sorted_b);

}  // namespace tsorder::num
