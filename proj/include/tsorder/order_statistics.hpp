#pragma once

#include <span>

#include "tsorder/continuous.hpp"
#include "tsorder/pmf.hpp"
#include "tsorder/transforms.hpp"

namespace tsorder {

/// A random-sample-size order-statistic problem: the i-th order statistic
/// of a sample of size rho(N) for nabla N, or the gamma-th fractional
/// order statistic anchored at n = ceil(gamma) for delta N.
struct OsSpec {
  double index = 1.0;  // integer i or real gamma
  ContinuousDist parent;
  LatticePmf size_dist;
  int fos_anchor = 0;  // n with n-1 < gamma <= n (fractional mode only)
  bool fractional = false;

  static OsSpec integer_os(int i, ContinuousDist parent, LatticePmf nabla_size);
  static OsSpec fractional_os(double gamma, ContinuousDist parent,
                              LatticePmf delta_size);
};

/// Diagnostics for the fractional density: probability mass attached to
/// support points that cannot produce a valid conditional law.
struct FosDiagnostics {
  double excluded_mass = 0.0;
  double conditioning_prob = 0.0;  // P(N >= gamma)
};

/// Density of the i-th order statistic under random sample size, through
/// the i-th transform derivative evaluated at F(x).
double os_pdf_random_size(const OsSpec& spec, double x);

/// Distribution function by the conditional binomial mixture.  The value
/// approaches P(N >= i+1)/P(N >= i) as x grows: the event {N = i} has no
/// i-th order statistic and survives as defect mass under the verbatim
/// conditioning on {N >= i}.
double os_cdf_random_size(const OsSpec& spec, double x);

/// Density of the gamma-th fractional order statistic.
double fos_pdf_random_size(const OsSpec& spec, double x,
                           FosDiagnostics* diag = nullptr);

/// Distribution function of the fractional order statistic (regularized
/// incomplete beta mixture).
double fos_cdf_random_size(const OsSpec& spec, double x,
                           FosDiagnostics* diag = nullptr);

/// Densities of U = F(X) on (0,1); distribution-free in the parent.
double os_pdf_u(const OsSpec& spec, double u);
double os_cdf_u(const OsSpec& spec, double u);
double fos_pdf_u(const OsSpec& spec, double u, FosDiagnostics* diag = nullptr);
double fos_cdf_u(const OsSpec& spec, double u, FosDiagnostics* diag = nullptr);

/// Random extremes for nabla sample size: survival of the minimum is the
/// transform of N at F(x); densities follow by differentiation.
double extreme_min_sf(const LatticePmf& n, const ContinuousDist& parent,
                      double x);
double extreme_min_pdf(const LatticePmf& n, const ContinuousDist& parent,
                       double x);
double extreme_max_pdf(const LatticePmf& n, const ContinuousDist& parent,
                       double x);

/// Backward/forward difference operators applied to a sorted sequence of
/// points in (0,1), 1-indexed.  Integer order reproduces iterated first
/// differences exactly; fractional delta positions are interpolated
/// linearly between adjacent entries.
double spacing_operator(std::span<const double> u, Convention kind,
                        double order, int i);

/// Uniform quantile grid on (0,1) used for distribution-free comparisons.
std::vector<double> quantile_grid(int points = 1024);

}  // namespace tsorder
