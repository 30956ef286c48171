#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "tsorder/pmf.hpp"

namespace tsorder {

/// Standard evaluation grid: 512 log-spaced points on [1e-4, 1e4] for
/// delta-domain transforms, 512 uniform points on [1e-4, 1-1e-4] for
/// nabla-domain transforms.  Densification multiplies the point count.
struct EvalGrid {
  Convention convention;
  std::vector<double> s;
  double lo = 0.0;
  double hi = 0.0;

  static EvalGrid standard(Convention c, int points = 512);
};

/// An evaluable scalar transform with an explicit domain.  Values are
/// immutable closures over immutable pmfs; evaluation is pure.
class TransformFn {
 public:
  enum class Kind { laplace, derivative, fractional, lstar, lstarstar, psi };

  double operator()(double s) const;

  Kind kind() const { return kind_; }
  Convention convention() const { return convention_; }
  /// Open domain: (0, inf) for delta, (0, 1) for nabla.
  std::pair<double, double> domain() const;
  int order() const { return order_; }
  double frac_order() const { return gamma_; }
  const LatticePmf& source() const { return *source_; }

  std::vector<double> eval_grid(const EvalGrid& grid) const;

  TransformFn(Kind kind, Convention convention,
              std::shared_ptr<const LatticePmf> source,
              std::function<double(double)> eval, int order = 0,
              double gamma = 0.0, bool allow_zero = true);

 private:
  Kind kind_;
  Convention convention_;
  std::shared_ptr<const LatticePmf> source_;
  std::function<double(double)> eval_;
  int order_;
  double gamma_;
  bool allow_zero_;
};

/// Lattice Laplace transform of a pmf: sum (1+t)^(-sigma(x)) p(x) over a
/// delta support (t > 0), or sum (1-t)^(rho(x)) p(x) over a nabla
/// support (0 < t < 1).
TransformFn laplace(const LatticePmf& x);

/// Exact termwise i-th derivative of a Laplace transform (signed value).
TransformFn derivative_k(const TransformFn& transform, int i);

/// The positive series (-1)^i L^(i)(s); equals |derivative_k| termwise.
TransformFn derivative_series(const LatticePmf& x, int i);

/// Summation support for the fractional derivative series.
enum class FracSupport {
  full,        // every stored support point
  from_gamma,  // display-literal: smallest support point >= gamma
};

/// Real-valued fractional derivative series of a delta transform:
/// D_gamma(t) = sum rising(sigma(x), gamma) (1+t)^(-sigma(x)-gamma) p(x).
/// `full` support keeps D continuous in gamma and equal to the integer
/// derivative series at integer gamma.
TransformFn fractional_derivative_series(const LatticePmf& x, double gamma,
                                         FracSupport support = FracSupport::full);

/// Transforms of the distribution function and the survival function:
/// delta L* = L/(s(1+s)^(alpha-1)), L** = (1-L)/(s(1+s)^(alpha-1));
/// nabla L* = L/s, L** = (1-L)/s.
std::pair<TransformFn, TransformFn> lstar_lstarstar(const LatticePmf& x);

/// Density of the mixture variable xi(X): psi = -L', nonnegative on the
/// transform domain.  Requires a finite first moment.
TransformFn psi_density(const LatticePmf& x);

/// Reliability sequence R_s(n) = (-1)^(n-1) s^n/(n-1)! d^(n-1) L**(s),
/// R_s(0) = 1, computed by exact termwise differentiation of the
/// survival-series form of L**.  Nabla sequences are genuine survival
/// functions (nonincreasing in [0,1]; violations beyond 1e-9 raise
/// numerical_error).  Delta sequences are nonnegative but generally not
/// monotone in n.
std::vector<double> reliability_sequence(const LatticePmf& x, double s,
                                         int nmax);

}  // namespace tsorder
