#include "tsorder/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tsorder/numerics.hpp"

namespace tsorder {

namespace {

// Product form of the rising factorial for integer j; unlike
// rising_factorial this admits x <= 0 (where leading factors may vanish
// or flip sign, which the termwise derivative formulas rely on).
double rising_prod(double x, int j) {
  double out = 1.0;
  for (int t = 0; t < j; ++t) out *= x + t;
  return out;
}

double falling_prod(double x, int j) {
  double out = 1.0;
  for (int t = 0; t < j; ++t) out *= x - t;
  return out;
}

void check_domain(Convention c, double s, bool allow_zero) {
  const bool ok = c == Convention::delta
                      ? (s > 0.0 || (allow_zero && s == 0.0))
                      : (s < 1.0 && (s > 0.0 || (allow_zero && s == 0.0)));
  if (!ok) {
    throw std::domain_error("transform argument outside domain");
  }
}

std::shared_ptr<const LatticePmf> share(const LatticePmf& x) {
  return std::make_shared<const LatticePmf>(x);
}

}  // namespace

EvalGrid EvalGrid::standard(Convention c, int points) {
  if (points < 8) throw std::invalid_argument("EvalGrid: too few points");
  EvalGrid g;
  g.convention = c;
  g.s.resize(points);
  if (c == Convention::delta) {
    g.lo = 1e-4;
    g.hi = 1e4;
    const double llo = std::log(g.lo);
    const double lhi = std::log(g.hi);
    for (int i = 0; i < points; ++i) {
      g.s[i] = std::exp(llo + (lhi - llo) * i / (points - 1.0));
    }
  } else {
    g.lo = 1e-4;
    g.hi = 1.0 - 1e-4;
    for (int i = 0; i < points; ++i) {
      g.s[i] = g.lo + (g.hi - g.lo) * i / (points - 1.0);
    }
  }
  return g;
}

TransformFn::TransformFn(Kind kind, Convention convention,
                         std::shared_ptr<const LatticePmf> source,
                         std::function<double(double)> eval, int order,
                         double gamma, bool allow_zero)
    : kind_(kind),
      convention_(convention),
      source_(std::move(source)),
      eval_(std::move(eval)),
      order_(order),
      gamma_(gamma),
      allow_zero_(allow_zero) {}

double TransformFn::operator()(double s) const {
  check_domain(convention_, s, allow_zero_);
  return eval_(s);
}

std::pair<double, double> TransformFn::domain() const {
  return convention_ == Convention::delta
             ? std::pair<double, double>{0.0, std::numeric_limits<double>::infinity()}
             : std::pair<double, double>{0.0, 1.0};
}

std::vector<double> TransformFn::eval_grid(const EvalGrid& grid) const {
  std::vector<double> out(grid.s.size());
  for (std::size_t i = 0; i < grid.s.size(); ++i) out[i] = (*this)(grid.s[i]);
  return out;
}

namespace {

// Shared Horner core: value(s) = base(s)^lead * sum_i coef[i] * r(s)^i
// where r = 1/(1+s) (delta) or 1-s (nabla).
struct SeriesData {
  Convention convention;
  double lead_exponent;  // exponent on (1+s) (delta, negated) or (1-s) (nabla)
  std::vector<double> coef;

  double eval(double s) const {
    double r, lead;
    if (convention == Convention::delta) {
      r = 1.0 / (1.0 + s);
      lead = num::pow1p(s, -lead_exponent);
    } else {
      r = 1.0 - s;
      lead = num::pow1m(s, lead_exponent);
    }
    // Horner from the high end
    double acc = 0.0;
    for (std::size_t i = coef.size(); i-- > 0;) acc = acc * r + coef[i];
    return lead * acc;
  }
};

TransformFn make_series(TransformFn::Kind kind,
                        std::shared_ptr<const LatticePmf> src,
                        SeriesData data, double sign, int order, double gamma) {
  const Convention c = data.convention;
  auto payload = std::make_shared<const SeriesData>(std::move(data));
  return TransformFn(
      kind, c, std::move(src),
      [payload, sign](double s) { return sign * payload->eval(s); }, order,
      gamma);
}

}  // namespace

TransformFn laplace(const LatticePmf& x) {
  auto src = share(x);
  SeriesData data;
  data.convention = x.convention();
  data.coef = x.probs();
  if (x.convention() == Convention::delta) {
    data.lead_exponent = x.offset() + 1.0;  // sigma of the first point
  } else {
    data.lead_exponent = 0.0;  // rho of the first point on {1,2,...}
  }
  return make_series(TransformFn::Kind::laplace, std::move(src),
                     std::move(data), 1.0, 0, 0.0);
}

TransformFn derivative_series(const LatticePmf& x, int i) {
  if (i < 1) throw std::domain_error("derivative order must be >= 1");
  if (i > 64) throw std::domain_error("derivative order limited to 64");
  auto src = share(x);
  SeriesData data;
  data.convention = x.convention();
  if (x.convention() == Convention::delta) {
    // term: rising(sigma(x), i) (1+s)^(-sigma(x)-i) p(x)
    data.lead_exponent = x.offset() + 1.0 + i;
    data.coef.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      data.coef[j] = rising_prod(sigma(x.point(j)), i) * x.prob(j);
    }
  } else {
    // term: falling(rho(x), i) (1-s)^(rho(x)-i) p(x); the first i points
    // annihilate, so the series starts i steps up the lattice.
    data.lead_exponent = 0.0;
    if (x.size() > static_cast<std::size_t>(i)) {
      data.coef.resize(x.size() - i);
      for (std::size_t j = i; j < x.size(); ++j) {
        data.coef[j - i] = falling_prod(rho(x.point(j)), i) * x.prob(j);
      }
    } else {
      data.coef = {0.0};
    }
  }
  return make_series(TransformFn::Kind::derivative, std::move(src),
                     std::move(data), 1.0, i, 0.0);
}

TransformFn derivative_k(const TransformFn& transform, int i) {
  if (transform.kind() != TransformFn::Kind::laplace) {
    throw std::invalid_argument("derivative_k: expects a Laplace transform");
  }
  TransformFn series = derivative_series(transform.source(), i);
  const double sign = i % 2 == 0 ? 1.0 : -1.0;
  auto payload = std::make_shared<const TransformFn>(std::move(series));
  return TransformFn(
      TransformFn::Kind::derivative, transform.convention(),
      std::make_shared<const LatticePmf>(transform.source()),
      [payload, sign](double s) { return sign * (*payload)(s); }, i, 0.0);
}

TransformFn fractional_derivative_series(const LatticePmf& x, double gamma,
                                         FracSupport support) {
  if (!(gamma > 0.0)) {
    throw std::domain_error("fractional_derivative_series: gamma must be > 0");
  }
  if (x.convention() != Convention::delta) {
    throw std::invalid_argument(
        "fractional_derivative_series: requires a delta pmf");
  }
  std::size_t start = 0;
  if (support == FracSupport::from_gamma) {
    while (start < x.size() && x.point(start) < gamma - 1e-12) ++start;
    if (start == x.size()) {
      throw std::domain_error(
          "fractional_derivative_series: no support at or above gamma");
    }
  }
  auto src = share(x);
  SeriesData data;
  data.convention = Convention::delta;
  data.lead_exponent = x.point(start) + 1.0 + gamma;
  data.coef.resize(x.size() - start);
  for (std::size_t j = start; j < x.size(); ++j) {
    data.coef[j - start] = rising_factorial(sigma(x.point(j)), gamma) * x.prob(j);
  }
  return make_series(TransformFn::Kind::fractional, std::move(src),
                     std::move(data), 1.0, 0, gamma);
}

std::pair<TransformFn, TransformFn> lstar_lstarstar(const LatticePmf& x) {
  auto lap = std::make_shared<const TransformFn>(laplace(x));
  const Convention c = x.convention();
  const double alpha_m1 = c == Convention::delta ? x.offset() : 0.0;
  auto src1 = share(x);
  auto src2 = src1;
  auto denom = [c, alpha_m1](double s) {
    return c == Convention::delta ? s * num::pow1p(s, alpha_m1) : s;
  };
  TransformFn lstar(
      TransformFn::Kind::lstar, c, std::move(src1),
      [lap, denom](double s) { return (*lap)(s) / denom(s); }, 0, 0.0,
      /*allow_zero=*/false);
  TransformFn lstarstar(
      TransformFn::Kind::lstarstar, c, std::move(src2),
      [lap, denom](double s) { return (1.0 - (*lap)(s)) / denom(s); }, 0, 0.0,
      /*allow_zero=*/false);
  return {std::move(lstar), std::move(lstarstar)};
}

TransformFn psi_density(const LatticePmf& x) {
  // finite mean required; the moment helpers raise truncation_error when
  // the stored support cannot support the sum
  if (x.convention() == Convention::delta) {
    (void)nabla_moment(x, 1);
  } else {
    (void)delta_moment(x, 1);
  }
  TransformFn d1 = derivative_series(x, 1);
  auto payload = std::make_shared<const TransformFn>(std::move(d1));
  return TransformFn(
      TransformFn::Kind::psi, x.convention(), share(x),
      [payload](double s) { return (*payload)(s); }, 1, 0.0);
}

namespace {

std::vector<double> reliability_sequence_nabla(const LatticePmf& x, double s,
                                               int nmax) {
  if (!(s > 0.0 && s < 1.0)) {
    throw std::domain_error("reliability_sequence: nabla requires 0 < s < 1");
  }
  // L**(s) = sum_j (1-s)^j Fbar(j+1) with Fbar(t) = P(X > t); each
  // derivative acts termwise on the power series in (1-s).
  const double w = 1.0 - s;
  std::vector<double> fbar(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) fbar[j] = x.survival_after(j);

  std::vector<double> out(nmax + 1, 0.0);
  out[0] = 1.0;
  double lead = s;  // s^n / (n-1)!
  for (int n = 1; n <= nmax; ++n) {
    double sum = 0.0;
    double wpow = 1.0;  // w^(j-n+1) starting at j = n-1
    for (std::size_t j = n - 1; j < fbar.size(); ++j) {
      sum += falling_prod(static_cast<double>(j), n - 1) * wpow * fbar[j];
      wpow *= w;
    }
    out[n] = lead * sum;
    lead *= s / n;
  }
  return out;
}

std::vector<double> reliability_sequence_delta(const LatticePmf& x, double s,
                                               int nmax) {
  if (!(s > 0.0)) {
    throw std::domain_error("reliability_sequence: delta requires s > 0");
  }
  // survival-series form of L**: sum_t (1+s)^(-sigma(t)) Fbar(t) over the
  // lattice; derivatives act termwise with positive coefficients
  std::vector<double> out(nmax + 1, 0.0);
  out[0] = 1.0;
  double lead = s;  // s^n / (n-1)!
  for (int n = 1; n <= nmax; ++n) {
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double fbar = x.survival_after(j);
      if (fbar == 0.0) break;
      const double c = sigma(x.point(j));
      sum += rising_prod(c, n - 1) * num::pow1p(s, -c - (n - 1.0)) * fbar;
    }
    out[n] = lead * sum;
    lead *= s / n;
  }
  return out;
}

}  // namespace

std::vector<double> reliability_sequence(const LatticePmf& x, double s,
                                         int nmax) {
  if (nmax < 0 || nmax > 64) {
    throw std::domain_error("reliability_sequence: nmax must be in [0, 64]");
  }
  std::vector<double> out = x.convention() == Convention::nabla
                                ? reliability_sequence_nabla(x, s, nmax)
                                : reliability_sequence_delta(x, s, nmax);
  if (x.convention() == Convention::nabla) {
    // a genuine survival sequence (binomial-count mixture); violations
    // can only come from floating point breakdown
    constexpr double tol = 1e-9;
    for (int n = 0; n <= nmax; ++n) {
      if (out[n] < -tol || out[n] > 1.0 + tol ||
          (n > 0 && out[n] > out[n - 1] + tol)) {
        throw numerical_error(
            "reliability_sequence: sequence left [0,1] or lost monotonicity "
            "at n=" +
            std::to_string(n));
      }
      out[n] = std::clamp(out[n], 0.0, 1.0);
      if (n > 0) out[n] = std::min(out[n], out[n - 1]);
    }
  } else {
    for (int n = 0; n <= nmax; ++n) {
      if (!std::isfinite(out[n]) || out[n] < 0.0) {
        throw numerical_error("reliability_sequence: breakdown at n=" +
                              std::to_string(n));
      }
    }
  }
  return out;
}

}  // namespace tsorder
