#include "tsorder/order_statistics.hpp"

#include <algorithm>
#include <cmath>

#include "tsorder/numerics.hpp"

namespace tsorder {

OsSpec OsSpec::integer_os(int i, ContinuousDist parent, LatticePmf nabla_size) {
  if (i < 1) throw std::domain_error("OsSpec: order-statistic index must be >= 1");
  if (nabla_size.convention() != Convention::nabla) {
    throw std::invalid_argument("OsSpec: integer mode requires a nabla size law");
  }
  return OsSpec{static_cast<double>(i), std::move(parent),
                std::move(nabla_size), 0, false};
}

OsSpec OsSpec::fractional_os(double gamma, ContinuousDist parent,
                             LatticePmf delta_size) {
  if (!(gamma > 0.0)) throw std::domain_error("OsSpec: gamma must be > 0");
  if (delta_size.convention() != Convention::delta) {
    throw std::invalid_argument(
        "OsSpec: fractional mode requires a delta size law");
  }
  const int n = static_cast<int>(std::ceil(gamma - 1e-12));
  return OsSpec{gamma, std::move(parent), std::move(delta_size), n, true};
}

namespace {

double clamp_u(double u) { return std::clamp(u, 0.0, 1.0); }

void check_integer_spec(const OsSpec& spec) {
  if (spec.fractional) {
    throw std::invalid_argument("expected an integer order-statistic spec");
  }
}

void check_fractional_spec(const OsSpec& spec) {
  if (!spec.fractional) {
    throw std::invalid_argument("expected a fractional order-statistic spec");
  }
}

// P(N >= i); the i-th order statistic of a sample of size rho(N) exists
// only on {N >= i+1}, but the conditioning event follows the definition.
double conditioning_prob(const LatticePmf& n, double i) {
  const double p = pi(n, i);
  if (p <= 0.0) {
    throw std::domain_error("order statistic: zero conditioning probability");
  }
  return p;
}

}  // namespace

double os_pdf_u(const OsSpec& spec, double u) {
  check_integer_spec(spec);
  const int i = static_cast<int>(std::llround(spec.index));
  const double pin = conditioning_prob(spec.size_dist, i);
  if (pi(spec.size_dist, i + 1.0) <= 0.0) {
    throw std::domain_error("order statistic: index exceeds effective support");
  }
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double d = derivative_series(spec.size_dist, i)(u);
  return std::pow(u, i - 1) * d / (pin * std::tgamma(static_cast<double>(i)));
}

double os_pdf_random_size(const OsSpec& spec, double x) {
  const double u = clamp_u(spec.parent.cdf(x));
  const double f = spec.parent.pdf(x);
  if (f <= 0.0) return 0.0;
  return f * os_pdf_u(spec, u);
}

double os_cdf_u(const OsSpec& spec, double u) {
  check_integer_spec(spec);
  const int i = static_cast<int>(std::llround(spec.index));
  const double pin = conditioning_prob(spec.size_dist, i);
  u = clamp_u(u);
  if (u <= 0.0) return 0.0;
  const LatticePmf& n = spec.size_dist;
  const double lu = std::log(u);
  const double l1mu = u < 1.0 ? std::log1p(-u) : 0.0;
  double acc = 0.0;
  for (std::size_t idx = 0; idx < n.size(); ++idx) {
    const double k = n.point(idx);
    const double p = n.prob(idx);
    if (k < i || p == 0.0) continue;
    const int m = static_cast<int>(std::llround(rho(k)));
    if (m < i) continue;  // {N = i}: no i-th order statistic in rho(N) draws
    double cond;
    if (u >= 1.0) {
      cond = 1.0;
    } else {
      cond = 0.0;
      for (int j = i; j <= m; ++j) {
        cond += std::exp(num::lchoose(m, j) + j * lu + (m - j) * l1mu);
      }
      cond = std::min(cond, 1.0);
    }
    acc += p * cond;
  }
  return acc / pin;
}

double os_cdf_random_size(const OsSpec& spec, double x) {
  return os_cdf_u(spec, clamp_u(spec.parent.cdf(x)));
}

namespace {

struct FosTerms {
  std::vector<double> b;     // sigma(k) - n + 1 per usable point
  std::vector<double> prob;  // P(N = k)
  double pin = 0.0;
  double excluded = 0.0;
};

FosTerms fos_terms(const OsSpec& spec) {
  const double gamma = spec.index;
  const int n = spec.fos_anchor;
  const LatticePmf& size = spec.size_dist;
  FosTerms t;
  t.pin = conditioning_prob(size, gamma);
  for (std::size_t idx = 0; idx < size.size(); ++idx) {
    const double k = size.point(idx);
    if (k < gamma - 1e-12) continue;  // conditioned away by {N >= gamma}
    const double b = sigma(k) - n + 1.0;
    if (b <= 0.0) {
      t.excluded += size.prob(idx);
      continue;
    }
    t.b.push_back(b);
    t.prob.push_back(size.prob(idx));
  }
  if (t.b.empty()) {
    throw std::domain_error("fractional order statistic: empty effective support");
  }
  return t;
}

}  // namespace

double fos_pdf_u(const OsSpec& spec, double u, FosDiagnostics* diag) {
  check_fractional_spec(spec);
  const double gamma = spec.index;
  const FosTerms t = fos_terms(spec);
  if (diag != nullptr) {
    diag->excluded_mass = t.excluded;
    diag->conditioning_prob = t.pin;
  }
  if (u <= 0.0 || u >= 1.0) return 0.0;
  // sum_k P(k) rising(b_k, gamma) u^(gamma-1) (1-u)^(b_k-1) / Gamma(gamma)
  const double lg = std::lgamma(gamma);
  const double lu = std::log(u);
  const double l1mu = std::log1p(-u);
  double acc = 0.0;
  for (std::size_t j = 0; j < t.b.size(); ++j) {
    if (t.prob[j] == 0.0) continue;
    const double lcoef = std::lgamma(t.b[j] + gamma) - std::lgamma(t.b[j]) - lg;
    acc += t.prob[j] *
           std::exp(lcoef + (gamma - 1.0) * lu + (t.b[j] - 1.0) * l1mu);
  }
  return acc / t.pin;
}

double fos_pdf_random_size(const OsSpec& spec, double x, FosDiagnostics* diag) {
  const double u = clamp_u(spec.parent.cdf(x));
  const double f = spec.parent.pdf(x);
  if (f <= 0.0) return 0.0;
  return f * fos_pdf_u(spec, u, diag);
}

double fos_cdf_u(const OsSpec& spec, double u, FosDiagnostics* diag) {
  check_fractional_spec(spec);
  const double gamma = spec.index;
  const FosTerms t = fos_terms(spec);
  if (diag != nullptr) {
    diag->excluded_mass = t.excluded;
    diag->conditioning_prob = t.pin;
  }
  u = clamp_u(u);
  if (u <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < t.b.size(); ++j) {
    if (t.prob[j] == 0.0) continue;
    acc += t.prob[j] * num::reg_inc_beta(u, gamma, t.b[j]);
  }
  return acc / t.pin;
}

double fos_cdf_random_size(const OsSpec& spec, double x, FosDiagnostics* diag) {
  return fos_cdf_u(spec, clamp_u(spec.parent.cdf(x)), diag);
}

double extreme_min_sf(const LatticePmf& n, const ContinuousDist& parent,
                      double x) {
  if (n.convention() != Convention::nabla) {
    throw std::invalid_argument("extremes: requires a nabla size law");
  }
  const double u = clamp_u(parent.cdf(x));
  if (u >= 1.0) return n.mass_at(1.0);
  return laplace(n)(u);
}

double extreme_min_pdf(const LatticePmf& n, const ContinuousDist& parent,
                       double x) {
  if (n.convention() != Convention::nabla) {
    throw std::invalid_argument("extremes: requires a nabla size law");
  }
  const double u = clamp_u(parent.cdf(x));
  const double f = parent.pdf(x);
  if (f <= 0.0 || u >= 1.0) return 0.0;
  return f * derivative_series(n, 1)(u);
}

double extreme_max_pdf(const LatticePmf& n, const ContinuousDist& parent,
                       double x) {
  if (n.convention() != Convention::nabla) {
    throw std::invalid_argument("extremes: requires a nabla size law");
  }
  const double u = clamp_u(parent.cdf(x));
  const double f = parent.pdf(x);
  if (f <= 0.0) return 0.0;
  const double ubar = 1.0 - u;
  if (ubar >= 1.0) return f * n.mass_at(1.0);
  // d/dx { F(x) L_N(Fbar(x)) } = f [ L_N(Fbar) + F D_1(Fbar) ]
  return f * (laplace(n)(ubar) + u * derivative_series(n, 1)(ubar));
}

double spacing_operator(std::span<const double> u, Convention kind,
                        double order, int i) {
  if (u.size() < 2) throw std::invalid_argument("spacing_operator: need >= 2 points");
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    if (!(u[j] < u[j + 1]) || !(u[j] > 0.0) || !(u[j + 1] < 1.0)) {
      throw std::invalid_argument(
          "spacing_operator: points must be strictly increasing in (0,1)");
    }
  }
  const int len = static_cast<int>(u.size());
  auto at = [&](int pos) -> double {
    if (pos < 1 || pos > len) {
      throw std::out_of_range("spacing_operator: index out of range");
    }
    return u[pos - 1];
  };
  auto interp = [&](double pos) -> double {
    const double fl = std::floor(pos);
    if (std::abs(pos - fl) < 1e-12) return at(static_cast<int>(fl));
    const int lo = static_cast<int>(fl);
    const double w = pos - fl;
    return (1.0 - w) * at(lo) + w * at(lo + 1);
  };

  const bool integral = std::abs(order - std::round(order)) < 1e-12;
  if (integral) {
    const int m = static_cast<int>(std::round(order));
    if (m < 0) throw std::domain_error("spacing_operator: order must be >= 0");
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double c = generalized_binomial(m, j) * ((j % 2 == 0) ? 1.0 : -1.0);
      acc += c * (kind == Convention::nabla ? at(i - j) : at(i + m - j));
    }
    return acc;
  }

  if (!(order > 0.0)) {
    throw std::domain_error("spacing_operator: order must be positive");
  }
  if (kind == Convention::nabla) {
    if (i < 2) throw std::out_of_range("spacing_operator: index too small");
    double acc = 0.0;
    for (int j = 0; j <= i - 2; ++j) {
      const double c =
          generalized_binomial(order, j) * ((j % 2 == 0) ? 1.0 : -1.0);
      acc += c * at(i - j);
    }
    return acc;
  }
  const int top = static_cast<int>(std::floor(order + i - 1.0));
  double acc = 0.0;
  for (int j = 0; j <= top; ++j) {
    const double c =
        generalized_binomial(order, j) * ((j % 2 == 0) ? 1.0 : -1.0);
    acc += c * interp(i + order - j);
  }
  return acc;
}

std::vector<double> quantile_grid(int points) {
  if (points < 2) throw std::invalid_argument("quantile_grid: too few points");
  std::vector<double> u(points);
  for (int j = 0; j < points; ++j) u[j] = (j + 0.5) / points;
  return u;
}

}  // namespace tsorder
