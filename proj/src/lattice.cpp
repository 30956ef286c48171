#include "tsorder/lattice.hpp"

#include <cmath>

namespace tsorder {

namespace {

bool is_nonneg_int(double k, double tol = 0.0) {
  if (k < -tol) return false;
  return std::abs(k - std::round(k)) <= tol;
}

}  // namespace

std::string to_string(Convention c) {
  return c == Convention::delta ? "delta" : "nabla";
}

Convention convention_from_string(const std::string& s) {
  if (s == "delta") return Convention::delta;
  if (s == "nabla") return Convention::nabla;
  throw std::invalid_argument("unknown convention: " + s);
}

bool LatticePoint::on_lattice(double value, double offset, double tol) {
  const double d = value - offset;
  if (d < -tol) return false;
  return std::abs(d - std::round(d)) <= tol;
}

double rising_factorial(double x, double k) {
  if (!(x > 0.0) || !(x + k > 0.0)) {
    throw std::domain_error("rising_factorial: requires x > 0 and x + k > 0");
  }
  if (k == 0.0) return 1.0;
  if (is_nonneg_int(k) && k <= 64.0) {
    double out = 1.0;
    const int n = static_cast<int>(std::round(k));
    for (int j = 0; j < n; ++j) out *= x + j;
    return out;
  }
  return std::exp(std::lgamma(x + k) - std::lgamma(x));
}

double falling_factorial(double x, double k) {
  if (!(x + 1.0 > 0.0)) {
    throw std::domain_error("falling_factorial: requires x + 1 > 0");
  }
  if (k == 0.0) return 1.0;
  if (is_nonneg_int(k) && k <= 64.0) {
    double out = 1.0;
    const int n = static_cast<int>(std::round(k));
    for (int j = 0; j < n; ++j) out *= x - j;
    return out;
  }
  const double a = x + 1.0 - k;
  if (a > 0.0) {
    return std::exp(std::lgamma(x + 1.0) - std::lgamma(a));
  }
  // Gamma(a) pole: the ratio vanishes.
  if (is_nonneg_int(-a, 1e-12)) return 0.0;
  throw std::domain_error(
      "falling_factorial: x + 1 - k is negative and not an integer");
}

double taylor_monomial(Convention kind, double k, double x) {
  if (!(k > -1.0)) {
    throw std::domain_error("taylor_monomial: requires k > -1");
  }
  const double fact =
      kind == Convention::delta ? falling_factorial(x, k) : rising_factorial(x, k);
  return fact / std::tgamma(k + 1.0);
}

double generalized_binomial(double a, int j) {
  if (j < 0) throw std::domain_error("generalized_binomial: requires j >= 0");
  double out = 1.0;
  for (int t = 0; t < j; ++t) out *= (a - t) / (t + 1.0);
  return out;
}

double delta_exponential(double beta, double x) {
  if (!(beta > -1.0)) {
    throw std::domain_error("delta_exponential: requires beta > -1");
  }
  return std::pow(1.0 + beta, sigma(x));
}

double nabla_exponential(double beta, double x) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::domain_error("nabla_exponential: requires 0 < beta < 1");
  }
  return std::pow(1.0 - beta, -rho(x));
}

}  // namespace tsorder
