#pragma once

#include <stdexcept>
#include <string>

namespace tsorder {

/// Support convention of a unit lattice: `delta` lattices start at an
/// arbitrary real offset (alpha - 1), `nabla` lattices are fixed to {1, 2, ...}.
enum class Convention { delta, nabla };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

/// Forward jump on a unit lattice.
constexpr double sigma(double x) { return x + 1.0; }
/// Backward jump on a unit lattice.
constexpr double rho(double x) { return x - 1.0; }

/// A point of an offset unit lattice {offset, offset+1, ...}.
struct LatticePoint {
  double value = 0.0;

  /// True when value - offset is a nonnegative integer within `tol`.
  static bool on_lattice(double value, double offset, double tol = 1e-12);
};

/// Thrown when a series result is dominated by truncation error.
class truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an exact sequence identity breaks down in floating point.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rising factorial x^(k rising) = Gamma(x+k) / Gamma(x).
///
/// Requires x > 0 and x + k > 0.  Nonnegative integer k up to 64 is
/// evaluated as an exact product; everything else goes through log-Gamma.
double rising_factorial(double x, double k);

/// Falling factorial x^(k falling) = Gamma(x+1) / Gamma(x+1-k).
///
/// Requires x + 1 > 0.  Returns 0 when x+1-k lands on a pole of the
/// denominator Gamma (integer annihilation); rejects non-integer
/// configurations with x+1-k <= 0.
double falling_factorial(double x, double k);

/// Taylor monomial h_k(x): falling_factorial(x,k)/Gamma(k+1) for delta,
/// rising_factorial(x,k)/Gamma(k+1) for nabla.
double taylor_monomial(Convention kind, double k, double x);

/// Generalized binomial coefficient C(a, j) = a(a-1)...(a-j+1)/j! for
/// real a and integer j >= 0.
double generalized_binomial(double a, int j);

/// Delta lattice exponential (1+beta)^sigma(x), beta > -1.
double delta_exponential(double beta, double x);

/// Nabla lattice exponential (1-beta)^(-rho(x)), 0 < beta < 1.
double nabla_exponential(double beta, double x);

}  // namespace tsorder
