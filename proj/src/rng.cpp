#include "tsorder/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tsorder {

double Rng::normal() {
  // Box-Muller; both uniforms strictly positive
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

double Rng::gamma_variate(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma_variate: shape must be > 0");
  if (shape < 1.0) {
    // boost to shape+1 (Marsaglia-Tsang), then scale back
    const double g = gamma_variate(shape + 1.0);
    return g * std::pow(uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta_variate(double a, double b) {
  const double x = gamma_variate(a);
  const double y = gamma_variate(b);
  return x / (x + y);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 sm(master ^ (0xA0761D6478BD642FULL * (stream + 1)));
  (void)sm.next();
  return sm.next();
}

}  // namespace tsorder
