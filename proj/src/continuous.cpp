#include "tsorder/continuous.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsorder {

ContinuousDist::ContinuousDist(std::function<double(double)> pdf,
                               std::function<double(double)> cdf,
                               std::function<double(double)> quantile,
                               std::pair<double, double> support,
                               std::string label)
    : pdf_(std::move(pdf)),
      cdf_(std::move(cdf)),
      quantile_(std::move(quantile)),
      support_(support),
      label_(std::move(label)) {}

double ContinuousDist::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("quantile argument must lie in (0,1)");
  }
  return quantile_(u);
}

ContinuousDist ContinuousDist::uniform01() {
  return ContinuousDist(
      [](double x) { return x >= 0.0 && x <= 1.0 ? 1.0 : 0.0; },
      [](double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); },
      [](double u) { return u; }, {0.0, 1.0}, "uniform01");
}

ContinuousDist ContinuousDist::exponential(double rate) {
  if (!(rate > 0.0)) throw std::domain_error("exponential: rate must be > 0");
  return ContinuousDist(
      [rate](double x) { return x < 0.0 ? 0.0 : rate * std::exp(-rate * x); },
      [rate](double x) { return x < 0.0 ? 0.0 : -std::expm1(-rate * x); },
      [rate](double u) { return -std::log1p(-u) / rate; },
      {0.0, std::numeric_limits<double>::infinity()},
      "exponential(" + std::to_string(rate) + ")");
}

ContinuousDist ContinuousDist::weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::domain_error("weibull: shape and scale must be > 0");
  }
  return ContinuousDist(
      [shape, scale](double x) {
        if (x <= 0.0) return 0.0;
        const double z = x / scale;
        return shape / scale * std::pow(z, shape - 1.0) *
               std::exp(-std::pow(z, shape));
      },
      [shape, scale](double x) {
        return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / scale, shape));
      },
      [shape, scale](double u) {
        return scale * std::pow(-std::log1p(-u), 1.0 / shape);
      },
      {0.0, std::numeric_limits<double>::infinity()},
      "weibull(" + std::to_string(shape) + "," + std::to_string(scale) + ")");
}

}  // namespace tsorder
