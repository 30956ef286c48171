#pragma once

#include <functional>
#include <string>
#include <utility>

namespace tsorder {

/// An absolutely continuous parent distribution given by density, cdf,
/// survival and quantile function on an interval support.
class ContinuousDist {
 public:
  ContinuousDist(std::function<double(double)> pdf,
                 std::function<double(double)> cdf,
                 std::function<double(double)> quantile,
                 std::pair<double, double> support, std::string label);

  double pdf(double x) const { return pdf_(x); }
  double cdf(double x) const { return cdf_(x); }
  double survival(double x) const { return 1.0 - cdf_(x); }
  double quantile(double u) const;
  const std::pair<double, double>& support() const { return support_; }
  const std::string& label() const { return label_; }

  static ContinuousDist uniform01();
  static ContinuousDist exponential(double rate);
  static ContinuousDist weibull(double shape, double scale);

 private:
  std::function<double(double)> pdf_;
  std::function<double(double)> cdf_;
  std::function<double(double)> quantile_;
  std::pair<double, double> support_;
  std::string label_;
};

}  // namespace tsorder
