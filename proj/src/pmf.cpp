#include "tsorder/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "tsorder/numerics.hpp"

namespace tsorder {

namespace {

constexpr std::size_t kMaxSupport = 4'000'000;

void check_params(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

LatticePmf::LatticePmf(Convention convention, double offset,
                       std::vector<double> probs, double tail_mass,
                       std::string label)
    : convention_(convention),
      offset_(offset),
      probs_(std::move(probs)),
      tail_mass_(tail_mass),
      label_(std::move(label)) {
  if (probs_.empty()) throw std::invalid_argument("LatticePmf: empty table");
  if (convention_ == Convention::nabla && std::abs(offset_ - 1.0) > 1e-12) {
    throw std::invalid_argument("LatticePmf: nabla support starts at 1");
  }
  if (convention_ == Convention::delta && !(offset_ > -1.0)) {
    throw std::invalid_argument("LatticePmf: delta offset must exceed -1");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (p < -1e-15 || !std::isfinite(p)) {
      throw std::invalid_argument("LatticePmf: negative or non-finite mass");
    }
    sum += p;
  }
  if (tail_mass_ < 0.0 || !std::isfinite(tail_mass_)) {
    throw std::invalid_argument("LatticePmf: bad tail mass");
  }
  if (std::abs(sum + tail_mass_ - 1.0) > kMassTol) {
    throw std::invalid_argument("LatticePmf: mass " + std::to_string(sum) +
                                " + tail " + std::to_string(tail_mass_) +
                                " not within tolerance of 1");
  }
  suffix_.assign(probs_.size(), 0.0);
  double acc = tail_mass_;
  for (std::size_t i = probs_.size(); i-- > 0;) {
    suffix_[i] = acc;
    acc += probs_[i];
  }
}

double LatticePmf::mass_at(double x, double tol) const {
  const double d = x - offset_;
  const double r = std::round(d);
  if (r < 0.0 || r >= static_cast<double>(probs_.size())) return 0.0;
  if (std::abs(d - r) > tol) return 0.0;
  return probs_[static_cast<std::size_t>(r)];
}

double LatticePmf::prob_at_least(double threshold) const {
  if (threshold <= offset_) return total_mass();
  const double d = threshold - offset_;
  // first index with point >= threshold, snapping near-lattice thresholds
  double idx = std::ceil(d - 1e-9);
  if (idx >= static_cast<double>(probs_.size()))
    return tail_mass_;
  const auto i = static_cast<std::size_t>(std::max(0.0, idx));
  double s = tail_mass_;
  for (std::size_t j = probs_.size(); j-- > i;) s += probs_[j];
  return s;
}

double LatticePmf::total_mass() const {
  double s = tail_mass_;
  for (double p : probs_) s += p;
  return s;
}

namespace {

// Shared gamma-family loop: log p(m) = lgamma(alpha+m) - lgamma(m+1)
// + alpha log(beta_scale) - lgamma(alpha) + m log(ratio_limit) + head.
// Iteration stops once the geometric remainder bound drops below eps, so
// truncation levels far below double epsilon remain meaningful.
std::vector<double> gamma_terms(double alpha, double head, double lbeta_scale,
                                double ratio_limit, double eps, double* tail,
                                const char* what) {
  const double lg_alpha = std::lgamma(alpha);
  const double llim = std::log(ratio_limit);
  std::vector<double> probs;
  double sum = 0.0;
  double m = 0.0;
  for (;;) {
    const double lp = std::lgamma(alpha + m) - std::lgamma(m + 1.0) +
                      lbeta_scale - lg_alpha + m * llim + head;
    probs.push_back(std::exp(lp));
    sum += probs.back();
    m += 1.0;
    const double r_next = (alpha + m - 1.0) / m * ratio_limit;
    const double r_bar = std::max(r_next, ratio_limit);
    if (r_bar < 1.0) {
      const double bound = probs.back() * r_next / (1.0 - r_bar);
      if (bound <= eps) {
        // the float remainder is sharper whenever it is representable
        const double rem = 1.0 - sum;
        *tail = rem > 1e-10 ? rem : std::max(bound, 0.0);
        return probs;
      }
    }
    if (probs.size() > kMaxSupport) {
      throw std::domain_error(std::string(what) +
                              ": truncation did not converge");
    }
  }
}

}  // namespace

LatticePmf gamma_delta(double alpha, double beta, double eps) {
  check_params(alpha > 0.0, "gamma_delta: requires alpha > 0");
  check_params(beta > 0.0, "gamma_delta: requires beta > 0");
  check_params(eps > 0.0 && eps < 1.0, "gamma_delta: requires 0 < eps < 1");
  // p(x) for x = alpha-1+m carries (1+beta)^(-sigma(x))
  double tail = 0.0;
  std::vector<double> probs = gamma_terms(
      alpha, -alpha * std::log1p(beta), alpha * std::log(beta),
      1.0 / (1.0 + beta), eps, &tail, "gamma_delta");
  return LatticePmf(Convention::delta, alpha - 1.0, std::move(probs), tail,
                    "gamma_delta(" + std::to_string(alpha) + "," +
                        std::to_string(beta) + ")");
}

LatticePmf gamma_nabla(double alpha, double beta, double eps) {
  check_params(alpha > 0.0, "gamma_nabla: requires alpha > 0");
  check_params(beta > 0.0 && beta < 1.0, "gamma_nabla: requires 0 < beta < 1");
  check_params(eps > 0.0 && eps < 1.0, "gamma_nabla: requires 0 < eps < 1");
  double tail = 0.0;
  std::vector<double> probs =
      gamma_terms(alpha, 0.0, alpha * std::log(beta), 1.0 - beta, eps, &tail,
                  "gamma_nabla");
  return LatticePmf(Convention::nabla, 1.0, std::move(probs), tail,
                    "gamma_nabla(" + std::to_string(alpha) + "," +
                        std::to_string(beta) + ")");
}

LatticePmf geometric(Convention convention, double p, double eps) {
  check_params(p > 0.0 && p < 1.0, "geometric: requires 0 < p < 1");
  check_params(eps > 0.0 && eps < 1.0, "geometric: requires 0 < eps < 1");
  const double q = 1.0 - p;
  std::vector<double> probs;
  double term = p;
  for (;;) {
    probs.push_back(term);
    term *= q;
    if (term / (1.0 - q) <= eps) break;
    if (probs.size() > kMaxSupport) {
      throw std::domain_error("geometric: truncation did not converge");
    }
  }
  const double tail = term / (1.0 - q);
  const double offset = convention == Convention::nabla ? 1.0 : 0.0;
  return LatticePmf(convention, offset, std::move(probs), tail,
                    "geometric(" + to_string(convention) + "," +
                        std::to_string(p) + ")");
}

LatticePmf from_table(Convention convention, double offset,
                      std::vector<double> probs, std::string label) {
  if (probs.empty()) throw std::invalid_argument("from_table: empty table");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || !std::isfinite(p)) {
      throw std::invalid_argument("from_table: negative mass");
    }
    sum += p;
  }
  if (sum > 1.0 + LatticePmf::kMassTol) {
    throw std::invalid_argument("from_table: total mass exceeds 1");
  }
  const double tail = std::max(0.0, 1.0 - sum);
  return LatticePmf(convention, offset, std::move(probs), tail,
                    std::move(label));
}

LatticePmf degenerate(Convention convention, double point) {
  if (convention == Convention::nabla) {
    const double d = point - 1.0;
    if (d < 0.0 || std::abs(d - std::round(d)) > 1e-12) {
      throw std::domain_error("degenerate: nabla point must lie in {1,2,...}");
    }
    std::vector<double> probs(static_cast<std::size_t>(std::round(d)) + 1, 0.0);
    probs.back() = 1.0;
    return LatticePmf(convention, 1.0, std::move(probs),
                      0.0, "degenerate(nabla," + std::to_string(point) + ")");
  }
  return LatticePmf(Convention::delta, point, {1.0}, 0.0,
                    "degenerate(delta," + std::to_string(point) + ")");
}

namespace {

// Moment of a truncated series with eventually geometric terms: flag the
// result as unusable when the neglected tail can move it at relative 1e-8.
double checked_moment(const LatticePmf& x, int k,
                      const std::function<double(double)>& weight) {
  if (k < 0) throw std::domain_error("moment order must be nonnegative");
  if (k == 0) return x.total_mass();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += weight(x.point(i)) * x.prob(i);
  }
  if (x.tail_mass() > 0.0 && x.size() >= 2 && x.prob(x.size() - 2) > 0.0) {
    const double last = weight(x.last_point()) * x.prob(x.size() - 1);
    const double p_ratio = x.prob(x.size() - 1) / x.prob(x.size() - 2);
    const double w_ratio = weight(x.last_point() + 1.0) /
                           std::max(weight(x.last_point()), 1e-300);
    const double r = p_ratio * w_ratio;
    if (!(r < 1.0)) {
      throw truncation_error("moment: stored support too short to bound tail");
    }
    const double bound = last * r / (1.0 - r);
    if (bound > 1e-8 * std::abs(sum)) {
      throw truncation_error("moment: truncation-dominated result");
    }
  }
  return sum;
}

}  // namespace

double nabla_moment(const LatticePmf& x, int k) {
  if (x.convention() != Convention::delta) {
    throw std::invalid_argument("nabla_moment: requires a delta pmf");
  }
  return checked_moment(x, k,
                        [k](double pt) { return rising_factorial(sigma(pt), k); });
}

double delta_moment(const LatticePmf& x, int k) {
  if (x.convention() != Convention::nabla) {
    throw std::invalid_argument("delta_moment: requires a nabla pmf");
  }
  return checked_moment(x, k, [k](double pt) {
    return falling_factorial(rho(pt), k);
  });
}

double pi(const LatticePmf& x, double threshold) {
  return x.prob_at_least(threshold);
}

LatticePmf convolve(const LatticePmf& a, const LatticePmf& b) {
  if (a.convention() != b.convention()) {
    throw std::invalid_argument("convolve: mixed conventions");
  }
  std::vector<double> probs(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      probs[i + j] += a.prob(i) * b.prob(j);
    }
  }
  const double tail =
      std::min(1.0, a.tail_mass() + b.tail_mass() +
                        a.tail_mass() * b.tail_mass());
  double offset = a.offset() + b.offset();
  if (a.convention() == Convention::nabla) {
    // sum of two {1,2,...} variables lives on {2,3,...}; re-anchor at 1
    probs.insert(probs.begin(), 0.0);
    offset = 1.0;
  }
  return LatticePmf(a.convention(), offset, std::move(probs), tail,
                    a.label() + "+" + b.label());
}

void write_pmf_csv(const LatticePmf& pmf, std::ostream& out) {
  out << "# convention=" << to_string(pmf.convention()) << "\n";
  out << "# offset=" << std::hexfloat << pmf.offset() << std::defaultfloat
      << "\n";
  out << "# tail_mass=" << std::hexfloat << pmf.tail_mass()
      << std::defaultfloat << "\n";
  out << "support,probability\n";
  out.precision(17);
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    out << pmf.point(i) << "," << pmf.prob(i) << "\n";
  }
}

LatticePmf read_pmf_csv(std::istream& in, std::string label) {
  std::string line;
  Convention convention = Convention::nabla;
  bool have_convention = false;
  double tail = 0.0;
  std::vector<double> points;
  std::vector<double> probs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1);
      const std::string val = line.substr(eq + 1);
      if (key.find("convention") != std::string::npos) {
        convention = convention_from_string(val);
        have_convention = true;
      } else if (key.find("tail_mass") != std::string::npos) {
        tail = std::strtod(val.c_str(), nullptr);
      }
      continue;
    }
    if (line.find("support") != std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw std::invalid_argument("read_pmf_csv: malformed row: " + line);
    }
    points.push_back(std::strtod(a.c_str(), nullptr));
    probs.push_back(std::strtod(b.c_str(), nullptr));
  }
  if (points.empty()) throw std::invalid_argument("read_pmf_csv: empty file");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (std::abs(points[i] - points[i - 1] - 1.0) > 1e-9) {
      throw std::invalid_argument("read_pmf_csv: support must be a unit lattice");
    }
  }
  if (!have_convention) {
    convention = std::abs(points.front() - 1.0) <= 1e-12 ? Convention::nabla
                                                         : Convention::delta;
  }
  return LatticePmf(convention, points.front(), std::move(probs), tail,
                    std::move(label));
}

}  // namespace tsorder
