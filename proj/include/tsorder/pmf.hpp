#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsorder/lattice.hpp"

namespace tsorder {

/// A probability mass function on an offset unit lattice, stored as a
/// finite table of consecutive probabilities plus a bound on the mass
/// truncated away.  Immutable after construction.
class LatticePmf {
 public:
  static constexpr double kDefaultTruncEps = 1e-12;
  static constexpr double kMassTol = 1e-9;

  LatticePmf(Convention convention, double offset, std::vector<double> probs,
             double tail_mass, std::string label);

  Convention convention() const { return convention_; }
  double offset() const { return offset_; }
  const std::vector<double>& probs() const { return probs_; }
  double tail_mass() const { return tail_mass_; }
  const std::string& label() const { return label_; }

  std::size_t size() const { return probs_.size(); }
  double point(std::size_t i) const { return offset_ + static_cast<double>(i); }
  double last_point() const { return point(probs_.size() - 1); }
  double prob(std::size_t i) const { return probs_[i]; }

  /// P(X = x) for a lattice point x (0 off-lattice).
  double mass_at(double x, double tol = 1e-9) const;

  /// P(X >= threshold), tail mass included in the upper tail.
  double prob_at_least(double threshold) const;

  /// P(X > point(i)), tail mass included.
  double survival_after(std::size_t i) const { return suffix_[i]; }

  double total_mass() const;

 private:
  Convention convention_;
  double offset_;
  std::vector<double> probs_;
  double tail_mass_;
  std::string label_;
  std::vector<double> suffix_;  // suffix_[i] = sum_{j>i} probs_[j] + tail
};

/// Delta lattice gamma family on {alpha-1, alpha, ...}:
/// p(x) = falling(x, alpha-1) beta^alpha / (Gamma(alpha) (1+beta)^sigma(x)).
LatticePmf gamma_delta(double alpha, double beta,
                       double eps = LatticePmf::kDefaultTruncEps);

/// Nabla lattice gamma family on {1, 2, ...}:
/// p(x) = rising(x, alpha-1) beta^alpha (1-beta)^rho(x) / Gamma(alpha).
LatticePmf gamma_nabla(double alpha, double beta,
                       double eps = LatticePmf::kDefaultTruncEps);

/// Geometric in either convention: trials-to-first-success on {1,2,...}
/// (nabla) or failures-before-first-success on {0,1,...} (delta).
LatticePmf geometric(Convention convention, double p,
                     double eps = LatticePmf::kDefaultTruncEps);

/// User-supplied table.  No renormalization: missing mass becomes tail mass.
LatticePmf from_table(Convention convention, double offset,
                      std::vector<double> probs, std::string label = "table");

/// Point mass at a lattice point.  Nabla tables are anchored at offset 1.
LatticePmf degenerate(Convention convention, double point);

/// k-th nabla moment of a delta pmf: E[sigma(X)^(k rising)].
double nabla_moment(const LatticePmf& x, int k);

/// k-th delta moment of a nabla pmf: E[rho(X)^(k falling)].
double delta_moment(const LatticePmf& x, int k);

/// P(X >= threshold).
double pi(const LatticePmf& x, double threshold);

/// Convolution of two pmfs with the same convention.  The result of two
/// nabla pmfs is re-anchored at offset 1 (mass at 1 is zero).
LatticePmf convolve(const LatticePmf& a, const LatticePmf& b);

/// Two-column CSV (support point, probability) with a comment header.
void write_pmf_csv(const LatticePmf& pmf, std::ostream& out);
LatticePmf read_pmf_csv(std::istream& in, std::string label = "csv");

}  // namespace tsorder
