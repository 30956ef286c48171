#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsorder/order_statistics.hpp"
#include "tsorder/orders.hpp"
#include "tsorder/rng.hpp"

namespace tsorder {

struct SimConfig {
  std::uint64_t seed = 42;
  int replications = 100'000;
  bool strict_conditioning = false;
  int histogram_bins = 256;
  int threads = 0;  // 0: TSORDER_THREADS or hardware concurrency

  void validate() const;
};

/// Number of worker threads honoring TSORDER_THREADS.
int thread_budget(int requested = 0);

/// Inverse-cdf sampler over the stored support; draws falling into the
/// truncated tail map to the last stored point and are counted.
class LatticeSampler {
 public:
  explicit LatticeSampler(const LatticePmf& pmf);
  double draw(Rng& rng) const;
  std::uint64_t tail_hits() const { return tail_hits_.load(); }

 private:
  std::vector<double> cum_;
  double offset_;
  mutable std::atomic<std::uint64_t> tail_hits_{0};
};

LatticePoint sample_lattice(const LatticePmf& pmf, Rng& rng);

struct Histogram {
  std::vector<double> edges;   // bins+1 edges on [0,1]
  std::vector<double> counts;  // recorded values per bin
  double draws = 0.0;          // total replications
  double accepted = 0.0;       // conditioning event held
  double recorded = 0.0;       // a value existed and was binned

  /// Empirical (possibly defective) cdf at interior edges, normalized by
  /// the accepted count.
  std::vector<double> cdf_at_edges() const;
};

/// Draw the sample size, draw rho(N) parent variates on the u scale,
/// record the i-th smallest.  Under the verbatim conditioning {N >= i}
/// the event {N = i} is accepted but yields no value (defect mass);
/// strict conditioning restricts to {N >= i+1}.
Histogram simulate_os(const OsSpec& spec, const SimConfig& cfg);

/// Fractional counterpart: accepted draws record a Beta(gamma,
/// sigma(N)-n+1) variate.
Histogram simulate_fos(const OsSpec& spec, const SimConfig& cfg);

struct CompoundResult {
  std::vector<double> s;
  std::vector<double> empirical;  // mean (1-s)^S over replications
  std::vector<double> analytic;   // w L_N(1-w), w = (1-s) L_X(s)
  double max_abs_dev = 0.0;
};

/// Empirical generating transform of S = X_1 + ... + X_N against the
/// random-sum composition identity.
CompoundResult simulate_compound(const LatticePmf& n, const LatticePmf& x,
                                 const SimConfig& cfg, const EvalGrid& grid);

/// Nabla transform of the compound sum in closed form.
double compound_transform(const LatticePmf& n, const LatticePmf& x, double s);

struct BatteryMember {
  enum class Family {
    geometric_nabla,
    gamma_nabla_family,
    gamma_delta_family,
    table
  };
  std::string label;
  Family family;
  double a = 0.0, b = 0.0;
  LatticePmf pmf;

  /// Parametric members rebuilt at a deeper truncation; tables as-is.
  LatticePmf rebuild(double eps) const;
};

/// The standard comparison battery: geometric and gamma nabla families,
/// gamma delta families, degenerate sizes, and two table fixtures chosen
/// so transform dominance holds while the ratio order fails.
struct Battery {
  std::vector<BatteryMember> nabla;
  std::vector<BatteryMember> delta;

  static Battery standard();
};

struct PairRecord {
  std::string x, y;
  std::string premise_desc, conclusion_desc;
  Outcome premise = Outcome::inconclusive;
  Outcome conclusion = Outcome::inconclusive;
  bool inconsistent = false;  // premise holds and conclusion fails
  std::string note;
};

struct TheoremReport {
  std::string id;
  std::string description;
  std::vector<PairRecord> records;
  int pairs = 0;
  int inconsistent = 0;
  int inconclusive = 0;

  bool failed() const { return inconsistent > 0; }
  nlohmann::ordered_json to_json() const;
};

/// Known implication-suite ids.
std::vector<std::string> theorem_ids();

/// Wires a premise check to a conclusion check across the battery; the
/// suite fails if any pair has premise holds and conclusion fails.
TheoremReport verify_theorem(const std::string& id, const Battery& battery,
                             const SimConfig& cfg);

}  // namespace tsorder
