#pragma once

#include <iosfwd>
#include <span>

#include "tsorder/orders.hpp"
#include "tsorder/pmf.hpp"

namespace tsorder {

/// Baseline hazard for the frailty kernels: exponential or Weibull with
/// a log-linear covariate effect applied by the cluster.
struct BaselineHazard {
  enum class Family { exponential, weibull };
  Family family = Family::exponential;
  double rate = 1.0;   // exponential rate, or Weibull scale reciprocal base
  double shape = 1.0;  // Weibull shape (unused for exponential)

  double hazard(double t) const;
  double cum_hazard(double t) const;

  static BaselineHazard exponential(double rate);
  static BaselineHazard weibull(double shape, double scale);
};

struct Subject {
  double time = 0.0;
  bool event = false;
  std::vector<double> covariates;
};

/// One cluster of subjects sharing a frailty term.
struct ClusterData {
  std::vector<Subject> subjects;
  BaselineHazard baseline;
  std::vector<double> coefficients;  // log-linear effects

  double relative_risk(const Subject& s) const;
  void validate() const;
};

/// Joint survival of a cluster: the frailty transform evaluated at the
/// summed cumulative hazard.  Nabla frailty restricts the argument to
/// (0,1).
double cluster_survival(const ClusterData& data, const LatticePmf& frailty);

/// Likelihood contribution of a cluster: the product of event hazards
/// times the signed d-th transform derivative at the summed cumulative
/// hazard, d the number of events.
double cluster_likelihood(const ClusterData& data, const LatticePmf& frailty);

/// Hazard-rate comparison of the reliability counts N_s(X), N_s(Y) built
/// from the reliability sequences, aggregated over the s grid.
OrderVerdict ns_hazard_compare(const LatticePmf& x, const LatticePmf& y,
                               std::span<const double> s_grid, int nmax);

/// Cluster CSV rows: cluster id, time, event indicator, covariates...
std::vector<ClusterData> read_cluster_csv(std::istream& in,
                                          const BaselineHazard& baseline,
                                          std::vector<double> coefficients);

}  // namespace tsorder
