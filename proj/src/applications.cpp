#include "tsorder/applications.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

namespace tsorder {

double BaselineHazard::hazard(double t) const {
  if (family == Family::exponential) return rate;
  const double z = t * rate;
  return shape * rate * std::pow(z, shape - 1.0);
}

double BaselineHazard::cum_hazard(double t) const {
  if (family == Family::exponential) return rate * t;
  return std::pow(t * rate, shape);
}

BaselineHazard BaselineHazard::exponential(double rate) {
  if (!(rate > 0.0)) throw std::domain_error("baseline: rate must be > 0");
  return BaselineHazard{Family::exponential, rate, 1.0};
}

BaselineHazard BaselineHazard::weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::domain_error("baseline: shape and scale must be > 0");
  }
  return BaselineHazard{Family::weibull, 1.0 / scale, shape};
}

double ClusterData::relative_risk(const Subject& s) const {
  if (s.covariates.size() != coefficients.size()) {
    throw std::invalid_argument("cluster: covariate/coefficient mismatch");
  }
  double eta = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    eta += coefficients[i] * s.covariates[i];
  }
  return std::exp(eta);
}

void ClusterData::validate() const {
  if (subjects.empty()) throw std::invalid_argument("cluster: no subjects");
  for (const auto& s : subjects) {
    if (!(s.time > 0.0)) throw std::invalid_argument("cluster: times must be > 0");
  }
}

namespace {

double summed_cum_hazard(const ClusterData& data) {
  double h = 0.0;
  for (const auto& s : data.subjects) {
    h += data.baseline.cum_hazard(s.time) * data.relative_risk(s);
  }
  return h;
}

void check_transform_arg(const LatticePmf& frailty, double h) {
  if (frailty.convention() == Convention::nabla && !(h < 1.0)) {
    throw std::domain_error(
        "cluster: nabla frailty needs the summed hazard inside (0,1)");
  }
}

}  // namespace

double cluster_survival(const ClusterData& data, const LatticePmf& frailty) {
  data.validate();
  const double h = summed_cum_hazard(data);
  check_transform_arg(frailty, h);
  return laplace(frailty)(h);
}

double cluster_likelihood(const ClusterData& data, const LatticePmf& frailty) {
  data.validate();
  int events = 0;
  double hazard_product = 1.0;
  for (const auto& s : data.subjects) {
    if (s.event) {
      ++events;
      hazard_product *= data.baseline.hazard(s.time) * data.relative_risk(s);
    }
  }
  if (events > 64) {
    throw std::domain_error("cluster_likelihood: more than 64 events");
  }
  const double h = summed_cum_hazard(data);
  check_transform_arg(frailty, h);
  if (events == 0) return laplace(frailty)(h);
  // (-1)^d L^(d)(H) is the positive derivative series
  return hazard_product * derivative_series(frailty, events)(h);
}

OrderVerdict ns_hazard_compare(const LatticePmf& x, const LatticePmf& y,
                               std::span<const double> s_grid, int nmax) {
  if (x.convention() != y.convention()) {
    throw std::invalid_argument("ns_hazard_compare: mixed conventions");
  }
  if (s_grid.empty()) throw std::invalid_argument("ns_hazard_compare: empty grid");
  OrderVerdict v;
  v.relation = Relation::Hr;
  v.grid = GridSpec{"s-grid", static_cast<int>(s_grid.size()),
                    s_grid.front(), s_grid.back()};
  v.note = "N_s(Y) <=hr N_s(X) via reliability sequences";
  v.outcome = Outcome::holds;
  for (double s : s_grid) {
    std::vector<double> rx, ry;
    try {
      rx = reliability_sequence(x, s, nmax);
      ry = reliability_sequence(y, s, nmax);
    } catch (const std::exception& e) {
      v.outcome = Outcome::inconclusive;
      v.note = e.what();
      return v;
    }
    // hr of the counts over the transform-derived part n >= 1:
    // R^X(n+1) R^Y(n) >= R^X(n) R^Y(n+1)
    for (int n = 1; n + 1 <= nmax; ++n) {
      const double up = rx[n + 1] * ry[n];
      const double down = rx[n] * ry[n + 1];
      const double scale = std::max({up, down, 1e-300});
      if ((down - up) / scale > kOrderTol) {
        v.outcome = Outcome::fails;
        v.max_violation = std::max(v.max_violation, (down - up) / scale);
        if (!v.witness) {
          v.witness = Witness{s, static_cast<double>(n), up, down};
        }
      }
    }
  }
  return v;
}

std::vector<ClusterData> read_cluster_csv(std::istream& in,
                                          const BaselineHazard& baseline,
                                          std::vector<double> coefficients) {
  std::map<std::string, ClusterData> clusters;
  std::vector<std::string> order;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) {
      throw std::invalid_argument("cluster csv: malformed row: " + line);
    }
    if (first) {
      first = false;
      char* end = nullptr;
      (void)std::strtod(cells[1].c_str(), &end);
      if (end == cells[1].c_str()) continue;  // header row
    }
    Subject s;
    s.time = std::strtod(cells[1].c_str(), nullptr);
    s.event = std::strtod(cells[2].c_str(), nullptr) != 0.0;
    for (std::size_t i = 3; i < cells.size(); ++i) {
      s.covariates.push_back(std::strtod(cells[i].c_str(), nullptr));
    }
    if (s.covariates.size() != coefficients.size()) {
      throw std::invalid_argument("cluster csv: covariate count mismatch");
    }
    auto [it, inserted] = clusters.try_emplace(cells[0]);
    if (inserted) {
      it->second.baseline = baseline;
      it->second.coefficients = coefficients;
      order.push_back(cells[0]);
    }
    it->second.subjects.push_back(std::move(s));
  }
  std::vector<ClusterData> out;
  out.reserve(order.size());
  for (const auto& key : order) out.push_back(std::move(clusters[key]));
  return out;
}

}  // namespace tsorder
