#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "tsorder/applications.hpp"
#include "tsorder/numerics.hpp"

using namespace tsorder;

namespace {

// brute-force finite mixture over the frailty support: conditional on the
// frailty value u the cluster contributes
// prod h_j^delta_j * rising(sigma(u), d) * (1 + H)^(-sigma(u) - d)
double brute_force_likelihood(const ClusterData& data,
                              const LatticePmf& frailty) {
  int events = 0;
  double hazard_product = 1.0;
  double total_hazard = 0.0;
  for (const auto& s : data.subjects) {
    const double risk = data.relative_risk(s);
    total_hazard += data.baseline.cum_hazard(s.time) * risk;
    if (s.event) {
      ++events;
      hazard_product *= data.baseline.hazard(s.time) * risk;
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < frailty.size(); ++i) {
    const double su = sigma(frailty.point(i));
    double coef = 1.0;
    for (int d = 0; d < events; ++d) coef *= su + d;
    acc += frailty.prob(i) * coef *
           std::pow(1.0 + total_hazard, -su - events);
  }
  return hazard_product * acc;
}

ClusterData two_subject_cluster(double t1, bool e1, double t2, bool e2) {
  ClusterData data;
  data.baseline = BaselineHazard::exponential(0.8);
  data.coefficients = {0.5, -0.3};
  data.subjects.push_back({t1, e1, {1.0, 0.2}});
  data.subjects.push_back({t2, e2, {0.0, 1.5}});
  return data;
}

}  // namespace

TEST_SUITE("applications") {

TEST_CASE("baseline hazards") {
  const BaselineHazard exp = BaselineHazard::exponential(2.0);
  CHECK(exp.hazard(1.3) == 2.0);
  CHECK(exp.cum_hazard(1.3) == doctest::Approx(2.6));
  const BaselineHazard wei = BaselineHazard::weibull(2.0, 1.5);
  CHECK(wei.cum_hazard(1.5) == doctest::Approx(1.0));
  // cumulative hazard is the integral of the hazard
  const double integral = num::integrate_adaptive(
      [&](double t) { return wei.hazard(t); }, 1e-12, 2.0, 1e-10);
  CHECK(integral == doctest::Approx(wei.cum_hazard(2.0)).epsilon(1e-8));
}

TEST_CASE("survival at zero hazard is one") {
  ClusterData data;
  data.baseline = BaselineHazard::exponential(1.0);
  data.subjects.push_back({1e-300, false, {}});
  CHECK(cluster_survival(data, gamma_delta(1.5, 0.5)) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate frailty survival in closed form") {
  const LatticePmf deg = from_table(Convention::delta, 2.0, {1.0}, "deg2");
  ClusterData data;
  data.baseline = BaselineHazard::exponential(0.5);
  data.subjects.push_back({2.0, false, {}});
  // S = (1 + H)^(-sigma(u0)) with H = 1
  CHECK(cluster_survival(data, deg) ==
        doctest::Approx(std::pow(2.0, -3.0)).epsilon(1e-12));
}

TEST_CASE("survival decreases along the time grid") {
  const LatticePmf frailty = gamma_delta(1.5, 0.5);
  double prev = 1.0 + 1e-12;
  for (int j = 0; j <= 40; ++j) {
    ClusterData data;
    data.baseline = BaselineHazard::exponential(0.7);
    data.subjects.push_back({0.05 + 0.25 * j, false, {}});
    const double s = cluster_survival(data, frailty);
    CHECK(s <= prev);
    CHECK(s > 0.0);
    prev = s;
  }
}

TEST_CASE("single subject density integrates to one") {
  // the lifetime tail is polynomial; substitute v = 1/(1+t) for an exact
  // finite-domain quadrature
  const LatticePmf deg = from_table(Convention::delta, 1.0, {1.0}, "deg1");
  auto density = [&](double t) {
    ClusterData data;
    data.baseline = BaselineHazard::exponential(1.0);
    data.subjects.push_back({t, true, {}});
    return cluster_likelihood(data, deg);
  };
  const double total = num::integrate_adaptive(
      [&](double v) { return density(1.0 / v - 1.0) / (v * v); }, 1e-9,
      1.0 - 1e-9, 1e-9);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("two-subject likelihood against the brute-force mixture") {
  for (const auto& frailty :
       {degenerate(Convention::delta, 1.0), geometric(Convention::delta, 0.4),
        gamma_delta(2.5, 1.0)}) {
    for (int mask = 0; mask < 4; ++mask) {
      const ClusterData data =
          two_subject_cluster(0.7, mask & 1, 1.9, mask & 2);
      const double direct = cluster_likelihood(data, frailty);
      const double brute = brute_force_likelihood(data, frailty);
      CHECK(direct == doctest::Approx(brute).epsilon(1e-8));
    }
  }
}

TEST_CASE("all-censored likelihood equals the survival") {
  const ClusterData data = two_subject_cluster(0.7, false, 1.9, false);
  const LatticePmf frailty = geometric(Convention::delta, 0.4);
  CHECK(cluster_likelihood(data, frailty) ==
        doctest::Approx(cluster_survival(data, frailty)).epsilon(1e-14));
}

TEST_CASE("likelihood is invariant under subject reordering") {
  ClusterData data = two_subject_cluster(0.7, true, 1.9, false);
  const LatticePmf frailty = gamma_delta(1.5, 0.5);
  const double a = cluster_likelihood(data, frailty);
  std::swap(data.subjects[0], data.subjects[1]);
  CHECK(cluster_likelihood(data, frailty) == doctest::Approx(a).epsilon(1e-14));
}

TEST_CASE("nabla frailty rejects hazards outside (0,1)") {
  ClusterData data;
  data.baseline = BaselineHazard::exponential(1.0);
  data.subjects.push_back({2.0, false, {}});
  CHECK_THROWS_AS(cluster_survival(data, geometric(Convention::nabla, 0.5)),
                  std::domain_error);
  data.subjects[0].time = 0.5;
  CHECK(cluster_survival(data, geometric(Convention::nabla, 0.5)) > 0.0);
}

TEST_CASE("reliability count comparison") {
  const std::vector<double> s_grid = {0.25, 0.5, 0.75};
  const LatticePmf x = geometric(Convention::nabla, 0.7);
  const LatticePmf y = geometric(Convention::nabla, 0.3);
  CHECK(ns_hazard_compare(x, x, s_grid, 12).outcome == Outcome::holds);
  // the closed-form pair from the battery: deg(2) against deg(5)
  const LatticePmf d2 = degenerate(Convention::nabla, 2.0);
  const LatticePmf d5 = degenerate(Convention::nabla, 5.0);
  const std::vector<double> half = {0.5};
  const auto v = ns_hazard_compare(d5, d2, half, 8);
  CHECK(v.outcome == Outcome::holds);
  const auto r = ns_hazard_compare(d2, d5, half, 8);
  CHECK(r.outcome == Outcome::fails);
  CHECK(r.witness.has_value());
  CHECK_THROWS_AS(ns_hazard_compare(x, gamma_delta(1.5, 0.5), s_grid, 8),
                  std::invalid_argument);
}

TEST_CASE("cluster csv ingestion") {
  std::stringstream csv;
  csv << "cluster,time,event,z1\n";
  csv << "a,0.7,1,1.0\n";
  csv << "a,1.9,0,0.0\n";
  csv << "b,0.4,1,0.5\n";
  const auto clusters =
      read_cluster_csv(csv, BaselineHazard::exponential(0.8), {0.5});
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].subjects.size() == 2);
  CHECK(clusters[1].subjects.size() == 1);
  CHECK(clusters[0].subjects[0].event);
  CHECK_FALSE(clusters[0].subjects[1].event);
  CHECK(clusters[0].subjects[1].time == doctest::Approx(1.9));
  const double like =
      cluster_likelihood(clusters[1], gamma_delta(1.5, 0.5));
  CHECK(like > 0.0);

  std::stringstream bad;
  bad << "a,0.7\n";
  CHECK_THROWS_AS(read_cluster_csv(bad, BaselineHazard::exponential(1.0), {}),
                  std::invalid_argument);
}

}  // TEST_SUITE
