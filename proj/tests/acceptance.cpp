// Acceptance suite: every guarantee the toolkit ships with, one line of
// output per criterion.  Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsorder/applications.hpp"
#include "tsorder/cli.hpp"
#include "tsorder/montecarlo.hpp"
#include "tsorder/numerics.hpp"

using namespace tsorder;

namespace {

int g_failures = 0;

void report(int criterion, const char* what, bool pass,
            const std::string& detail = "") {
  std::printf("%s  criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
              what, detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------

void criterion_1_normalization() {
  double worst = 0.0;
  for (double beta : {0.3, 0.6}) {
    for (double alpha : {1.0, 2.0, 3.5}) {
      const LatticePmf x = gamma_nabla(alpha, beta, 1e-12);
      worst = std::max(worst, std::abs(x.total_mass() - 1.0));
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x.prob(i);
      worst = std::max(worst, std::abs(s + x.tail_mass() - 1.0));
    }
  }
  for (double alpha : {1.5, 2.5}) {
    for (double beta : {0.5, 1.0}) {
      const LatticePmf x = gamma_delta(alpha, beta, 1e-12);
      worst = std::max(worst, std::abs(x.total_mass() - 1.0));
    }
  }
  report(1, "gamma family pmfs normalize to 1 within 1e-10", worst < 1e-10,
         "max |mass-1| = " + fmt(worst));
}

void criterion_2_closed_form_transform() {
  const EvalGrid grid = EvalGrid::standard(Convention::nabla, 512);
  double worst = 0.0;
  for (double alpha : {1.0, 2.0, 3.5}) {
    for (double beta : {0.3, 0.6}) {
      const TransformFn lt = laplace(gamma_nabla(alpha, beta));
      for (double s : grid.s) {
        const double closed =
            std::pow(beta / (beta + s - beta * s), alpha);
        worst = std::max(worst, std::abs(lt(s) - closed));
      }
    }
  }
  report(2, "series transform matches the closed form within 1e-10",
         worst < 1e-10, "max deviation = " + fmt(worst));
}

void criterion_3_derivatives() {
  double worst_fd = 0.0;
  const EvalGrid grid = EvalGrid::standard(Convention::nabla, 128);
  for (const auto& x : {gamma_nabla(2.0, 0.5), gamma_nabla(3.5, 0.3),
                        geometric(Convention::nabla, 0.7)}) {
    const TransformFn lt = laplace(x);
    const TransformFn d1 = derivative_k(lt, 1);
    const TransformFn d2 = derivative_k(lt, 2);
    for (double s : grid.s) {
      const double h = 1e-5 * std::max(1.0, s);
      if (s - h <= 0.0 || s + h >= 1.0) continue;
      const double fd1 = (lt(s + h) - lt(s - h)) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(fd1 - d1(s)) /
                                        std::max(std::abs(d1(s)), 1e-6));
      const double fd2 = (d1(s + h) - d1(s - h)) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(fd2 - d2(s)) /
                                        std::max(std::abs(d2(s)), 1e-6));
    }
  }
  const LatticePmf xd = gamma_delta(2.5, 1.0);
  const TransformFn ltd = laplace(xd);
  const TransformFn d1d = derivative_k(ltd, 1);
  const TransformFn d2d = derivative_k(ltd, 2);
  for (double s : {0.05, 0.3, 1.0, 4.0, 20.0}) {
    const double h = 1e-5 * std::max(1.0, s);
    const double fd1 = (ltd(s + h) - ltd(s - h)) / (2.0 * h);
    worst_fd = std::max(worst_fd, std::abs(fd1 - d1d(s)) /
                                      std::max(std::abs(d1d(s)), 1e-9));
    const double fd2 = (d1d(s + h) - d1d(s - h)) / (2.0 * h);
    worst_fd = std::max(worst_fd, std::abs(fd2 - d2d(s)) /
                                      std::max(std::abs(d2d(s)), 1e-9));
  }

  double worst_closed = 0.0;
  for (int n : {3, 5, 8}) {
    const LatticePmf deg = degenerate(Convention::nabla, n);
    for (int i : {1, 2}) {
      const TransformFn d = derivative_k(laplace(deg), i);
      for (double s : {0.1, 0.4, 0.7, 0.95}) {
        double expect = (i % 2 == 0) ? 1.0 : -1.0;
        for (int j = 0; j < i; ++j) expect *= (n - 1.0 - j);
        expect *= std::pow(1.0 - s, n - 1.0 - i);
        worst_closed = std::max(
            worst_closed,
            std::abs(d(s) - expect) / std::max(std::abs(expect), 1e-12));
      }
    }
  }
  report(3, "termwise derivatives match finite differences and closed forms",
         worst_fd < 1e-7 && worst_closed < 1e-12,
         "fd = " + fmt(worst_fd) + ", closed = " + fmt(worst_closed));
}

void criterion_4_fractional_integer() {
  double worst = 0.0;
  const EvalGrid grid = EvalGrid::standard(Convention::delta, 512);
  for (double alpha : {1.5, 2.5}) {
    for (double beta : {0.5, 1.0}) {
      const LatticePmf x = gamma_delta(alpha, beta);
      for (int m : {1, 2, 3}) {
        const TransformFn frac = fractional_derivative_series(x, m);
        const TransformFn d = derivative_k(laplace(x), m);
        for (double s : grid.s) {
          worst = std::max(worst, std::abs(frac(s) - std::abs(d(s))) /
                                      std::max(1.0, std::abs(d(s))));
        }
      }
    }
  }
  report(4, "fractional series at integer orders equals the derivative series",
         worst < 1e-9, "max relative deviation = " + fmt(worst));
}

void criterion_5_classical_reduction() {
  const auto u_grid = quantile_grid(1024);
  double worst = 0.0;
  for (int n : {3, 5, 8}) {
    for (int i = 1; i < n; ++i) {
      const OsSpec spec = OsSpec::integer_os(
          i, ContinuousDist::uniform01(), degenerate(Convention::nabla, n));
      for (double u : u_grid) {
        const double beta = num::beta_pdf(u, i, n - i);
        worst = std::max(worst, std::abs(os_pdf_random_size(spec, u) - beta));
      }
    }
  }
  report(5, "fixed-size order statistic reduces to the beta density",
         worst < 1e-9, "max abs error = " + fmt(worst));
}

void criterion_6_fos_reduction() {
  const double gamma = 1.5;
  double worst = 0.0;
  for (double k : {2.0, 5.0}) {
    std::vector<double> probs(static_cast<std::size_t>(k), 0.0);
    probs.back() = 1.0;
    const LatticePmf deg =
        from_table(Convention::delta, 1.0, std::move(probs), "degdelta");
    const OsSpec spec =
        OsSpec::fractional_os(gamma, ContinuousDist::uniform01(), deg);
    for (int j = 1; j < 512; ++j) {
      const double u = j / 512.0;
      worst = std::max(worst, std::abs(fos_pdf_u(spec, u) -
                                       num::beta_pdf(u, gamma, k)));
    }
  }
  double worst_mass = 0.0;
  for (double alpha : {1.5, 2.5}) {
    for (double beta : {0.5, 1.0}) {
      const OsSpec spec = OsSpec::fractional_os(
          gamma, ContinuousDist::uniform01(), gamma_delta(alpha, beta));
      const double mass = num::integrate_adaptive(
          [&](double u) { return fos_pdf_u(spec, u); }, 1e-10, 1.0 - 1e-10,
          1e-9);
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
  }
  report(6, "fractional law reduces to the beta composition and normalizes",
         worst < 1e-8 && worst_mass < 1e-6,
         "beta dev = " + fmt(worst) + ", |mass-1| = " + fmt(worst_mass));
}

void criterion_7_simulation() {
  SimConfig cfg;
  cfg.seed = 7;
  cfg.replications = 100'000;
  bool pass = true;
  std::string detail;

  struct OsCase {
    OsSpec spec;
    bool strict;
  };
  const std::vector<OsCase> os_cases = {
      {OsSpec::integer_os(2, ContinuousDist::uniform01(),
                          degenerate(Convention::nabla, 5.0)),
       false},
      {OsSpec::integer_os(3, ContinuousDist::exponential(1.0),
                          degenerate(Convention::nabla, 8.0)),
       false},
      {OsSpec::integer_os(1, ContinuousDist::uniform01(),
                          gamma_nabla(2.0, 0.5)),
       false},
      {OsSpec::integer_os(2, ContinuousDist::weibull(1.5, 1.0),
                          gamma_nabla(3.5, 0.3)),
       true},
  };
  for (std::size_t c = 0; c < os_cases.size(); ++c) {
    SimConfig run = cfg;
    run.seed = cfg.seed + c;
    run.strict_conditioning = os_cases[c].strict;
    const OsSpec& spec = os_cases[c].spec;
    const Histogram h = simulate_os(spec, run);
    const auto emp = h.cdf_at_edges();
    const double scale =
        os_cases[c].strict
            ? pi(spec.size_dist, spec.index) /
                  pi(spec.size_dist, spec.index + 1.0)
            : 1.0;
    std::vector<double> ana(emp.size());
    for (std::size_t b = 0; b < emp.size(); ++b) {
      ana[b] = scale * os_cdf_u(spec, h.edges[b + 1]);
    }
    const double d = num::ks_distance(emp, ana);
    const double crit = num::ks_critical(0.01, h.accepted);
    if (d >= crit) {
      pass = false;
      detail += "os case " + std::to_string(c) + " KS " + fmt(d) + ">=" +
                fmt(crit) + "; ";
    }
  }

  const std::vector<LatticePmf> fos_sizes = {gamma_delta(2.5, 1.0),
                                             gamma_delta(1.5, 0.5)};
  for (std::size_t c = 0; c < fos_sizes.size(); ++c) {
    SimConfig run = cfg;
    run.seed = cfg.seed + 100 + c;
    const OsSpec spec = OsSpec::fractional_os(
        1.5, ContinuousDist::uniform01(), fos_sizes[c]);
    const Histogram h = simulate_fos(spec, run);
    const auto emp = h.cdf_at_edges();
    std::vector<double> ana(emp.size());
    for (std::size_t b = 0; b < emp.size(); ++b) {
      ana[b] = fos_cdf_u(spec, h.edges[b + 1]);
    }
    const double d = num::ks_distance(emp, ana);
    const double crit = num::ks_critical(0.01, h.accepted);
    if (d >= crit) {
      pass = false;
      detail += "fos case " + std::to_string(c) + " KS " + fmt(d) + ">=" +
                fmt(crit) + "; ";
    }
  }
  report(7, "simulators match the analytic laws at the 1% KS level", pass,
         detail.empty() ? "6 specs" : detail);
}

void criterion_8_theorem_suites() {
  const Battery battery = Battery::standard();
  SimConfig cfg;
  cfg.seed = 42;
  cfg.replications = 20'000;
  bool pass = true;
  std::string detail;
  const std::vector<std::string> ids = {"5.1", "5.3",  "5.6",  "5.7", "5.8",
                                        "5.9a", "6.2", "6.3a", "6.3c", "6.3d"};
  for (const std::string& id : ids) {
    const TheoremReport rep = verify_theorem(id, battery, cfg);
    const double rate =
        rep.pairs > 0 ? static_cast<double>(rep.inconclusive) / rep.pairs : 0.0;
    if (rep.inconsistent != 0 || rate >= 0.20) {
      pass = false;
      detail += id + " inconsistent=" + std::to_string(rep.inconsistent) +
                " inconclusive=" + fmt(100 * rate) + "%; ";
    }
  }
  report(8, "implication suites complete without inconsistencies", pass,
         detail.empty() ? "10 suites" : detail);
}

void criterion_9_random_sum() {
  SimConfig cfg;
  cfg.seed = 11;
  cfg.replications = 100'000;
  const EvalGrid grid = EvalGrid::standard(Convention::nabla, 512);
  const double bound = 5.0 / std::sqrt(double(cfg.replications));
  double worst = 0.0;
  const std::vector<std::pair<LatticePmf, LatticePmf>> pairs = {
      {gamma_nabla(2.0, 0.5), geometric(Convention::nabla, 0.7)},
      {geometric(Convention::nabla, 0.5), geometric(Convention::nabla, 0.3)},
      {degenerate(Convention::nabla, 3.0), gamma_nabla(2.0, 0.6)},
  };
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    SimConfig run = cfg;
    run.seed = cfg.seed + c;
    const CompoundResult r =
        simulate_compound(pairs[c].first, pairs[c].second, run, grid);
    worst = std::max(worst, r.max_abs_dev);
  }
  report(9, "random-sum transform composition matches the simulation",
         worst < bound,
         "max deviation = " + fmt(worst) + " vs bound " + fmt(bound));
}

void criterion_10_moment_link() {
  const Battery battery = Battery::standard();
  double worst = 0.0;
  auto run = [&](const std::vector<BatteryMember>& members) {
    for (const auto& m : members) {
      const LatticePmf deep = m.rebuild(1e-20);
      const TransformFn lt = laplace(deep);
      for (int k = 0; k <= 4; ++k) {
        const double moment = deep.convention() == Convention::delta
                                  ? nabla_moment(deep, k)
                                  : delta_moment(deep, k);
        double from_transform;
        if (k == 0) {
          from_transform = lt(1e-8);
        } else {
          const double sign = k % 2 == 0 ? 1.0 : -1.0;
          from_transform = sign * derivative_k(lt, k)(1e-8);
        }
        worst = std::max(worst, std::abs(from_transform - moment) /
                                    std::max(1.0, std::abs(moment)));
      }
    }
  };
  run(battery.nabla);
  run(battery.delta);
  report(10, "transform derivatives at 0+ generate the lattice moments",
         worst < 1e-6, "max relative deviation = " + fmt(worst));
}

void criterion_11_frailty_kernel() {
  double worst = 0.0;
  for (const auto& frailty : {degenerate(Convention::delta, 1.0),
                              geometric(Convention::delta, 0.4)}) {
    for (int mask = 0; mask < 4; ++mask) {
      ClusterData data;
      data.baseline = BaselineHazard::exponential(0.8);
      data.coefficients = {0.5, -0.3};
      data.subjects.push_back({0.7, (mask & 1) != 0, {1.0, 0.2}});
      data.subjects.push_back({1.9, (mask & 2) != 0, {0.0, 1.5}});
      const double direct = cluster_likelihood(data, frailty);

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
      double mix = 0.0;
      for (std::size_t i = 0; i < frailty.size(); ++i) {
        const double su = sigma(frailty.point(i));
        double coef = 1.0;
        for (int d = 0; d < events; ++d) coef *= su + d;
        mix += frailty.prob(i) * coef *
               std::pow(1.0 + total_hazard, -su - events);
      }
      const double brute = hazard_product * mix;
      worst = std::max(worst,
                       std::abs(direct - brute) / std::max(brute, 1e-300));
    }
  }
  report(11, "cluster likelihood matches the finite-mixture brute force",
         worst < 1e-8, "max relative deviation = " + fmt(worst));
}

void criterion_12_reproducibility(const char* cli_path) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path a = dir / "tsorder_accept_a.json";
  const fs::path b = dir / "tsorder_accept_b.json";
  bool pass = false;
  std::string detail;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (cli_path != nullptr && fs::exists(cli_path)) {
    const std::string base = std::string(cli_path) +
                             " verify --battery standard --seed 42 --reps 20000";
    const int rc1 = std::system((base + " --out " + a.string()).c_str());
    const int rc2 = std::system((base + " --out " + b.string()).c_str());
    const std::string ja = slurp(a);
    const std::string jb = slurp(b);
    pass = rc1 == 0 && rc2 == 0 && !ja.empty() && ja == jb;
    detail = "cli runs, " + std::to_string(ja.size()) + " bytes";
    fs::remove(a);
    fs::remove(b);
  } else {
    // fall back to the library path when the binary is not available
    RunConfig cfg;
    cfg.command = "verify";
    cfg.seed = 42;
    cfg.replications = 20'000;
    cfg.out = a.string();
    run(cfg);
    cfg.out = b.string();
    run(cfg);
    const std::string ja = slurp(a);
    const std::string jb = slurp(b);
    pass = !ja.empty() && ja == jb;
    detail = "library runs";
    fs::remove(a);
    fs::remove(b);
  }
  report(12, "verification reports are byte-identical across runs", pass,
         detail);
}

}  // namespace

int main(int argc, char** argv) {
  criterion_1_normalization();
  criterion_2_closed_form_transform();
  criterion_3_derivatives();
  criterion_4_fractional_integer();
  criterion_5_classical_reduction();
  criterion_6_fos_reduction();
  criterion_7_simulation();
  criterion_8_theorem_suites();
  criterion_9_random_sum();
  criterion_10_moment_link();
  criterion_11_frailty_kernel();
  criterion_12_reproducibility(argc > 1 ? argv[1] : nullptr);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
