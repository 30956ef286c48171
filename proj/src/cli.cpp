#include "tsorder/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tsorder/applications.hpp"
#include "tsorder/montecarlo.hpp"
#include "tsorder/numerics.hpp"
#include "tsorder/order_statistics.hpp"
#include "tsorder/orders.hpp"

namespace tsorder {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double num_arg(const std::vector<std::string>& parts, std::size_t idx,
               const std::string& what) {
  if (idx >= parts.size()) {
    throw std::invalid_argument(what + ": missing parameter");
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(parts[idx], &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": bad numeric parameter '" +
                                parts[idx] + "'");
  }
  if (used != parts[idx].size()) {
    throw std::invalid_argument(what + ": bad numeric parameter '" +
                                parts[idx] + "'");
  }
  return v;
}

// atomic write: assemble in memory, then rename into place
void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + tmp);
    out << payload;
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_meta(const RunConfig& cfg, const std::string& grid_desc) {
  std::ostringstream head;
  head << "# tsorder " << kVersion << "\n";
  head << "# seed=" << cfg.seed << "\n";
  head << "# grid=" << grid_desc << "\n";
  head << "# tol=" << cfg.tol << "\n";
  return head.str();
}

nlohmann::ordered_json json_meta(const RunConfig& cfg,
                                 const std::string& grid_desc) {
  nlohmann::ordered_json meta;
  meta["version"] = kVersion;
  meta["seed"] = cfg.seed;
  meta["grid"] = grid_desc;
  meta["tol"] = cfg.tol;
  return meta;
}

std::string grid_desc(const EvalGrid& g) {
  std::ostringstream s;
  s << (g.convention == Convention::delta ? "log" : "uniform") << ":"
    << g.s.size() << ":[" << g.lo << "," << g.hi << "]";
  return s.str();
}

int run_transform(const RunConfig& cfg) {
  const LatticePmf x = parse_distribution(cfg.x);
  if (cfg.kind == "pmf") {
    std::ostringstream body;
    body << csv_meta(cfg, "support");
    write_pmf_csv(x, body);
    write_output(cfg.out, body.str());
    return kExitOk;
  }
  TransformFn fn = [&] {
    if (cfg.kind.empty() || cfg.kind == "laplace") return laplace(x);
    if (cfg.kind == "lstar") return lstar_lstarstar(x).first;
    if (cfg.kind == "lstarstar") return lstar_lstarstar(x).second;
    if (cfg.kind == "psi") return psi_density(x);
    if (cfg.kind == "derivative") {
      return derivative_k(laplace(x), static_cast<int>(std::llround(cfg.i)));
    }
    if (cfg.kind == "fractional") {
      return fractional_derivative_series(x, cfg.gamma);
    }
    throw std::invalid_argument("unknown transform kind: " + cfg.kind);
  }();
  const EvalGrid grid = EvalGrid::standard(x.convention(), cfg.grid_points);
  std::ostringstream body;
  body << csv_meta(cfg, grid_desc(grid));
  body << "s,value\n";
  body.precision(17);
  for (double s : grid.s) {
    body << s << "," << fn(s) << "\n";
  }
  write_output(cfg.out, body.str());
  return kExitOk;
}

int run_order_check(const RunConfig& cfg) {
  const LatticePmf x = parse_distribution(cfg.x);
  const LatticePmf y = parse_distribution(cfg.y);
  const Relation rel = relation_from_string(cfg.relation);
  const EvalGrid grid = EvalGrid::standard(x.convention(), cfg.grid_points);
  OrderVerdict verdict = [&] {
    switch (rel) {
      case Relation::Lt:
        return check_Lt(x, y, &grid, cfg.tol);
      case Relation::LtRatio:
        return check_Lt_r(x, y, &grid, cfg.tol);
      case Relation::RevLtRatio:
        return check_r_Lt_r(x, y, &grid, cfg.tol);
      case Relation::DiffLtRatio:
        return check_d_i_Lt_r(x, y, cfg.i, &grid, cfg.tol);
      case Relation::CondDiffLtRatio:
        return check_D_i_Lt_r(x, y, static_cast<int>(std::llround(cfg.i)),
                              &grid, cfg.tol);
      case Relation::FracDiffLtRatio:
        return check_D_gamma_Lt_r(x, y, cfg.gamma, &grid, cfg.tol);
      case Relation::St:
      case Relation::Hr:
      case Relation::Rh:
      case Relation::Lr: {
        const GriddedDist f = gridded_from_pmf(x);
        const GriddedDist g = gridded_from_pmf(y);
        if (f.x.size() != g.x.size()) {
          // classical checks need one support grid; trim to the overlap
          GriddedDist ft = f, gt = g;
          const std::size_t n = std::min(f.x.size(), g.x.size());
          for (auto* d : {&ft, &gt}) {
            d->x.resize(n);
            d->density.resize(n);
            d->cdf.resize(n);
            d->survival.resize(n);
          }
          return check_classical(rel, ft, gt, cfg.tol);
        }
        return check_classical(rel, f, g, cfg.tol);
      }
    }
    throw std::invalid_argument("unknown relation");
  }();
  nlohmann::ordered_json out;
  out["meta"] = json_meta(cfg, grid_desc(grid));
  out["x"] = x.label();
  out["y"] = y.label();
  out["verdict"] = verdict.to_json();
  write_output(cfg.out, out.dump(2) + "\n");
  return verdict.outcome == Outcome::fails ? kExitOrderFails : kExitOk;
}

int run_os_pdf(const RunConfig& cfg) {
  const LatticePmf size = parse_distribution(cfg.size);
  const ContinuousDist parent = parse_continuous(cfg.parent);
  const bool fractional = cfg.command == "fos-pdf";
  const OsSpec spec =
      fractional
          ? OsSpec::fractional_os(cfg.gamma, parent, size)
          : OsSpec::integer_os(static_cast<int>(std::llround(cfg.i)), parent,
                               size);
  const auto u_grid = quantile_grid(cfg.curve_points);
  std::ostringstream body;
  body << csv_meta(cfg, "quantile:" + std::to_string(cfg.curve_points));
  body << "u,x,pdf,cdf\n";
  body.precision(17);
  for (double u : u_grid) {
    const double x = parent.quantile(u);
    const double pdf =
        fractional ? fos_pdf_random_size(spec, x) : os_pdf_random_size(spec, x);
    const double cdf = fractional ? fos_cdf_u(spec, u) : os_cdf_u(spec, u);
    body << u << "," << x << "," << pdf << "," << cdf << "\n";
  }
  write_output(cfg.out, body.str());
  return kExitOk;
}

int run_simulate(const RunConfig& cfg) {
  SimConfig sim;
  sim.seed = cfg.seed;
  sim.replications = cfg.replications;
  sim.strict_conditioning = cfg.strict;
  sim.histogram_bins = cfg.bins;

  std::ostringstream body;
  if (cfg.kind == "compound") {
    const LatticePmf n = parse_distribution(cfg.size);
    const LatticePmf x = parse_distribution(cfg.x);
    const EvalGrid grid = EvalGrid::standard(Convention::nabla, cfg.grid_points);
    const CompoundResult r = simulate_compound(n, x, sim, grid);
    body << csv_meta(cfg, grid_desc(grid));
    body << "s,empirical,analytic\n";
    body.precision(17);
    for (std::size_t i = 0; i < r.s.size(); ++i) {
      body << r.s[i] << "," << r.empirical[i] << "," << r.analytic[i] << "\n";
    }
  } else if (cfg.kind == "os" || cfg.kind == "fos") {
    const LatticePmf size = parse_distribution(cfg.size);
    const ContinuousDist parent = parse_continuous(cfg.parent);
    const bool fractional = cfg.kind == "fos";
    const OsSpec spec =
        fractional
            ? OsSpec::fractional_os(cfg.gamma, parent, size)
            : OsSpec::integer_os(static_cast<int>(std::llround(cfg.i)),
                                 parent, size);
    const Histogram h = fractional ? simulate_fos(spec, sim)
                                   : simulate_os(spec, sim);
    const auto cdf = h.cdf_at_edges();
    body << csv_meta(cfg, "bins:" + std::to_string(cfg.bins));
    body << "# draws=" << h.draws << " accepted=" << h.accepted
         << " recorded=" << h.recorded << "\n";
    body << "u_lo,u_hi,count,empirical_cdf,analytic_cdf\n";
    body.precision(17);
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double edge = h.edges[b + 1];
      const double analytic =
          fractional ? fos_cdf_u(spec, edge) : os_cdf_u(spec, edge);
      body << h.edges[b] << "," << edge << "," << h.counts[b] << ","
           << cdf[b] << "," << analytic << "\n";
    }
  } else {
    throw std::invalid_argument("unknown simulate kind: " + cfg.kind);
  }
  write_output(cfg.out, body.str());
  return kExitOk;
}

int run_verify(const RunConfig& cfg) {
  if (cfg.battery != "standard") {
    throw std::invalid_argument("unknown battery: " + cfg.battery);
  }
  const Battery battery = Battery::standard();
  SimConfig sim;
  sim.seed = cfg.seed;
  sim.replications = cfg.replications;

  std::vector<std::string> ids;
  if (cfg.theorem == "all") {
    ids = theorem_ids();
  } else {
    ids.push_back(cfg.theorem);
  }
  nlohmann::ordered_json out;
  out["meta"] = json_meta(cfg, "standard");
  out["battery"] = cfg.battery;
  bool failed = false;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& id : ids) {
    const TheoremReport rep = verify_theorem(id, battery, sim);
    failed = failed || rep.failed();
    suites.push_back(rep.to_json());
  }
  out["failed"] = failed;
  out["suites"] = std::move(suites);
  write_output(cfg.out, out.dump(2) + "\n");
  return failed ? kExitOrderFails : kExitOk;
}

int run_battery(const RunConfig& cfg) {
  const Battery battery = Battery::standard();
  const double tol = cfg.tol;
  nlohmann::ordered_json out;
  out["meta"] = json_meta(cfg, "standard");
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  auto run_side = [&](const std::vector<BatteryMember>& members) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (a == b) continue;
        const auto& x = members[a].pmf;
        const auto& y = members[b].pmf;
        for (Relation rel : {Relation::Lt, Relation::LtRatio,
                             Relation::RevLtRatio, Relation::DiffLtRatio}) {
          OrderVerdict v;
          try {
            switch (rel) {
              case Relation::Lt: v = check_Lt(x, y, nullptr, tol); break;
              case Relation::LtRatio: v = check_Lt_r(x, y, nullptr, tol); break;
              case Relation::RevLtRatio:
                v = check_r_Lt_r(x, y, nullptr, tol);
                break;
              default: v = check_d_i_Lt_r(x, y, 1.0, nullptr, tol); break;
            }
          } catch (const std::exception& e) {
            v.relation = rel;
            v.outcome = Outcome::inconclusive;
            v.note = e.what();
          }
          nlohmann::ordered_json rec = v.to_json();
          rec["x"] = x.label();
          rec["y"] = y.label();
          verdicts.push_back(std::move(rec));
        }
      }
    }
  };
  run_side(battery.nabla);
  run_side(battery.delta);
  out["verdicts"] = std::move(verdicts);
  write_output(cfg.out, out.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

LatticePmf parse_distribution(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& family = parts[0];
  if (family == "geometric") {
    if (parts.size() != 3) {
      throw std::invalid_argument("geometric expects convention:p");
    }
    return geometric(convention_from_string(parts[1]),
                     num_arg(parts, 2, "geometric"));
  }
  if (family == "gamma_nabla") {
    return gamma_nabla(num_arg(parts, 1, "gamma_nabla"),
                       num_arg(parts, 2, "gamma_nabla"));
  }
  if (family == "gamma_delta") {
    return gamma_delta(num_arg(parts, 1, "gamma_delta"),
                       num_arg(parts, 2, "gamma_delta"));
  }
  if (family == "degenerate") {
    if (parts.size() != 3) {
      throw std::invalid_argument("degenerate expects convention:point");
    }
    return degenerate(convention_from_string(parts[1]),
                      num_arg(parts, 2, "degenerate"));
  }
  if (family == "table") {
    if (parts.size() < 2) {
      throw std::invalid_argument("table expects a csv path");
    }
    const std::string path = parts.back();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("table: cannot open " + path);
    return read_pmf_csv(in, path);
  }
  throw std::invalid_argument("unknown distribution family: " + family);
}

ContinuousDist parse_continuous(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& family = parts[0];
  if (family == "uniform") return ContinuousDist::uniform01();
  if (family == "exponential") {
    return ContinuousDist::exponential(num_arg(parts, 1, "exponential"));
  }
  if (family == "weibull") {
    return ContinuousDist::weibull(num_arg(parts, 1, "weibull"),
                                   num_arg(parts, 2, "weibull"));
  }
  throw std::invalid_argument("unknown parent family: " + family);
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  static const std::vector<std::string> known = {
      "command", "x",    "y",    "size",         "parent", "relation",
      "kind",    "i",    "gamma", "grid_points", "curve_points", "tol",
      "seed",    "replications", "bins", "strict", "theorem", "battery",
      "out",     "format"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw std::invalid_argument("unknown config key: " + key);
  }
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("command", cfg.command);
  get("x", cfg.x);
  get("y", cfg.y);
  get("size", cfg.size);
  get("parent", cfg.parent);
  get("relation", cfg.relation);
  get("kind", cfg.kind);
  get("i", cfg.i);
  get("gamma", cfg.gamma);
  get("grid_points", cfg.grid_points);
  get("curve_points", cfg.curve_points);
  get("tol", cfg.tol);
  get("seed", cfg.seed);
  get("replications", cfg.replications);
  get("bins", cfg.bins);
  get("strict", cfg.strict);
  get("theorem", cfg.theorem);
  get("battery", cfg.battery);
  get("out", cfg.out);
  get("format", cfg.format);
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands = {
      "transform", "order-check", "os-pdf", "fos-pdf",
      "simulate",  "verify",      "battery"};
  bool ok = false;
  for (const auto& c : commands) ok = ok || c == command;
  if (!ok) throw std::invalid_argument("unknown command: " + command);
  if (grid_points < 8 || grid_points > 8192) {
    throw std::invalid_argument("grid_points must lie in [8, 8192]");
  }
  if (curve_points < 8 || curve_points > 1 << 20) {
    throw std::invalid_argument("curve_points out of range");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format must be csv or json");
  }
}

int run(const RunConfig& cfg) {
  cfg.validate();
  try {
    if (cfg.command == "transform") return run_transform(cfg);
    if (cfg.command == "order-check") return run_order_check(cfg);
    if (cfg.command == "os-pdf" || cfg.command == "fos-pdf") {
      return run_os_pdf(cfg);
    }
    if (cfg.command == "simulate") return run_simulate(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "battery") return run_battery(cfg);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitBadConfig;
}

}  // namespace tsorder
