#include "tsorder/orders.hpp"

#include <algorithm>
#include <cmath>

namespace tsorder {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Lt: return "Lt";
    case Relation::LtRatio: return "Lt-r";
    case Relation::RevLtRatio: return "r-Lt-r";
    case Relation::DiffLtRatio: return "d-Lt-r";
    case Relation::CondDiffLtRatio: return "D-Lt-r";
    case Relation::FracDiffLtRatio: return "D-gamma-Lt-r";
    case Relation::St: return "st";
    case Relation::Hr: return "hr";
    case Relation::Rh: return "rh";
    case Relation::Lr: return "lr";
  }
  return "?";
}

Relation relation_from_string(const std::string& token) {
  if (token == "Lt") return Relation::Lt;
  if (token == "Lt-r") return Relation::LtRatio;
  if (token == "r-Lt-r") return Relation::RevLtRatio;
  if (token == "d-Lt-r") return Relation::DiffLtRatio;
  if (token == "D-Lt-r") return Relation::CondDiffLtRatio;
  if (token == "D-gamma-Lt-r") return Relation::FracDiffLtRatio;
  if (token == "st") return Relation::St;
  if (token == "hr") return Relation::Hr;
  if (token == "rh") return Relation::Rh;
  if (token == "lr") return Relation::Lr;
  throw std::invalid_argument("unknown relation: " + token);
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

MonotoneReport monotonicity_check(std::span<const double> xs,
                                  std::span<const double> values,
                                  Direction direction, double tol) {
  if (values.size() < 8) {
    throw std::invalid_argument("monotonicity_check: needs >= 8 grid points");
  }
  if (!xs.empty() && xs.size() != values.size()) {
    throw std::invalid_argument("monotonicity_check: grid size mismatch");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("monotonicity_check: non-finite value");
    }
  }
  MonotoneReport rep;
  rep.points_used = static_cast<int>(values.size());
  rep.max_violation = 0.0;
  // violation is the worst drawdown against the direction, so slow
  // sub-tolerance drifts accumulate instead of hiding between neighbors
  std::size_t worst_from = 0, worst_to = 0;
  std::size_t extreme_at = 0;
  double extreme = values[0];
  for (std::size_t j = 1; j < values.size(); ++j) {
    const double v = values[j];
    const double signedDiff =
        direction == Direction::increasing ? extreme - v : v - extreme;
    const double scale = std::max({std::abs(extreme), std::abs(v), 1e-300});
    const double viol = signedDiff / scale;
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      worst_from = extreme_at;
      worst_to = j;
    }
    const bool new_extreme =
        direction == Direction::increasing ? v > extreme : v < extreme;
    if (new_extreme) {
      extreme = v;
      extreme_at = j;
    }
  }
  if (rep.max_violation <= tol) {
    rep.outcome = Outcome::holds;
  } else {
    rep.outcome = Outcome::fails;
    Witness w;
    w.x1 = xs.empty() ? static_cast<double>(worst_from) : xs[worst_from];
    w.x2 = xs.empty() ? static_cast<double>(worst_to) : xs[worst_to];
    w.v1 = values[worst_from];
    w.v2 = values[worst_to];
    rep.witness = w;
  }
  return rep;
}

MonotoneReport monotonicity_check(std::span<const double> values,
                                  Direction direction, double tol) {
  return monotonicity_check({}, values, direction, tol);
}

nlohmann::ordered_json OrderVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["relation"] = to_string(relation);
  if (order_param != 0.0) j["order_param"] = order_param;
  j["outcome"] = to_string(outcome);
  j["max_violation"] = max_violation;
  if (witness) {
    j["witness"] = {{"x1", witness->x1},
                    {"x2", witness->x2},
                    {"v1", witness->v1},
                    {"v2", witness->v2}};
  } else {
    j["witness"] = nullptr;
  }
  j["grid"] = {{"name", grid.name},
               {"points", grid.points},
               {"lo", grid.lo},
               {"hi", grid.hi}};
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace {

EvalGrid default_grid(Convention c, const EvalGrid* grid) {
  return grid != nullptr ? *grid : EvalGrid::standard(c);
}

GridSpec spec_of(const EvalGrid& g) {
  GridSpec s;
  s.name = g.convention == Convention::delta ? "log-delta" : "uniform-nabla";
  s.points = static_cast<int>(g.s.size());
  s.lo = g.lo;
  s.hi = g.hi;
  return s;
}

void require_same_convention(const LatticePmf& x, const LatticePmf& y) {
  if (x.convention() != y.convention()) {
    throw std::invalid_argument("order check: mixed lattice conventions");
  }
}

struct RatioGrid {
  std::vector<double> xs;
  std::vector<double> values;
  int dropped = 0;
  bool bad = false;  // non-finite ratio encountered
};

RatioGrid build_ratio(std::span<const double> xs, std::span<const double> num,
                      std::span<const double> den) {
  RatioGrid out;
  out.xs.reserve(xs.size());
  out.values.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(num[i]) < kUnderflowFloor &&
        std::abs(den[i]) < kUnderflowFloor) {
      ++out.dropped;
      continue;
    }
    const double r = num[i] / den[i];
    if (!std::isfinite(r)) {
      out.bad = true;
      continue;
    }
    out.xs.push_back(xs[i]);
    out.values.push_back(r);
  }
  return out;
}

OrderVerdict ratio_verdict(Relation relation, const EvalGrid& grid,
                           const RatioGrid& ratio, Direction direction,
                           double tol, double order_param,
                           const std::string& note) {
  OrderVerdict v;
  v.relation = relation;
  v.grid = spec_of(grid);
  v.order_param = order_param;
  v.note = note;
  if (ratio.bad || ratio.values.size() < 8) {
    v.outcome = Outcome::inconclusive;
    v.note = v.note.empty() ? "ratio indeterminate on grid"
                            : v.note + "; ratio indeterminate on grid";
    return v;
  }
  MonotoneReport rep =
      monotonicity_check(ratio.xs, ratio.values, direction, tol);
  v.outcome = rep.outcome;
  v.witness = rep.witness;
  v.max_violation = rep.max_violation;
  if (ratio.dropped > 0) {
    v.note = v.note.empty()
                 ? "underflow points dropped: " + std::to_string(ratio.dropped)
                 : v.note + "; underflow points dropped: " +
                       std::to_string(ratio.dropped);
  }
  return v;
}

}  // namespace

OrderVerdict check_Lt(const LatticePmf& x, const LatticePmf& y,
                      const EvalGrid* grid_in, double tol) {
  require_same_convention(x, y);
  const EvalGrid grid = default_grid(x.convention(), grid_in);
  const auto lx = laplace(x).eval_grid(grid);
  const auto ly = laplace(y).eval_grid(grid);
  OrderVerdict v;
  v.relation = Relation::Lt;
  v.grid = spec_of(grid);
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < grid.s.size(); ++i) {
    const double gap = ly[i] - lx[i];
    if (gap > worst) {
      worst = gap;
      at = i;
    }
  }
  v.max_violation = worst;
  if (worst <= tol) {
    v.outcome = Outcome::holds;
  } else {
    v.outcome = Outcome::fails;
    v.witness = Witness{grid.s[at], grid.s[at], lx[at], ly[at]};
  }
  return v;
}

OrderVerdict check_Lt_r(const LatticePmf& x, const LatticePmf& y,
                        const EvalGrid* grid_in, double tol) {
  require_same_convention(x, y);
  const EvalGrid grid = default_grid(x.convention(), grid_in);
  const auto lx = laplace(x).eval_grid(grid);
  const auto ly = laplace(y).eval_grid(grid);
  const RatioGrid ratio = build_ratio(grid.s, lx, ly);
  return ratio_verdict(Relation::LtRatio, grid, ratio, Direction::increasing,
                       tol, 0.0, "");
}

OrderVerdict check_r_Lt_r(const LatticePmf& x, const LatticePmf& y,
                          const EvalGrid* grid_in, double tol) {
  require_same_convention(x, y);
  const EvalGrid grid = default_grid(x.convention(), grid_in);
  const auto lx = laplace(x).eval_grid(grid);
  const auto ly = laplace(y).eval_grid(grid);
  std::vector<double> num(grid.s.size()), den(grid.s.size());
  for (std::size_t i = 0; i < grid.s.size(); ++i) {
    num[i] = 1.0 - lx[i];
    den[i] = 1.0 - ly[i];
  }
  const RatioGrid ratio = build_ratio(grid.s, num, den);
  return ratio_verdict(Relation::RevLtRatio, grid, ratio,
                       Direction::increasing, tol, 0.0, "");
}

OrderVerdict check_d_i_Lt_r(const LatticePmf& x, const LatticePmf& y, double i,
                            const EvalGrid* grid_in, double tol) {
  require_same_convention(x, y);
  if (!(i > 0.0)) throw std::domain_error("check_d_i_Lt_r: requires i > 0");
  const bool integral = std::abs(i - std::round(i)) < 1e-12;
  if (x.convention() == Convention::nabla && !integral) {
    throw std::domain_error(
        "check_d_i_Lt_r: nabla transforms admit integer derivative orders only");
  }
  const EvalGrid grid = default_grid(x.convention(), grid_in);
  std::vector<double> dx, dy;
  if (integral) {
    const int k = static_cast<int>(std::round(i));
    dx = derivative_series(x, k).eval_grid(grid);
    dy = derivative_series(y, k).eval_grid(grid);
  } else {
    dx = fractional_derivative_series(x, i).eval_grid(grid);
    dy = fractional_derivative_series(y, i).eval_grid(grid);
  }
  const RatioGrid ratio = build_ratio(grid.s, dy, dx);
  return ratio_verdict(Relation::DiffLtRatio, grid, ratio,
                       Direction::decreasing, tol, i, "");
}

OrderVerdict check_D_i_Lt_r(const LatticePmf& n1, const LatticePmf& n2, int i,
                            const EvalGrid* grid_in, double tol) {
  require_same_convention(n1, n2);
  if (n1.convention() != Convention::nabla) {
    throw std::invalid_argument("check_D_i_Lt_r: requires nabla pmfs");
  }
  if (i < 1) throw std::domain_error("check_D_i_Lt_r: requires i >= 1");
  const double pi1 = pi(n1, i);
  const double pi2 = pi(n2, i);
  if (pi1 <= 0.0 || pi2 <= 0.0) {
    throw std::domain_error("check_D_i_Lt_r: zero conditioning probability");
  }
  const EvalGrid grid = default_grid(Convention::nabla, grid_in);
  auto d1 = derivative_series(n1, i).eval_grid(grid);
  auto d2 = derivative_series(n2, i).eval_grid(grid);
  // constant prefactor: cannot change monotonicity, retained for values
  const double pref = pi1 / pi2;
  for (double& v : d2) v *= pref;
  const RatioGrid ratio = build_ratio(grid.s, d2, d1);
  return ratio_verdict(Relation::CondDiffLtRatio, grid, ratio,
                       Direction::decreasing, tol, i,
                       "prefactor pi1/pi2=" + std::to_string(pref));
}

OrderVerdict check_D_gamma_Lt_r(const LatticePmf& n1, const LatticePmf& n2,
                                double gamma, const EvalGrid* grid_in,
                                double tol) {
  require_same_convention(n1, n2);
  if (n1.convention() != Convention::delta) {
    throw std::invalid_argument("check_D_gamma_Lt_r: requires delta pmfs");
  }
  if (!(gamma > 0.0)) {
    throw std::domain_error("check_D_gamma_Lt_r: requires gamma > 0");
  }
  const double pi1 = pi(n1, gamma);
  const double pi2 = pi(n2, gamma);
  if (pi1 <= 0.0 || pi2 <= 0.0) {
    throw std::domain_error("check_D_gamma_Lt_r: zero conditioning probability");
  }
  const EvalGrid grid = default_grid(Convention::delta, grid_in);
  auto d1 = fractional_derivative_series(n1, gamma).eval_grid(grid);
  auto d2 = fractional_derivative_series(n2, gamma).eval_grid(grid);
  const double pref = pi1 / pi2;
  for (double& v : d2) v *= pref;
  const RatioGrid ratio = build_ratio(grid.s, d2, d1);
  return ratio_verdict(Relation::FracDiffLtRatio, grid, ratio,
                       Direction::decreasing, tol, gamma,
                       "prefactor pi1/pi2=" + std::to_string(pref));
}

void GriddedDist::fill_cumulatives() {
  if (x.size() != density.size() || x.empty()) {
    throw std::invalid_argument("GriddedDist: bad density grid");
  }
  if (cdf.empty()) {
    cdf.resize(x.size());
    if (discrete) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        acc += density[i];
        cdf[i] = acc;
      }
    } else {
      cdf[0] = 0.0;
      for (std::size_t i = 1; i < x.size(); ++i) {
        cdf[i] = cdf[i - 1] +
                 0.5 * (density[i] + density[i - 1]) * (x[i] - x[i - 1]);
      }
    }
  }
  if (survival.empty()) {
    survival.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) survival[i] = 1.0 - cdf[i];
  }
}

GriddedDist gridded_from_pmf(const LatticePmf& pmf) {
  GriddedDist g;
  g.discrete = true;
  g.x.resize(pmf.size());
  g.density.resize(pmf.size());
  g.cdf.resize(pmf.size());
  g.survival.resize(pmf.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    g.x[i] = pmf.point(i);
    g.density[i] = pmf.prob(i);
    acc += pmf.prob(i);
    g.cdf[i] = acc;
    g.survival[i] = pmf.survival_after(i);
  }
  return g;
}

GriddedDist xi_distribution(const LatticePmf& pmf, const EvalGrid& grid) {
  if (grid.convention != pmf.convention()) {
    throw std::invalid_argument("xi_distribution: grid convention mismatch");
  }
  GriddedDist g;
  g.discrete = false;
  g.x = grid.s;
  g.density = psi_density(pmf).eval_grid(grid);
  const auto lap = laplace(pmf).eval_grid(grid);
  g.survival = lap;
  g.cdf.resize(lap.size());
  for (std::size_t i = 0; i < lap.size(); ++i) g.cdf[i] = 1.0 - lap[i];
  return g;
}

OrderVerdict check_classical(Relation order, const GriddedDist& f_in,
                             const GriddedDist& g_in, double tol) {
  GriddedDist f = f_in;
  GriddedDist g = g_in;
  if (f.x.size() != g.x.size()) {
    throw std::invalid_argument("check_classical: support mismatch");
  }
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    if (std::abs(f.x[i] - g.x[i]) > 1e-12) {
      throw std::invalid_argument("check_classical: support mismatch");
    }
  }
  f.fill_cumulatives();
  g.fill_cumulatives();

  GridSpec gs;
  gs.name = f.discrete ? "support" : "grid";
  gs.points = static_cast<int>(f.x.size());
  gs.lo = f.x.front();
  gs.hi = f.x.back();

  if (order == Relation::St) {
    OrderVerdict v;
    v.relation = Relation::St;
    v.grid = gs;
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      const double gap = f.survival[i] - g.survival[i];
      if (gap > worst) {
        worst = gap;
        at = i;
      }
    }
    v.max_violation = worst;
    if (worst <= tol) {
      v.outcome = Outcome::holds;
    } else {
      v.outcome = Outcome::fails;
      v.witness = Witness{f.x[at], f.x[at], f.survival[at], g.survival[at]};
    }
    return v;
  }

  const std::vector<double>* num = nullptr;
  const std::vector<double>* den = nullptr;
  switch (order) {
    case Relation::Hr:
      num = &g.survival;
      den = &f.survival;
      break;
    case Relation::Rh:
      num = &g.cdf;
      den = &f.cdf;
      break;
    case Relation::Lr:
      num = &g.density;
      den = &f.density;
      break;
    default:
      throw std::invalid_argument("check_classical: expects st/hr/rh/lr");
  }
  EvalGrid pseudo;
  pseudo.convention = Convention::delta;
  pseudo.s = f.x;
  pseudo.lo = gs.lo;
  pseudo.hi = gs.hi;
  const RatioGrid ratio = build_ratio(pseudo.s, *num, *den);
  OrderVerdict v = ratio_verdict(order, pseudo, ratio, Direction::increasing,
                                 tol, 0.0, "");
  v.grid = gs;
  return v;
}

MomentRatioSeries moment_ratio_series(const LatticePmf& x, const LatticePmf& y,
                                      bool tail_mode, int k_max) {
  require_same_convention(x, y);
  if (k_max < 4) throw std::invalid_argument("moment_ratio_series: k_max >= 4");
  const bool delta = x.convention() == Convention::delta;
  // take moments as far as the stored truncation supports them; fewer
  // than 8 usable orders leaves the series route inconclusive
  std::vector<double> mu, nu;
  for (int k = 0; k <= k_max; ++k) {
    try {
      const double mk = delta ? nabla_moment(x, k) : delta_moment(x, k);
      const double nk = delta ? nabla_moment(y, k) : delta_moment(y, k);
      mu.push_back(mk);
      nu.push_back(nk);
    } catch (const truncation_error&) {
      break;
    }
  }
  if (mu.size() < 9) {
    throw truncation_error(
        "moment_ratio_series: stored truncation supports too few moments");
  }
  k_max = static_cast<int>(mu.size()) - 1;

  // the alternating series sum_k (-s)^k m_k / k! converges on a disk;
  // keep s small enough that the k_max tail bound stays below 1e-9
  auto usable = [&](double s) {
    double t_prev = 0.0, t_last = 0.0, max_term = 0.0;
    double pow = 1.0, fact = 1.0;
    for (int k = 0; k <= k_max; ++k) {
      const double term = pow / fact * std::max(mu[k], nu[k]);
      max_term = std::max(max_term, term);
      t_prev = t_last;
      t_last = term;
      pow *= s;
      fact *= (k + 1.0);
    }
    if (max_term > 1e5) return false;
    if (t_prev <= 0.0) return t_last < 1e-12;
    const double r = t_last / t_prev;
    if (r >= 0.8) return false;
    return t_last * r / (1.0 - r) < 1e-9;
  };

  double s_max = delta ? 1.0 : 0.5;
  while (s_max > 1e-6 && !usable(s_max)) s_max *= 0.75;
  if (s_max <= 1e-6) {
    throw truncation_error("moment_ratio_series: series diverges on the grid");
  }

  MomentRatioSeries out;
  out.s_max = s_max;
  out.k_max = k_max;
  const int points = 64;
  const int k0 = tail_mode ? 1 : 0;
  for (int i = 1; i <= points; ++i) {
    const double s = s_max * i / points;
    double num = 0.0, den = 0.0;
    double pow = k0 == 1 ? -s : 1.0;
    double fact = k0 == 1 ? 1.0 : 1.0;
    for (int k = k0; k <= k_max; ++k) {
      num += pow / fact * nu[k];
      den += pow / fact * mu[k];
      pow *= -s;
      fact *= (k + 1.0);
    }
    out.s.push_back(s);
    out.ratio.push_back(num / den);
  }
  return out;
}

}  // namespace tsorder
