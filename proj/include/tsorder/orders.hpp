#pragma once

#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "tsorder/transforms.hpp"

namespace tsorder {

/// Relations decided by this module.  Transform-based relations follow
/// the lattice transform conventions; st/hr/rh/lr are the classical
/// orders over gridded densities or pmfs.
enum class Relation {
  Lt,              // transform dominance
  LtRatio,         // transform ratio increasing
  RevLtRatio,      // (1 - transform) ratio increasing
  DiffLtRatio,     // i-th derivative ratio decreasing
  CondDiffLtRatio, // derivative ratio with conditioning prefactor
  FracDiffLtRatio, // fractional derivative ratio with prefactor
  St,
  Hr,
  Rh,
  Lr,
};

std::string to_string(Relation r);
Relation relation_from_string(const std::string& token);

enum class Outcome { holds, fails, inconclusive };
std::string to_string(Outcome o);

enum class Direction { increasing, decreasing };

inline constexpr double kOrderTol = 1e-9;
inline constexpr double kUnderflowFloor = 1e-280;

struct Witness {
  double x1 = 0.0, x2 = 0.0;  // adjacent grid arguments
  double v1 = 0.0, v2 = 0.0;  // values there
};

struct GridSpec {
  std::string name;
  int points = 0;
  double lo = 0.0, hi = 0.0;
};

struct MonotoneReport {
  Outcome outcome = Outcome::inconclusive;
  std::optional<Witness> witness;
  double max_violation = 0.0;
  int points_used = 0;
  std::string note;
};

/// Scans consecutive differences of `values` against `direction`.
/// Violations are normalized by the local magnitude; the verdict is
/// `holds` when the worst violation stays within tol.
MonotoneReport monotonicity_check(std::span<const double> xs,
                                  std::span<const double> values,
                                  Direction direction, double tol = kOrderTol);
MonotoneReport monotonicity_check(std::span<const double> values,
                                  Direction direction, double tol = kOrderTol);

struct OrderVerdict {
  Relation relation;
  Outcome outcome = Outcome::inconclusive;
  std::optional<Witness> witness;
  double max_violation = 0.0;
  GridSpec grid;
  double order_param = 0.0;  // i or gamma where applicable
  std::string note;

  nlohmann::ordered_json to_json() const;
};

/// X <= Y in transform order: L_X(s) >= L_Y(s) - tol on the grid.
OrderVerdict check_Lt(const LatticePmf& x, const LatticePmf& y,
                      const EvalGrid* grid = nullptr, double tol = kOrderTol);

/// L_X / L_Y increasing on the grid.
OrderVerdict check_Lt_r(const LatticePmf& x, const LatticePmf& y,
                        const EvalGrid* grid = nullptr, double tol = kOrderTol);

/// (1 - L_X) / (1 - L_Y) increasing on the grid.
OrderVerdict check_r_Lt_r(const LatticePmf& x, const LatticePmf& y,
                          const EvalGrid* grid = nullptr,
                          double tol = kOrderTol);

/// L^(i)_Y / L^(i)_X decreasing.  Nabla pmfs require integer i; delta
/// pmfs admit real i > 0 through the fractional series.
OrderVerdict check_d_i_Lt_r(const LatticePmf& x, const LatticePmf& y, double i,
                            const EvalGrid* grid = nullptr,
                            double tol = kOrderTol);

/// Conditioned variant for nabla sample sizes:
/// pi_1^i L^(i)_2 / (pi_2^i L^(i)_1) decreasing on (0,1).
OrderVerdict check_D_i_Lt_r(const LatticePmf& n1, const LatticePmf& n2, int i,
                            const EvalGrid* grid = nullptr,
                            double tol = kOrderTol);

/// Conditioned fractional variant for delta sample sizes.
OrderVerdict check_D_gamma_Lt_r(const LatticePmf& n1, const LatticePmf& n2,
                                double gamma, const EvalGrid* grid = nullptr,
                                double tol = kOrderTol);

/// A distribution tabulated on a common grid.  cdf/survival are filled
/// from the density when not supplied (cumulative trapezoid / cumsum).
struct GriddedDist {
  std::vector<double> x;
  std::vector<double> density;
  std::vector<double> cdf;
  std::vector<double> survival;
  bool discrete = false;

  void fill_cumulatives();
};

GriddedDist gridded_from_pmf(const LatticePmf& pmf);

/// Law of the mixture variable xi(X) on the transform domain: density
/// psi, cdf 1 - L, survival L (exact, any atom at the upper endpoint
/// stays in the cdf).
GriddedDist xi_distribution(const LatticePmf& pmf, const EvalGrid& grid);

/// Classical orders on a common grid: st (survival dominance), hr
/// (survival ratio), rh (cdf ratio), lr (density ratio); decides f <= g.
OrderVerdict check_classical(Relation order, const GriddedDist& f,
                             const GriddedDist& g, double tol = kOrderTol);

struct MomentRatioSeries {
  std::vector<double> s;
  std::vector<double> ratio;
  double s_max = 0.0;
  int k_max = 0;
};

/// Ratio of the alternating moment series of Y over X on a reduced grid
/// where the K_max tail bound stays below 1e-9.  `tail_mode` starts the
/// series at k = 1.  Feeds monotonicity_check (decreasing <=> the
/// corresponding ratio order holds).
MomentRatioSeries moment_ratio_series(const LatticePmf& x, const LatticePmf& y,
                                      bool tail_mode, int k_max = 40);

}  // namespace tsorder
