#include <cmath>

#include "doctest.h"
#include "tsorder/orders.hpp"

using namespace tsorder;

TEST_SUITE("orders") {

TEST_CASE("monotonicity check fragments") {
  std::vector<double> xs(16), flat(16, 1.0), up(16), blip(16, 1.0);
  for (int i = 0; i < 16; ++i) {
    xs[i] = i;
    up[i] = i * 0.1;
  }
  blip[7] = 1.0 - 1e-15;

  auto rep = monotonicity_check(xs, flat, Direction::increasing);
  CHECK(rep.outcome == Outcome::holds);
  CHECK(rep.max_violation == 0.0);
  CHECK(monotonicity_check(xs, flat, Direction::decreasing).outcome ==
        Outcome::holds);

  auto bad = monotonicity_check(xs, up, Direction::decreasing);
  CHECK(bad.outcome == Outcome::fails);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->v2 > bad.witness->v1);

  CHECK(monotonicity_check(xs, blip, Direction::increasing).outcome ==
        Outcome::holds);

  std::vector<double> tiny(4, 1.0);
  CHECK_THROWS_AS(monotonicity_check(tiny, Direction::increasing),
                  std::invalid_argument);
  std::vector<double> nan(16, 1.0);
  nan[3] = std::nan("");
  CHECK_THROWS_AS(monotonicity_check(nan, Direction::increasing),
                  std::invalid_argument);
}

TEST_CASE("transform order on geometric pairs") {
  const LatticePmf x = geometric(Convention::nabla, 0.7);
  const LatticePmf y = geometric(Convention::nabla, 0.3);
  CHECK(check_Lt(x, x).outcome == Outcome::holds);
  CHECK(check_Lt(x, y).outcome == Outcome::holds);
  const auto rev = check_Lt(y, x);
  CHECK(rev.outcome == Outcome::fails);
  CHECK(rev.witness.has_value());
  CHECK_THROWS_AS(check_Lt(x, gamma_delta(1.5, 0.5)), std::invalid_argument);
}

TEST_CASE("transform order on degenerate pair") {
  const LatticePmf a = degenerate(Convention::nabla, 2.0);
  const LatticePmf b = degenerate(Convention::nabla, 5.0);
  CHECK(check_Lt(a, b).outcome == Outcome::holds);
  CHECK(check_Lt(b, a).outcome == Outcome::fails);
}

TEST_CASE("ratio orders on geometric pairs") {
  const LatticePmf x = geometric(Convention::nabla, 0.7);
  const LatticePmf y = geometric(Convention::nabla, 0.3);
  CHECK(check_Lt_r(x, x).outcome == Outcome::holds);
  CHECK(check_Lt_r(x, y).outcome == Outcome::holds);
  CHECK(check_Lt_r(y, x).outcome == Outcome::fails);
  CHECK(check_r_Lt_r(x, y).outcome == Outcome::holds);
  CHECK(check_r_Lt_r(y, x).outcome == Outcome::fails);
}

TEST_CASE("derivative ratio orders") {
  const LatticePmf x = geometric(Convention::nabla, 0.7);
  const LatticePmf y = geometric(Convention::nabla, 0.3);
  CHECK(check_d_i_Lt_r(x, x, 1.0).outcome == Outcome::holds);
  CHECK(check_d_i_Lt_r(x, y, 1.0).outcome == Outcome::holds);
  CHECK(check_d_i_Lt_r(y, x, 1.0).outcome == Outcome::fails);
  CHECK(check_d_i_Lt_r(x, y, 2.0).outcome == Outcome::holds);
  // point-mass pairs reduce to pure powers of (1-s): every order agrees
  const LatticePmf a = degenerate(Convention::nabla, 3.0);
  const LatticePmf b = degenerate(Convention::nabla, 6.0);
  CHECK(check_d_i_Lt_r(a, b, 1.0).outcome == Outcome::holds);
  CHECK(check_d_i_Lt_r(a, b, 2.0).outcome ==
        check_d_i_Lt_r(a, b, 1.0).outcome);
  CHECK(check_d_i_Lt_r(b, a, 2.0).outcome ==
        check_d_i_Lt_r(b, a, 1.0).outcome);
  // non-integer order rejected on the nabla side
  CHECK_THROWS_AS(check_d_i_Lt_r(x, y, 1.5), std::domain_error);
  // and admitted on the delta side
  const LatticePmf dx = gamma_delta(1.5, 1.0);
  const LatticePmf dy = gamma_delta(1.5, 0.5);
  CHECK(check_d_i_Lt_r(dx, dy, 1.5).outcome == Outcome::holds);
  CHECK(check_d_i_Lt_r(dy, dx, 1.5).outcome == Outcome::fails);
}

TEST_CASE("conditioned derivative ratio order") {
  const LatticePmf n1 = degenerate(Convention::nabla, 3.0);
  const LatticePmf n2 = degenerate(Convention::nabla, 6.0);
  CHECK(check_D_i_Lt_r(n1, n1, 1).outcome == Outcome::holds);
  // ratio ~ (1-s)^3 decreasing: holds
  CHECK(check_D_i_Lt_r(n1, n2, 2).outcome == Outcome::holds);
  CHECK(check_D_i_Lt_r(n2, n1, 2).outcome == Outcome::fails);
  // i = 1 reduces to the plain derivative ratio order
  const LatticePmf g1 = geometric(Convention::nabla, 0.7);
  const LatticePmf g2 = geometric(Convention::nabla, 0.3);
  CHECK(check_D_i_Lt_r(g1, g2, 1).outcome ==
        check_d_i_Lt_r(g1, g2, 1.0).outcome);
  CHECK_THROWS_AS(check_D_i_Lt_r(n1, n2, 4), std::domain_error);
  // an identically vanishing derivative leaves the ratio undecided
  const LatticePmf d2 = degenerate(Convention::nabla, 2.0);
  CHECK(check_D_i_Lt_r(d2, n2, 2).outcome == Outcome::inconclusive);
}

TEST_CASE("conditioned fractional ratio order on delta point masses") {
  const LatticePmf k2 = from_table(Convention::delta, 1.0, {0.0, 1.0}, "k2");
  const LatticePmf k5 =
      from_table(Convention::delta, 1.0, {0.0, 0.0, 0.0, 0.0, 1.0}, "k5");
  const double gamma = 1.5;
  CHECK(check_D_gamma_Lt_r(k2, k2, gamma).outcome == Outcome::holds);
  CHECK(check_D_gamma_Lt_r(k2, k5, gamma).outcome == Outcome::holds);
  CHECK(check_D_gamma_Lt_r(k5, k2, gamma).outcome == Outcome::fails);
}

TEST_CASE("classical orders on pmf grids") {
  const LatticePmf x = geometric(Convention::nabla, 0.7);
  const LatticePmf y = geometric(Convention::nabla, 0.3);
  const std::size_t n = std::min(x.size(), y.size());
  GriddedDist f = gridded_from_pmf(x);
  GriddedDist g = gridded_from_pmf(y);
  f.x.resize(n);
  f.density.resize(n);
  f.cdf.resize(n);
  f.survival.resize(n);
  g.x.resize(n);
  g.density.resize(n);
  g.cdf.resize(n);
  g.survival.resize(n);
  for (Relation r : {Relation::St, Relation::Hr, Relation::Rh, Relation::Lr}) {
    CHECK(check_classical(r, f, f).outcome == Outcome::holds);
    CHECK(check_classical(r, f, g).outcome == Outcome::holds);
  }
  CHECK(check_classical(Relation::Lr, g, f).outcome == Outcome::fails);
  GriddedDist shifted = f;
  for (double& v : shifted.x) v += 0.5;
  CHECK_THROWS_AS(check_classical(Relation::St, f, shifted),
                  std::invalid_argument);
}

TEST_CASE("mixture law equivalences") {
  // transform orders of (X, Y) match classical orders of (xi(Y), xi(X))
  const EvalGrid grid = EvalGrid::standard(Convention::nabla);
  const std::vector<LatticePmf> members = {
      geometric(Convention::nabla, 0.7), geometric(Convention::nabla, 0.3),
      gamma_nabla(2.0, 0.5), degenerate(Convention::nabla, 4.0)};
  for (const auto& x : members) {
    for (const auto& y : members) {
      const GriddedDist xi_x = xi_distribution(x, grid);
      const GriddedDist xi_y = xi_distribution(y, grid);
      CHECK(check_Lt(x, y, &grid).outcome ==
            check_classical(Relation::St, xi_y, xi_x).outcome);
      CHECK(check_Lt_r(x, y, &grid).outcome ==
            check_classical(Relation::Hr, xi_y, xi_x).outcome);
      CHECK(check_r_Lt_r(x, y, &grid).outcome ==
            check_classical(Relation::Rh, xi_y, xi_x).outcome);
      CHECK(check_d_i_Lt_r(x, y, 1.0, &grid).outcome ==
            check_classical(Relation::Lr, xi_y, xi_x).outcome);
    }
  }
}

TEST_CASE("lr implies the derivative ratio order on the battery slice") {
  const std::vector<LatticePmf> members = {
      geometric(Convention::nabla, 0.7), geometric(Convention::nabla, 0.3),
      gamma_nabla(2.0, 0.5), gamma_nabla(3.5, 0.3)};
  for (const auto& x : members) {
    for (const auto& y : members) {
      const std::size_t n = std::min(x.size(), y.size());
      GriddedDist f = gridded_from_pmf(x);
      GriddedDist g = gridded_from_pmf(y);
      f.x.resize(n);
      f.density.resize(n);
      f.cdf.resize(n);
      f.survival.resize(n);
      g.x.resize(n);
      g.density.resize(n);
      g.cdf.resize(n);
      g.survival.resize(n);
      if (check_classical(Relation::Lr, f, g).outcome != Outcome::holds)
        continue;
      CHECK(check_d_i_Lt_r(x, y, 1.0).outcome == Outcome::holds);
    }
  }
}

TEST_CASE("transform order bounds the means") {
  const std::vector<LatticePmf> members = {
      geometric(Convention::nabla, 0.7), geometric(Convention::nabla, 0.3),
      gamma_nabla(2.0, 0.5), gamma_nabla(3.5, 0.6),
      degenerate(Convention::nabla, 4.0)};
  for (const auto& x : members) {
    for (const auto& y : members) {
      if (check_Lt(x, y).outcome != Outcome::holds) continue;
      CHECK(delta_moment(x, 1) <= delta_moment(y, 1) + 1e-8);
    }
  }
}

TEST_CASE("moment ratio series routes agree with transform ratios") {
  // deep truncation keeps high moments meaningful
  const LatticePmf x = geometric(Convention::nabla, 0.7, 1e-30);
  const LatticePmf y = geometric(Convention::nabla, 0.3, 1e-30);
  const auto mrs = moment_ratio_series(x, y, false, 24);
  CHECK(mrs.s_max > 0.0);
  CHECK(monotonicity_check(mrs.s, mrs.ratio, Direction::decreasing).outcome ==
        Outcome::holds);
  const auto rev = moment_ratio_series(y, x, false, 24);
  CHECK(monotonicity_check(rev.s, rev.ratio, Direction::decreasing).outcome ==
        Outcome::fails);
  // head terms are unit mass: ratio tends to 1 at 0+
  CHECK(mrs.ratio.front() == doctest::Approx(1.0).epsilon(1e-2));

  const auto tail = moment_ratio_series(x, y, true, 24);
  CHECK(monotonicity_check(tail.s, tail.ratio, Direction::decreasing).outcome ==
        Outcome::holds);

  // constant ratio for identical laws
  const auto same = moment_ratio_series(x, x, false, 24);
  for (double r : same.ratio) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));

  // delta side agreement with the transform route
  const LatticePmf dx = gamma_delta(2.5, 1.0, 1e-30);
  const LatticePmf dy = gamma_delta(2.5, 0.5, 1e-30);
  const auto dd = moment_ratio_series(dx, dy, false, 24);
  const TransformFn lx = laplace(dx);
  const TransformFn ly = laplace(dy);
  for (std::size_t i = 0; i < dd.s.size(); ++i) {
    CHECK(dd.ratio[i] ==
          doctest::Approx(ly(dd.s[i]) / lx(dd.s[i])).epsilon(1e-7));
  }
}

TEST_CASE("verdict json shape") {
  const auto v = check_Lt(geometric(Convention::nabla, 0.3),
                          geometric(Convention::nabla, 0.7));
  const auto j = v.to_json();
  CHECK(j["relation"] == "Lt");
  CHECK(j["outcome"] == "fails");
  CHECK(j["witness"].is_object());
  CHECK(j["grid"]["points"] == 512);
  CHECK(relation_from_string("r-Lt-r") == Relation::RevLtRatio);
  CHECK(to_string(Relation::FracDiffLtRatio) == "D-gamma-Lt-r");
  CHECK_THROWS_AS(relation_from_string("bogus"), std::invalid_argument);
}

}  // TEST_SUITE
