#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmslab/mms.hpp"
#include "mmslab/models.hpp"

using namespace mmslab;

namespace {

// Brute-force oracle, independent of the kernel paths.
double naive_ball_measure(const FiniteMMS& s, const Ball& b) {
  double m = 0.0;
  for (int i = 0; i < s.n(); ++i) {
    double d = s.d(b.center, i);
    bool in = b.kind == Ball::Kind::Open ? (d < b.radius - kTieTol) : (d <= b.radius + kTieTol);
    if (in) m += s.weight(i);
  }
  return m;
}

}  // namespace

TEST_CASE("ball_points basics") {
  auto star = make_star_Sn(3);
  // open radius 2 at s0 excludes s1 at distance exactly 2
  auto pts = ball_points(star.space, Ball{0, 2.0, Ball::Kind::Open});
  CHECK(pts == std::vector<int>{0});
  // closed radius 0 returns the points at distance zero
  auto zero = ball_points(star.space, Ball{2, 0.0, Ball::Kind::Closed});
  CHECK(zero == std::vector<int>{2});
  // open radius 0 is empty
  CHECK(ball_points(star.space, Ball{0, 0.0, Ball::Kind::Open}).empty());

  auto S = make_S({0, 4});
  auto b3 = ball_points(S.space, Ball{0, 3.0, Ball::Kind::Closed});
  CHECK(b3 == std::vector<int>{0, 1, 2, 3});  // values 0,1,2,3 = {0, e0, e1, e0+e1}
}

TEST_CASE("ball_measure matches the brute-force oracle") {
  auto S = make_S({0, 8});
  Ball b{0, 16.0, Ball::Kind::Closed};
  CHECK(ball_measure(S.space, b) == doctest::Approx(17.0));  // closed ball gains the sphere
  CHECK(ball_measure(S.space, b) == doctest::Approx(naive_ball_measure(S.space, b)));

  auto grid = make_R_grid(0.01, 10.0);
  Ball g1{grid.base, 1.0, Ball::Kind::Closed};
  double m = ball_measure(grid.space, g1);
  CHECK(std::fabs(m - 1.0) <= 0.01);
  CHECK(m == doctest::Approx(naive_ball_measure(grid.space, g1)));

  // empty ball
  CHECK(ball_measure(grid.space, Ball{0, 0.0, Ball::Kind::Open}) == 0.0);

  auto T = make_T({16, 0, 2});
  for (double r : {0.3, 1.0, 2.5}) {
    Ball tb{T.base, r, Ball::Kind::Closed};
    CHECK(ball_measure(T.space, tb) == doctest::Approx(naive_ball_measure(T.space, tb)));
  }
}

TEST_CASE("rescale") {
  auto S = make_S({-4, 8});
  // identity when the unit ball already has mass 1
  auto p1 = rescale(S, 2.0);
  CHECK(ball_measure(p1.space, Ball{p1.base, 1.0, Ball::Kind::Open}) == doctest::Approx(1.0));

  // composition law: rescale(rescale(p,a),b) = rescale(p,ab)
  auto a = rescale(S, 0.5);
  auto ab = rescale(a, 4.0);
  auto direct = rescale(S, 2.0);
  for (int i : {0, 3, 17, 100}) {
    CHECK(ab.space.d(0, i) == direct.space.d(0, i));  // exact on distances
    CHECK(std::fabs(ab.space.weight(i) - direct.space.weight(i)) <= 1e-12);
  }

  // zero-mass guard
  auto tiny = make_S({0, 1});
  CHECK_THROWS_AS((void)rescale(PointedMMS{tiny.space, tiny.base}, 1e-9), Error);
}

TEST_CASE("glue") {
  auto S = make_S({0, 3});
  // identity self-glue with zero slack: cross distance equals the original
  Correspondence ident;
  for (int i = 0; i < S.space.n(); ++i) ident.pairs.push_back({i, i});
  auto g = glue(S, S, ident);
  for (int i = 0; i < S.space.n(); ++i)
    for (int j = 0; j < S.space.n(); ++j)
      CHECK(g.space.d(g.map_x[i], g.map_y[j]) == doctest::Approx(S.space.d(i, j)));
  CHECK_FALSE(g.space.check_metric().has_value());

  // two one-point spaces at slack 0.5
  auto one = PointedMMS{FiniteMMS::dense(1, {0.0}, {1.0}), 0};
  auto g2 = glue(one, one, Correspondence{{{0, 0}}, 0.5});
  CHECK(g2.space.d(0, 1) == doctest::Approx(0.5));

  // base-only correspondence realizes d_X(u, base) + slack + d_Y(base, v)
  auto T = make_S({0, 2});
  auto g3 = glue(S, T, Correspondence{{{S.base, T.base}}, 0.25});
  for (int u = 0; u < S.space.n(); ++u)
    for (int v = 0; v < T.space.n(); ++v)
      CHECK(g3.space.d(g3.map_x[u], g3.map_y[v]) ==
            doctest::Approx(S.space.d(u, S.base) + 0.25 + T.space.d(T.base, v)));
  CHECK_FALSE(g3.space.check_metric().has_value());

  // collapsing correspondence is rejected: matching two far X points to the
  // same Y point with zero slack would shrink their distance
  auto grid = make_R_grid(1.0, 2.0);  // 5 points at -2..2
  Correspondence bad;
  bad.pairs = {{grid.base, 0}, {0, 0}, {4, 0}};
  CHECK_THROWS_AS((void)glue(grid, one, bad), Error);
}

TEST_CASE("restrict") {
  auto S = make_S({0, 3});
  std::vector<int> all(S.space.n());
  for (int i = 0; i < S.space.n(); ++i) all[i] = i;
  auto same = restrict_space(S.space, all);
  CHECK(same.n() == S.space.n());
  CHECK(same.d(1, 5) == S.space.d(1, 5));

  std::vector<int> one{3};
  auto single = restrict_space(S.space, one);
  CHECK(single.n() == 1);

  std::vector<int> none;
  CHECK_THROWS_AS((void)restrict_space(S.space, none), Error);

  // ball slice of T keeps the circle-cube geometry
  auto T = make_T({16, 0, 2});
  auto ball = ball_points(T.space, Ball{T.base, 1.5, Ball::Kind::Closed});
  auto slice = restrict_space(T.space, ball);
  CHECK(slice.geometry() == Geometry::CircleCube);
  for (std::size_t a = 0; a < ball.size(); ++a)
    for (std::size_t b = 0; b < ball.size(); ++b)
      CHECK(slice.d(static_cast<int>(a), static_cast<int>(b)) ==
            doctest::Approx(T.space.d(ball[a], ball[b])));
}

TEST_CASE("density_profile") {
  auto grid = make_R_grid(0.01, 10.0);
  std::vector<double> radii{0.5, 1.0, 2.0};
  auto prof = density_profile(grid, radii);
  for (auto& [r, v] : prof) CHECK(std::fabs(v - 0.5) <= 0.02);

  // saturation beyond the diameter
  auto S = make_S({0, 3});
  std::vector<double> big{100.0};
  auto sat = density_profile(S, big);
  CHECK(sat[0].second == doctest::Approx(S.space.total_mass() / 200.0));

  // dyadic radii on S sit near 1/2 as well
  std::vector<double> dy{1.0, 2.0, 4.0};
  for (auto& [r, v] : density_profile(S, dy)) {
    CHECK(v >= 0.5);
    CHECK(v <= 0.5 + 1.0 / (2.0 * r) + 1e-12);
  }
}

TEST_CASE("metric axioms hold for constructors") {
  CHECK_FALSE(make_S({-2, 4}).space.check_metric().has_value());
  CHECK_FALSE(make_T({8, 0, 2}).space.check_metric().has_value());
  CHECK_FALSE(make_R_grid(0.25, 3.0).space.check_metric().has_value());
  CHECK_FALSE(make_star_Sn(4).space.check_metric().has_value());
  CHECK_FALSE(make_spider_midpoints(5).check_metric().has_value());
  CHECK_FALSE(make_circle(32, 2.0).space.check_metric().has_value());
}

TEST_CASE("coarsen aggregates mass onto a net") {
  auto grid = make_R_grid(0.01, 2.0);
  auto c = coarsen(grid, 0.1);
  CHECK(c.space.space.n() < grid.space.n());
  CHECK(c.space.space.total_mass() == doctest::Approx(grid.space.total_mass()));
  // net property: every original point is within eta of some representative
  for (int i = 0; i < grid.space.n(); i += 7) {
    double best = 1e300;
    for (int r : c.representative) best = std::min(best, grid.space.d(i, r));
    CHECK(best <= 0.1 + 1e-12);
  }
  // base kept
  CHECK(c.representative[0] == grid.base);
}
