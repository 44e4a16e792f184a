#include <doctest.h>

#include <cmath>

#include "mmslab/mms.hpp"
#include "mmslab/models.hpp"
#include "mmslab/rng.hpp"

using namespace mmslab;

TEST_CASE("make_S structure") {
  auto S = make_S({0, 1});
  CHECK(S.space.n() == 4);
  // masks index points by their bit pattern: 1 = e0, 2 = e1, 3 = e0+e1
  CHECK(S.space.d(0, 1) == 1.0);
  CHECK(S.space.d(0, 2) == 2.0);
  CHECK(S.space.d(0, 3) == 3.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(S.space.d(i, i) == 0.0);
    CHECK(S.space.weight(i) == 1.0);
  }
  CHECK_THROWS_AS((void)make_S({0, 25}), Error);  // size guard
}

TEST_CASE("make_S ball-measure law") {
  // |mu(C(x,r)) - r| <= 2^{m+1} for dyadic r in [2^{m+2}, 2^{n-1}]
  auto S = make_S({-3, 6});
  const double qm = std::ldexp(1.0, -3);
  Rng rng(42);
  for (int e = -1; e <= 5; ++e) {
    double r = std::ldexp(1.0, e);
    for (int trial = 0; trial < 8; ++trial) {
      int x = static_cast<int>(rng.below(S.space.n()));
      double m = ball_measure(S.space, Ball{x, r, Ball::Kind::Closed});
      CHECK(std::fabs(m - r) <= 2.0 * qm + 1e-12);
      // exact form at the base: closed dyadic ball gains exactly one quantum
      if (x == 0) CHECK(m == doctest::Approx(r + qm));
    }
  }
}

TEST_CASE("make_S center transitivity") {
  // the coordinate-flip map is a weight-preserving isometry exchanging s,t
  auto S = make_S({-2, 3});
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint32_t s = static_cast<std::uint32_t>(rng.below(S.space.n()));
    std::uint32_t t = static_cast<std::uint32_t>(rng.below(S.space.n()));
    std::uint32_t sigma = s ^ t;  // the flip map is index XOR sigma
    std::uint32_t u = static_cast<std::uint32_t>(rng.below(S.space.n()));
    std::uint32_t v = static_cast<std::uint32_t>(rng.below(S.space.n()));
    CHECK(S.space.d(static_cast<int>(u), static_cast<int>(v)) ==
          S.space.d(static_cast<int>(u ^ sigma), static_cast<int>(v ^ sigma)));
    CHECK(S.space.weight(static_cast<int>(u)) == S.space.weight(static_cast<int>(u ^ sigma)));
  }
}

TEST_CASE("make_T structure") {
  auto T = make_T({8, 0, 1});
  CHECK(T.space.n() == 16);
  // closed unit ball at the base has measure about 1
  double m = ball_measure(T.space, Ball{T.base, 1.0, Ball::Kind::Closed});
  CHECK(std::fabs(m - 1.0) <= 2.0 / 8.0 + 1e-12);
  // circle-only distances stay within the R/2Z diameter
  for (int c = 0; c < 8; ++c) CHECK(T.space.d(0, c) <= 1.0 + 1e-12);
  // flipping the lowest index costs 2^m
  CHECK(T.space.d(0, 8) == 1.0);  // same node, mask flipped
  auto T2 = make_T({8, 2, 1});
  CHECK(T2.space.d(0, 8) == 4.0);
  CHECK_THROWS_AS((void)make_T({7, 0, 1}), Error);        // odd circle
  CHECK_THROWS_AS((void)make_T({1 << 12, 0, 12}), Error);  // size guard
}

TEST_CASE("make_R_grid structure") {
  auto G = make_R_grid(0.05, 2.0);
  CHECK(G.space.d(G.base, G.base) == 0.0);
  for (int i = 0; i < G.space.n(); i += 13)
    for (int j = 0; j < G.space.n(); j += 11) CHECK(G.space.d(i, j) == G.space.d(j, i));
  double m = ball_measure(G.space, Ball{G.base, 1.0, Ball::Kind::Closed});
  CHECK(std::fabs(m - 1.0) <= 0.05);
}

TEST_CASE("make_star_Sn distances") {
  auto star = make_star_Sn(3);
  CHECK(star.space.d(0, 1) == 2.0);
  CHECK(star.space.d(1, 2) == 6.0);
  CHECK(star.space.d(1, 3) == 10.0);
  CHECK(star.space.d(2, 3) == 12.0);
  CHECK_FALSE(star.space.check_metric().has_value());
}

TEST_CASE("make_spider_midpoints") {
  auto spider = make_spider_midpoints(2);
  CHECK(spider.n() == 3);
  CHECK(spider.d(0, 1) == 2.0);
  CHECK(spider.d(1, 2) == 4.0);  // triangle equality 4 <= 2+2
  CHECK_FALSE(spider.check_metric().has_value());
}

TEST_CASE("heisenberg group operations") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    HeisenbergPoint a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    HeisenbergPoint b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
    HeisenbergPoint c{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};

    // identity and inverse
    auto e = heisenberg_mul(a, heisenberg_inv(a));
    CHECK(std::fabs(e.x) + std::fabs(e.y) + std::fabs(e.t) <= 1e-12);

    // associativity
    auto ab_c = heisenberg_mul(heisenberg_mul(a, b), c);
    auto a_bc = heisenberg_mul(a, heisenberg_mul(b, c));
    CHECK(ab_c.x == doctest::Approx(a_bc.x).epsilon(1e-12));
    CHECK(ab_c.t == doctest::Approx(a_bc.t).epsilon(1e-12));

    // dilation is a group automorphism and scales the gauge distance
    double lam = 2.0;
    auto da = heisenberg_dilate(a, lam);
    auto db = heisenberg_dilate(b, lam);
    auto dmul = heisenberg_dilate(heisenberg_mul(a, b), lam);
    auto mul_d = heisenberg_mul(da, db);
    CHECK(dmul.t == doctest::Approx(mul_d.t).epsilon(1e-12));
    double lhs = koranyi_norm(heisenberg_mul(heisenberg_inv(da), db));
    double rhs = lam * koranyi_norm(heisenberg_mul(heisenberg_inv(a), b));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  CHECK(koranyi_norm({1, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("heisenberg sample space") {
  auto H = make_heisenberg_sample(200, 1.0, 9);
  CHECK(H.space.n() == 200);
  CHECK(H.space.d(0, 0) == 0.0);
  CHECK_FALSE(H.space.check_metric().has_value());
  // determinism under the seed
  auto H2 = make_heisenberg_sample(200, 1.0, 9);
  CHECK(H.space.d(3, 77) == H2.space.d(3, 77));
  // left invariance: handled on raw points
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    HeisenbergPoint a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    HeisenbergPoint b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    HeisenbergPoint c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double d1 = koranyi_norm(heisenberg_mul(heisenberg_inv(a), b));
    double d2 = koranyi_norm(heisenberg_mul(heisenberg_inv(heisenberg_mul(c, a)),
                                            heisenberg_mul(c, b)));
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
  }
}

TEST_CASE("scale_space") {
  auto T = make_T({8, 0, 2});
  auto scaled = scale_space(T.space, 1.0);
  CHECK(scaled.d(1, 9) == T.space.d(1, 9));
  auto twice = scale_space(scale_space(T.space, 2.0), 3.0);
  auto six = scale_space(T.space, 6.0);
  CHECK(twice.d(1, 9) == doctest::Approx(six.d(1, 9)));
  // delta T = scale_space(make_T, delta) by definition
  auto dT = scale_space(T.space, 0.5);
  CHECK(dT.d(0, 8) == doctest::Approx(0.5 * T.space.d(0, 8)));
  CHECK(dT.weights() == T.space.weights());
}
