#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mmslab/geoprobe.hpp"
#include "mmslab/models.hpp"

using namespace mmslab;

TEST_CASE("uniformity defect") {
  auto S = make_S({-6, 2});
  std::vector<double> radii;
  for (int e = -4; e <= 1; ++e) radii.push_back(std::ldexp(1.0, e));
  auto rep = uniformity_defect(S.space, radii);
  CHECK(rep.max_defect <= std::ldexp(1.0, -5) + 1e-12);  // quantization 2^{m+1}

  auto grid = make_R_grid(0.01, 4.0);
  std::vector<double> gr{0.25, 0.5, 1.0};
  std::vector<int> centers;
  for (int i = grid.base - 100; i <= grid.base + 100; i += 20) centers.push_back(i);
  auto grep = uniformity_defect(grid.space, gr, centers);
  CHECK(grep.max_defect <= 0.011);

  auto star = make_star_Sn(4);
  std::vector<double> sr{2.0, 4.0};
  auto srep = uniformity_defect(star.space, sr, 0);
  CHECK(srep.max_defect > 0.5);  // the star is far from uniform
}

TEST_CASE("covering numbers") {
  // spider midpoints need one unit ball each
  auto spider = make_spider_midpoints(5);
  std::vector<int> mids{1, 2, 3, 4, 5};
  auto res = covering_number(spider, mids, 1.0);
  CHECK(res.exact);
  CHECK(res.count == 5);

  // a ball covers itself at r' >= r
  auto S = make_S({0, 4});
  auto ball = covering_number(S.space, Ball{0, 2.0, Ball::Kind::Closed}, 2.0);
  CHECK(ball.exact);
  CHECK(ball.count == 1);

  // dyadic ball at half radius splits in two
  auto halves = covering_number(S.space, Ball{0, 4.0, Ball::Kind::Open}, 2.0);
  CHECK(halves.exact);
  CHECK(halves.count == 2);
}

TEST_CASE("doubling constants") {
  auto grid = make_R_grid(0.05, 4.0);
  std::vector<Ball> balls;
  for (int k = 0; k < 6; ++k) balls.push_back(Ball{grid.base + 5 * k, 1.0, Ball::Kind::Open});
  auto dg = doubling_constant(grid.space, balls);
  CHECK(dg.constant <= 3);

  auto S = make_S({0, 6});
  std::vector<Ball> sballs;
  for (double r : {2.0, 4.0, 8.0, 16.0})
    for (int c : {0, 5, 40}) sballs.push_back(Ball{c, r, Ball::Kind::Open});
  auto ds = doubling_constant(S.space, sballs);
  CHECK(ds.constant <= 5);  // the five-ball covering bound for uniform spaces

  auto spider = make_spider_midpoints(6);
  std::vector<Ball> pb{Ball{0, 2.0, Ball::Kind::Closed}};
  auto dp = doubling_constant(spider, pb);
  CHECK(dp.constant >= 6);  // all midpoints need separate unit balls
}

TEST_CASE("hausdorff upper estimate") {
  auto S = make_S({0, 4});
  CHECK(hausdorff_upper(S.space, 2.0) <= 32.0);  // 2^{n+1}
  CHECK(hausdorff_upper(S.space, 1.0) <= 32.0);

  auto single = FiniteMMS::dense(1, {0.0}, {1.0});
  CHECK(hausdorff_upper(single, 1.0) == 0.0);

  auto seg = make_R_grid(0.01, 0.5);  // the segment [-1/2, 1/2], length 1
  double h = hausdorff_upper(seg.space, 0.1);
  CHECK(h <= 1.0 + 0.2);
  CHECK(h >= 0.8);
}

TEST_CASE("lipschitz projection lower estimate") {
  auto S = make_S({0, 3});
  CHECK(lip_projection_lower(S.space) == doctest::Approx(16.0));  // 2^{n+1}

  // dyadic ball subset: r plus at most one quantum
  auto ball = ball_points(S.space, Ball{0, 4.0, Ball::Kind::Closed});
  double est = lip_projection_lower(S.space, ball);
  CHECK(std::fabs(est - 4.0) <= 1.0 + 1e-12);

  std::vector<int> none;
  CHECK(lip_projection_lower(S.space, none) == 0.0);

  auto grid = make_R_grid(0.1, 1.0);
  CHECK_THROWS_AS((void)lip_projection_lower(grid.space), Error);
}

TEST_CASE("separation profile") {
  auto S = make_S({-4, 2});
  std::vector<double> scales;
  for (int e = 2; e >= -3; --e) scales.push_back(std::ldexp(1.0, e));
  auto prof = separation_profile(S.space, scales);
  CHECK(prof.unrectifiable_evidence);
  for (auto& e : prof.entries) {
    if (e.cluster_count > 1 && e.max_cluster_diameter > 0.0)
      CHECK(e.min_cluster_separation / e.max_cluster_diameter >= 0.5);
  }
  // cluster counts double per dyadic scale on S
  for (std::size_t k = 1; k < prof.entries.size(); ++k)
    CHECK(prof.entries[k].cluster_count == 2 * prof.entries[k - 1].cluster_count);

  auto grid = make_R_grid(0.05, 1.0);
  std::vector<double> gs{0.5, 0.25};
  auto gprof = separation_profile(grid.space, gs);
  CHECK_FALSE(gprof.unrectifiable_evidence);
  for (auto& e : gprof.entries) CHECK(e.cluster_count == 1);

  // fine scales on T dissolve into singleton clusters: no evidence
  auto T = make_T({16, 0, 1});
  std::vector<double> ts{0.05, 0.025};
  auto tprof = separation_profile(T.space, ts);
  CHECK_FALSE(tprof.unrectifiable_evidence);
  for (auto& e : tprof.entries) CHECK(e.max_cluster_diameter == 0.0);
}

TEST_CASE("lp embedding stress") {
  // colinear three-point path embeds exactly in one euclidean dimension
  auto path = FiniteMMS::dense(3, {0, 1, 2, 1, 0, 1, 2, 1, 0}, {1, 1, 1});
  auto line = lp_embed_stress(path, 2.0, 1, 4, 7);
  CHECK(line.best_stress <= 1e-6);

  // the star embeds exactly in l1 via scaled axes
  auto star = make_star_Sn(3);
  auto l1 = lp_embed_stress(star.space, 1.0, 4, 4, 7);
  CHECK(l1.best_stress <= 1e-6);

  // strict convexity obstructs the euclidean embedding
  auto l2 = lp_embed_stress(star.space, 2.0, 5, 20, 7);
  CHECK(l2.best_stress >= 0.05);
  CHECK(l2.best_stress <= 0.5);

  // determinism
  auto again = lp_embed_stress(star.space, 2.0, 5, 20, 7);
  CHECK(again.best_stress == l2.best_stress);
}

TEST_CASE("heisenberg dilation identity") {
  auto rep = heisenberg_identity_check(1000, 4);
  CHECK(rep.max_rel_err <= 1e-10);
  CHECK(rep.samples == 1000);
}

TEST_CASE("heisenberg growth constant") {
  auto a = heisenberg_growth_constant(400, 11);
  auto b = heisenberg_growth_constant(400, 77);
  CHECK(a.constant >= 1.0);                      // t = 0 points give ratio 1
  CHECK(std::fabs(a.constant - std::sqrt(3.0)) <= 0.05);
  CHECK(std::fabs(a.constant - b.constant) <= 0.01);  // stable across seeds
}
