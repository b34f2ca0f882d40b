#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace evokit;
using std::numbers::pi;

namespace {

CurveSpec figure_eight() {
  CurveSpec c;
  c.name = "figure_eight";
  c.a = 0;
  c.b = 2 * pi;
  c.position = [](double t) { return Vec2{std::sin(2 * t), std::sin(t)}; };
  c.derivatives = {[](double t) { return Vec2{2 * std::cos(2 * t), std::cos(t)}; },
                   [](double t) { return Vec2{-4 * std::sin(2 * t), -std::sin(t)}; },
                   [](double t) { return Vec2{-8 * std::cos(2 * t), -std::cos(t)}; }};
  return c;
}

}  // namespace

TEST(Osculating, CircleCentre) {
  const ArcCurve ac = arc(catalog::circle(2.0));
  for (double s : {0.0, 1.0, 7.5}) {
    const OsculatingCircle c = osculating_circle(ac, s);
    EXPECT_LT(norm(c.center), 1e-10);
    EXPECT_NEAR(c.radius, 2.0, 1e-10);
  }
}

TEST(Osculating, EllipseVertex) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  const OsculatingCircle c = osculating_circle(ac, ac.s_of_param(0.0));
  EXPECT_NEAR(c.radius, 1.0 / oracle::ellipse_curvature(2, 1, 0.0), 1e-9);
  EXPECT_NEAR(c.center.y, 0.0, 1e-9);
  EXPECT_NEAR(c.center.x, 1.5, 1e-9);
}

TEST(Osculating, CentreIsEvolutePoint) {
  auto ac = std::make_shared<const ArcCurve>(arc(catalog::limacon()));
  const EvoluteCurve ev = evolute(ac);
  const double s0 = ac->s_of_param(0.0);
  EXPECT_LT(distance(osculating_circle(*ac, s0).center, ev.point_at(s0)), 1e-12);
  const Frame f = eval_frame(*ac, s0);
  EXPECT_LT(distance(osculating_circle(*ac, s0).center - f.point, f.radius() * f.normal), 1e-12);
}

TEST(Osculating, ZeroCurvature) {
  CurveSpec line;
  line.name = "line";
  line.a = 0;
  line.b = 1;
  line.position = [](double t) { return Vec2{t, 2 * t}; };
  const ArcCurve ac = arc(line);
  try {
    osculating_circle(ac, 0.5);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroCurvature);
  }
}

TEST(Nesting, SpiralDisksAreNested) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1));
  const NestingResult r = tait_kneser_check(ac, ac.s_of_param(0.0), ac.s_of_param(2.0), 200);
  EXPECT_TRUE(r.nested);
  EXPECT_GT(r.worst_margin, 0.0);
  EXPECT_EQ(r.pairs, 200u);
  for (const auto& [a, b] : random_pairs(ac.s_of_param(0.0), ac.s_of_param(2.0), 200, 99)) {
    const auto ca = osculating_circle(ac, a), cb = osculating_circle(ac, b);
    EXPECT_TRUE(oracle::disks_nested(op(ca.center), ca.radius, op(cb.center), cb.radius, 0.0));
  }
}

TEST(Nesting, CircleIsDegenerate) {
  const ArcCurve ac = arc(catalog::circle(1.0));
  const NestingResult r = tait_kneser_check(ac, ac.s_begin(), ac.s_end(), 100);
  EXPECT_TRUE(r.nested);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.worst_margin, 0.0, 1e-9);
}

TEST(Nesting, VertexInsideRangeIsRejected) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  try {
    tait_kneser_check(ac, ac.s_of_param(-0.3), ac.s_of_param(0.3), 10);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonMonotonePrecondition);
  }
}

TEST(Nesting, DisksFormAChain) {
  // Inclusion is transitive along s: for a < b < c, D(c) in D(b) in D(a) or the reverse.
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1));
  const auto pairs = random_pairs(ac.s_begin(), ac.s_end(), 60, 3);
  for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
    std::array<double, 3> s = {pairs[k].first, pairs[k].second, pairs[k + 1].first};
    std::sort(s.begin(), s.end());
    const auto a = osculating_circle(ac, s[0]), b = osculating_circle(ac, s[1]), c = osculating_circle(ac, s[2]);
    EXPECT_LT(a.radius, b.radius);
    EXPECT_LT(b.radius, c.radius);
    EXPECT_GE(nesting_margin(a, b), -kNestingSlack);
    EXPECT_GE(nesting_margin(b, c), -kNestingSlack);
    EXPECT_GE(nesting_margin(a, c), -kNestingSlack);
  }
}

TEST(DoublePoints, LimaconCrossesAtOrigin) {
  const ArcCurve ac = arc(catalog::limacon());
  const IntersectionReport r = double_points(ac);
  ASSERT_EQ(r.crossings.size(), 1u);
  const Crossing& c = r.crossings[0];
  EXPECT_LT(norm(c.point), 1e-6);
  EXPECT_NEAR(ac.param_at(c.s_i), -2 * pi / 3, 1e-6);
  EXPECT_NEAR(ac.param_at(c.s_j), 2 * pi / 3, 1e-6);
  EXPECT_LE(c.residual, 1e-9);
  EXPECT_LE(c.segment_residual, 1e-9);
}

TEST(DoublePoints, CircleArcHasNone) {
  EXPECT_TRUE(double_points(arc(catalog::circle(1.0, 0.0, 1.5 * pi))).empty());
}

TEST(DoublePoints, FigureEightAgreesWithBruteForce) {
  const ArcCurve ac = arc(figure_eight());
  const IntersectionReport r = double_points(ac);
  const auto brute = oracle::brute_force_crossings(ops(ac.points()), 10);
  ASSERT_EQ(r.crossings.size(), 1u);
  ASSERT_FALSE(brute.empty());
  EXPECT_LT(norm(r.crossings[0].point), 1e-9);
  for (const auto& h : brute) EXPECT_LT(oracle::dist(h.point, op(r.crossings[0].polyline_point)), 1e-6);
}

TEST(DoublePoints, PolylineCrossingLiesOnBothSegments) {
  const ArcCurve ac = arc(catalog::limacon());
  const auto pts = ops(ac.points());
  for (const Crossing& c : double_points(ac).crossings) {
    EXPECT_LT(oracle::point_polyline(op(c.polyline_point), pts), 1e-9);
    const Vec2 gi = ac.point(c.s_i), gj = ac.point(c.s_j);
    EXPECT_LT(distance(gi, gj), 1e-9);
  }
}

TEST(DoublePoints, ExclusionZoneHidesCrossing) {
  const ArcCurve ac = arc(catalog::limacon());
  DoublePointOptions o;
  o.exclude = {ac.s_of_param(2 * pi / 3)};
  EXPECT_TRUE(double_points(ac, o).empty());
}

TEST(DoublePoints, RejectsTinySeparation) {
  const ArcCurve ac = arc(catalog::limacon());
  DoublePointOptions o;
  o.separation = 1e-6;
  EXPECT_THROW(double_points(ac, o), GeometryError);
}

TEST(Simplicity, SpiralIsSimpleAndNested) {
  const SimplicityReport r = simplicity_under_monotone_curvature(arc(catalog::logarithmic_spiral(1)));
  EXPECT_EQ(r.verdict, Simplicity::simple);
  ASSERT_TRUE(r.nesting.has_value());
  EXPECT_TRUE(r.nesting->nested);
}

TEST(Simplicity, LimaconInvoluteIsSimple) {
  const ArcCurve lim = arc(catalog::limacon());
  const ArcCurve inv = involute(lim, InvoluteParams{lim.s_begin() - lim.length() - 1});
  const SimplicityReport r = simplicity_under_monotone_curvature(inv);
  EXPECT_EQ(r.verdict, Simplicity::simple);
}

TEST(Simplicity, VertexMakesItNotApplicable) {
  const SimplicityReport r = simplicity_under_monotone_curvature(arc(catalog::radius_profile(2)));
  EXPECT_EQ(r.verdict, Simplicity::not_applicable);
  EXPECT_FALSE(r.intersections.has_value());
}

TEST(Simplicity, MonotoneCurvatureCatalogCurvesHaveNoDoublePoints) {
  std::vector<ArcCurve> curves = {arc(catalog::logarithmic_spiral(1)), arc(catalog::logarithmic_spiral(0.2, -3, 9)),
                                  arc(catalog::radius_profile(1)), arc(catalog::radius_profile(3)),
                                  arc(catalog::radius_profile(5))};
  for (const ArcCurve& ac : curves) {
    ASSERT_TRUE(critical_points_of_R(ac).monotone());
    EXPECT_TRUE(double_points(ac).empty());
  }
}

TEST(Simplicity, InvolutesOfRegularCurvesHaveNoDoublePoints) {
  const std::vector<ArcCurve> parents = {arc(catalog::ellipse(2, 1)), arc(catalog::parabola()),
                                         arc(catalog::cycloid()), arc(catalog::limacon())};
  for (const ArcCurve& ac : parents) {
    for (double c : {ac.s_begin() - 0.5, ac.s_end() + 2.0}) {
      const ArcCurve inv = involute(ac, InvoluteParams{c});
      EXPECT_TRUE(double_points(inv).empty()) << c;
    }
  }
}
