#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace evokit;
using std::numbers::pi;

namespace {

double angle_to_normal(const ArcCurve& ac, const EvoluteCurve& ev, std::size_t i) {
  const Vec2 d = ev.points[i + 1] - ev.points[i - 1];
  const Vec2 nu = ac.normal_at_node(i);
  return std::acos(std::min(1.0, std::abs(dot(d, nu)) / norm(d)));
}

}  // namespace

TEST(Evolute, CircleCollapsesToCentre) {
  const ArcCurve ac = arc(catalog::circle(2.0));
  const EvoluteCurve ev = evolute(ac);
  for (const Vec2& p : ev.points) EXPECT_LT(norm(p), 1e-9);
}

TEST(Evolute, EllipseMatchesClosedForm) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  const EvoluteCurve ev = evolute(ac);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    EXPECT_LT(oracle::dist(op(ev.points[i]), oracle::ellipse_evolute(2, 1, ac.param()[i])), 1e-9);
  }
}

TEST(Evolute, ParabolaMatchesClosedForm) {
  const ArcCurve ac = arc(catalog::parabola());
  const EvoluteCurve ev = evolute(ac);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    EXPECT_LT(oracle::dist(op(ev.points[i]), oracle::parabola_evolute(ac.param()[i])), 1e-9);
  }
}

TEST(Evolute, BetweenNodesFollowsTheInterpolant) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  const EvoluteCurve ev = evolute(ac);
  for (double s = 0.013; s < ac.s_end(); s += 0.41) {
    EXPECT_LT(oracle::dist(op(ev.point_at(s)), oracle::ellipse_evolute(2, 1, ac.param_at(s))), 1e-7);
  }
}

TEST(Evolute, TangentIsSignedNormal) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1));
  const EvoluteCurve ev = evolute(ac);
  for (std::size_t i = 5; i + 5 < ac.size(); ++i) {
    EXPECT_LT(angle_to_normal(ac, ev, i), 1e-4);
    EXPECT_EQ(ev.tangent[i], ac.normal_at_node(i));
  }
}

TEST(Evolute, DecreasingRadiusFlipsTangent) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(-1));
  const EvoluteCurve ev = evolute(ac);
  for (std::size_t i = 0; i < ac.size(); i += 50) EXPECT_EQ(ev.tangent[i], -ac.normal_at_node(i));
  for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_GT(ev.s_tilde[i], ev.s_tilde[i - 1]);
}

TEST(Evolute, ArclengthEqualsRadiusChange) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1));
  const EvoluteCurve ev = evolute(ac);
  const double expected = oracle::spiral_radius(1, 2) - oracle::spiral_radius(1, -1);
  EXPECT_NEAR(oracle::polyline_length(ops(ev.points)), expected, 1e-4 * expected);
  EXPECT_NEAR(ev.s_tilde.back() - ev.s_tilde.front(), expected, 1e-10 * expected);
  for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_DOUBLE_EQ(ev.s_tilde[i], ev.radius[i]);
}

TEST(Evolute, ArclengthAcrossVertexAddsBothBranches) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  const EvoluteCurve ev = evolute(ac);
  // Between consecutive vertices the evolute has length |R(pi/2) - R(0)| = 4 - 1/2.
  const double quarter = 4.0 - 0.5;
  EXPECT_NEAR(ev.s_tilde.back() - ev.s_tilde.front(), 4 * quarter, 1e-8);
  EXPECT_NEAR(oracle::polyline_length(ops(ev.points)), 4 * quarter, 1e-4);
}

TEST(Evolute, CurvatureMatchesDiscreteCurvature) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1));
  const EvoluteCurve ev = evolute(ac);
  const std::size_t k = 4;
  for (std::size_t i = 10; i + 10 < ac.size(); i += 7) {
    const double discrete = oracle::menger(op(ev.points[i - k]), op(ev.points[i]), op(ev.points[i + k]));
    const double formula = evolute_curvature(ac, ac.s()[i]);
    EXPECT_NEAR(discrete, formula, 1e-3 * std::abs(formula)) << i;
  }
}

TEST(Evolute, CurvatureUndefinedWhereKappaPrimeVanishes) {
  const ArcCurve ac = arc(catalog::circle(1.0));
  try {
    evolute_curvature(ac, 1.0);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::VanishingKappaPrime);
  }
}

TEST(Evolute, ZeroCurvatureGate) {
  CurveSpec wave;
  wave.name = "wave";
  wave.a = -1;
  wave.b = 1;
  wave.position = [](double t) { return Vec2{t, t * t * t}; };
  wave.derivatives = {[](double t) { return Vec2{1, 3 * t * t}; }, [](double t) { return Vec2{0, 6 * t}; },
                      [](double) { return Vec2{0, 6}; }};
  wave.sample_density = 64;
  try {
    evolute(arc(wave));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroCurvature);
  }
}

TEST(CriticalPoints, SpiralHasNone) {
  EXPECT_TRUE(critical_points_of_R(arc(catalog::logarithmic_spiral(1))).empty());
}

TEST(CriticalPoints, EllipseVertices) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  const CriticalPoints cp = critical_points_of_R(ac);
  ASSERT_EQ(cp.extrema.size(), 4u);
  EXPECT_TRUE(cp.inflections.empty());
  const double expected[] = {0, pi / 2, pi, 3 * pi / 2};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(ac.param_at(cp.extrema[k]), expected[k], 1e-8);
}

TEST(CriticalPoints, RadiusProfiles) {
  const CriticalPoints even = critical_points_of_R(arc(catalog::radius_profile(2, 1, 1)));
  ASSERT_EQ(even.extrema.size(), 1u);
  EXPECT_NEAR(even.extrema[0], 0.0, 1e-10);
  EXPECT_TRUE(even.inflections.empty());
  const CriticalPoints odd = critical_points_of_R(arc(catalog::radius_profile(3, 1, 1)));
  EXPECT_TRUE(odd.extrema.empty());
  ASSERT_EQ(odd.inflections.size(), 1u);
  EXPECT_NEAR(odd.inflections[0], 0.0, 1e-10);
  EXPECT_TRUE(odd.monotone());
  const CriticalPoints flat = critical_points_of_R(arc(catalog::flat_profile()));
  ASSERT_EQ(flat.plateaus.size(), 1u);
  EXPECT_LT(flat.plateaus[0].first, 0.0);
  EXPECT_GT(flat.plateaus[0].second, 0.0);
}

TEST(Increvol, IdentityHoldsOnCatalogArcs) {
  const ArcCurve spiral = arc(catalog::logarithmic_spiral(1));
  const ArcCurve ellipse = arc(catalog::ellipse(2, 1, 0.1, 1.4));
  const ArcCurve limacon = arc(catalog::limacon(-1.0, 1.0));
  for (const ArcCurve* ac : {&spiral, &ellipse, &limacon}) {
    const auto pairs = random_pairs(ac->s_begin(), ac->s_end(), 8, 7);
    for (const auto& [a, b] : pairs) {
      const double dr = std::abs(ac->radius_at(b) - ac->radius_at(a));
      EXPECT_LE(verify_increvol_identity(*ac, a, b), 1e-6 * (1 + dr));
    }
  }
}

TEST(Involute, CircleMatchesClosedForm) {
  CurveSpec c = catalog::circle(1.0, 0.1, 2.0);
  c.arclength_origin = 0.1;
  const ArcCurve ac = arc(c);
  const ArcCurve inv = involute(ac, InvoluteParams{0.0});
  for (std::size_t i = 0; i < inv.size(); ++i) {
    // c = 0 unwinds the string from angle 0, giving gamma(u) - u gamma'(u).
    EXPECT_LT(oracle::dist(op(inv.points()[i]), oracle::circle_involute(inv.param()[i])), 1e-9);
  }
}

TEST(Involute, RadiusOfCurvatureIsStringLength) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1, 0.2, 1.3));
  const double c = ac.s_begin() - 0.7;
  const ArcCurve inv = involute(ac, InvoluteParams{c});
  for (std::size_t i = 3; i + 3 < inv.size(); i += 11) {
    EXPECT_NEAR(std::abs(inv.radius_at_node(i)), std::abs(c - inv.param()[i]), 1e-6);
  }
}

TEST(Involute, RejectsStringConstantInsideRange) {
  const ArcCurve ac = arc(catalog::circle(1.0));
  try {
    involute(ac, InvoluteParams{1.0});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularInvolute);
  }
}

TEST(Involute, ReverseOrientationUnwindsFromTheOtherEnd) {
  const ArcCurve ac = arc(catalog::circle(1.0, 0.0, 1.5));
  const ArcCurve inv = involute(ac, InvoluteParams{0.5, -1});
  // Reversed arclength runs over [-1.5, 0]; at its start the string has length 2.
  EXPECT_NEAR(distance(inv.points().front(), ac.points().back() + 2.0 * Vec2{std::sin(1.5), -std::cos(1.5)}), 0,
              1e-9);
}

TEST(Involute, UndoesEvoluteWithRadiusNormalisation) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1, -0.5, 1.5));
  const EvoluteCurve ev = evolute(ac);
  const ArcCurve ev_arc = evolute_arc(ev, ac.s_begin(), ac.s_end());
  const ArcCurve back = involute(ev_arc, InvoluteParams{0.0, 1, 256});
  const auto parent = ops(ac.points());
  double diameter = 0;
  for (const auto& p : parent) diameter = std::max(diameter, oracle::dist(p, parent.front()));
  EXPECT_LT(oracle::hausdorff(ops(back.points()), parent), 1e-4 * diameter);
}

TEST(Involute, StringOffsetGivesParallelCurve) {
  const ArcCurve ac = arc(catalog::logarithmic_spiral(1, -0.5, 1.5));
  const ArcCurve ev_arc = evolute_arc(evolute(ac), ac.s_begin(), ac.s_end());
  const ArcCurve base = involute(ev_arc, InvoluteParams{0.0});
  for (double delta : {0.01, -0.05}) {
    const ArcCurve shifted = involute(ev_arc, InvoluteParams{delta});
    for (double st = ev_arc.s_begin() + 0.01; st < ev_arc.s_end(); st += 0.25) {
      const double gap = distance(shifted.point(shifted.s_of_param(st)), base.point(base.s_of_param(st)));
      EXPECT_NEAR(gap, std::abs(delta), 1e-6);
    }
  }
}

TEST(EvoluteArc, RejectsNonMonotoneStretch) {
  const ArcCurve ac = arc(catalog::ellipse(2, 1));
  const EvoluteCurve ev = evolute(ac);
  EXPECT_THROW(evolute_arc(ev, ac.s_begin(), ac.s_end()), GeometryError);
}
