#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace evokit;

namespace {

IntrinsicSpec profile(std::function<double(double)> r, std::function<double(double)> dr) {
  IntrinsicSpec in;
  in.name = "custom";
  in.s_a = -0.5;
  in.s_b = 0.5;
  in.kappa = [r](double s) { return 1.0 / r(s); };
  in.dkappa = [r, dr](double s) { return -dr(s) / (r(s) * r(s)); };
  return in;
}

struct Profile {
  std::shared_ptr<const ArcCurve> ac;
  EvoluteCurve ev;
};

Profile radius_profile(int m, double c = 1.0) {
  auto ac = std::make_shared<const ArcCurve>(arc(catalog::radius_profile(m, c, 1.0)));
  return {ac, evolute(ac)};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no GeometryError thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(VanishingOrder, Monomial) {
  const auto e = vanishing_order([](double s) { return s * s * s; }, 0, {1e-5, 1e-1});
  EXPECT_NEAR(e.m_minus, 3.0, 0.05);
  EXPECT_NEAR(e.m_plus, 3.0, 0.05);
  EXPECT_GE(e.fit_r2, 0.99);
  EXPECT_FALSE(e.capped());
}

TEST(VanishingOrder, PerturbedQuadraticAgreesWithBruteForceFit) {
  auto f = [](double s) { return s * s * (1 + 0.1 * std::sin(s)); };
  const auto e = vanishing_order(f, 0, {1e-5, 1e-1});
  EXPECT_NEAR(e.m_minus, 2.0, 0.05);
  EXPECT_NEAR(e.m_minus, oracle::loglog_slope(f, 0, 1e-5, 1e-1, 48), 0.01);
}

TEST(VanishingOrder, InfinitelyFlatIsCapped) {
  const auto e = vanishing_order(
      [](double s) { return s == 0 ? 0.0 : std::copysign(std::exp(-1 / (s * s)), s); }, 0, {1e-5, 1e-1});
  EXPECT_TRUE(e.capped());
  EXPECT_TRUE(std::isinf(e.m_plus));
  EXPECT_EQ(e.fit_r2, 1.0);
}

TEST(VanishingOrder, ReportsFractionalOrders) {
  const auto e = vanishing_order([](double s) { return std::pow(std::abs(s), 2.5); }, 0, {1e-5, 1e-1});
  EXPECT_NEAR(e.m_minus, 2.5, 0.05);
}

TEST(VanishingOrder, AsymmetricFunctionSeparatesEnvelopes) {
  // s^2 on the right, s^4 on the left: the upper envelope sees 2, the lower 4.
  const auto e = vanishing_order([](double s) { return s > 0 ? s * s : s * s * s * s; }, 0, {1e-4, 1e-1});
  EXPECT_NEAR(e.m_minus, 2.0, 0.05);
  EXPECT_NEAR(e.m_plus, 4.0, 0.1);
}

TEST(VanishingOrder, UpperOrderNeverBelowLower) {
  const std::vector<std::function<double(double)>> fs = {
      [](double s) { return s; },
      [](double s) { return s * s * (2 + std::sin(1 / (std::abs(s) + 1e-300))); },
      [](double s) { return std::sin(s) + s * s; },
      [](double s) { return s > 0 ? s * s * s : -s; },
      [](double s) { return std::pow(std::abs(s), 1.5) + 1e-3 * s * s; },
  };
  for (const auto& f : fs) {
    const auto e = vanishing_order(f, 0.0, {1e-4, 1e-1});
    EXPECT_GE(e.m_plus, e.m_minus);
    EXPECT_GE(e.fit_r2, 0.0);
    EXPECT_LE(e.fit_r2, 1.0);
    EXPECT_GE(e.holder_alpha, 0.0);
    EXPECT_LE(e.holder_alpha, 1.0);
  }
}

TEST(VanishingOrder, RejectsBadWindows) {
  auto f = [](double s) { return s; };
  EXPECT_EQ(code_of([&] { vanishing_order(f, 0, {0.0, 1e-1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { vanishing_order(f, 0, {1e-2, 1e-3}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { vanishing_order(f, 0, {1e-2, 1e-1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { vanishing_order(f, 0, {1e-4, 1e-1}, {20}); }), ErrorCode::InvalidArgument);
}

TEST(RadiusOrder, RecoversProfileOrder) {
  for (int m = 1; m <= 5; ++m) {
    const auto p = radius_profile(m);
    const auto e = radius_order(*p.ac, 0.0);
    EXPECT_NEAR(e.m_minus, m, 0.15) << m;
    EXPECT_EQ(std::lround(e.m_minus), m);
    EXPECT_GE(e.fit_r2, 0.99);
  }
}

TEST(RadiusOrder, DefaultWindowShrinksNearEnds) {
  const auto p = radius_profile(1);
  const ScaleWindow w = default_window(*p.ac, 0.45);
  EXPECT_NEAR(w.h_max, 0.05, 1e-12);
  EXPECT_LE(w.h_min, w.h_max / 100);
  EXPECT_EQ(code_of([&] { default_window(*p.ac, 0.5); }), ErrorCode::OutOfRange);
}

TEST(Classify, LinearRadiusIsRegular) {
  const auto p = radius_profile(1);
  const CuspReport r = classify_cusp(p.ev, 0.0);
  EXPECT_EQ(r.classification, PointClass::regular_point);
  EXPECT_EQ(r.order_m, 1);
  EXPECT_FALSE(r.branch_exponents.has_value());
}

TEST(Classify, QuadraticRadiusGivesCusp) {
  const auto p = radius_profile(2);
  const CuspReport r = classify_cusp(p.ev, 0.0);
  EXPECT_EQ(r.classification, PointClass::cusp);
  EXPECT_TRUE(r.even);
  ASSERT_TRUE(r.branch_exponents.has_value());
  EXPECT_NEAR((*r.branch_exponents)[0], 1.5, 0.05);
  EXPECT_NEAR((*r.branch_exponents)[1], 1.5, 0.05);
  EXPECT_GE(r.min_branch_value, -1e-9);
  EXPECT_EQ(r.branch_signs[0], -r.branch_signs[1]);
  EXPECT_FALSE(r.graph.frame.flipped);
}

TEST(Classify, QuarticRadiusGivesSharperCusp) {
  const auto p = radius_profile(4);
  const CuspReport r = classify_cusp(p.ev, 0.0);
  EXPECT_EQ(r.classification, PointClass::cusp);
  ASSERT_TRUE(r.branch_exponents.has_value());
  EXPECT_NEAR((*r.branch_exponents)[0], 1.25, 0.05);
  EXPECT_NEAR((*r.branch_exponents)[1], 1.25, 0.05);
  EXPECT_GE(r.min_branch_value, -1e-9);
}

TEST(Classify, LocalMaximumFlipsFrame) {
  const auto p = radius_profile(2, -1.0);
  const CuspReport r = classify_cusp(p.ev, 0.0);
  EXPECT_EQ(r.classification, PointClass::cusp);
  EXPECT_TRUE(r.graph.frame.flipped);
  for (const auto& b : r.graph.branches) {
    for (double x : b.x) EXPECT_GE(x, -1e-12);
  }
  EXPECT_GE(r.min_branch_value, -1e-9);
}

TEST(Classify, OddOrderGivesHoelderPoint) {
  for (int m : {3, 5}) {
    const auto p = radius_profile(m);
    const CuspReport r = classify_cusp(p.ev, 0.0);
    EXPECT_EQ(r.classification, PointClass::c1_1overm_point) << m;
    EXPECT_NEAR(r.tangent_holder.alpha, 1.0 / m, 0.05) << m;
    EXPECT_LE(r.tangent_holder.alpha * r.order.m_minus, 1.0) << m;
    EXPECT_TRUE(r.graph.monotone);
  }
}

TEST(Classify, EllipseVerticesAreOrdinaryCusps) {
  auto ac = std::make_shared<const ArcCurve>(arc(catalog::ellipse(2, 1)));
  const EvoluteCurve ev = evolute(ac);
  for (double s : ev.critical.extrema) {
    const CuspReport r = classify_cusp(ev, s);
    EXPECT_EQ(r.classification, PointClass::cusp);
    EXPECT_EQ(r.order_m, 2);
    EXPECT_NEAR((*r.branch_exponents)[0], 1.5, 0.05);
  }
}

TEST(Classify, FractionalOrderIsAmbiguous) {
  auto ac = std::make_shared<const ArcCurve>(arc(profile(
      [](double s) { return 1 + std::pow(std::abs(s), 2.5); },
      [](double s) { return 2.5 * std::pow(std::abs(s), 1.5) * (s < 0 ? -1 : 1); })));
  const EvoluteCurve ev = evolute(ac);
  EXPECT_EQ(code_of([&] { classify_cusp(ev, 0.0); }), ErrorCode::AmbiguousOrder);
}

TEST(Classify, FlatRadiusIsAmbiguous) {
  auto ac = std::make_shared<const ArcCurve>(arc(catalog::flat_profile()));
  const EvoluteCurve ev = evolute(ac);
  EXPECT_EQ(code_of([&] { classify_cusp(ev, 0.0); }), ErrorCode::AmbiguousOrder);
}

TEST(Classify, QuadraticOrderAwayFromCriticalPoint) {
  auto ac = std::make_shared<const ArcCurve>(arc(profile([](double s) { return 1 + s * s + 1e-5 * s; },
                                                          [](double s) { return 2 * s + 1e-5; })));
  const EvoluteCurve ev = evolute(ac);
  EXPECT_EQ(code_of([&] { classify_cusp(ev, 0.0); }), ErrorCode::NotACriticalPoint);
}

TEST(LocalFrame, RegularPointGraphIsFlatterThanLinear) {
  const auto p = radius_profile(1);
  const LocalFrameGraph g = local_frame_graph(p.ev, 0.0);
  EXPECT_TRUE(g.monotone);
  const LinearFit fit = graph_exponent(g.branches);
  EXPECT_NEAR(fit.slope, 2.0, 0.05);
}

TEST(LocalFrame, OddOrderGraphExponent) {
  const auto p = radius_profile(3);
  const LocalFrameGraph g = local_frame_graph(p.ev, 0.0);
  EXPECT_NEAR(graph_exponent(g.branches).slope, 4.0 / 3.0, 0.05);
}

TEST(LocalFrame, MonotoneProjectionIsInjective) {
  for (int m : {1, 3, 5}) {
    const auto p = radius_profile(m);
    const LocalFrameGraph g = local_frame_graph(p.ev, 0.0);
    ASSERT_TRUE(g.monotone);
    // Samples in order of s have strictly ordered x.
    std::vector<double> xs(g.branches[1].x.rbegin(), g.branches[1].x.rend());
    xs.insert(xs.end(), g.branches[0].x.begin(), g.branches[0].x.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (std::abs(xs[i]) > 1e-12 && std::abs(xs[i - 1]) > 1e-12) {
        EXPECT_GT(xs[i], xs[i - 1]);
      }
    }
  }
}

TEST(LocalFrame, FrameAxesAreNormalAndReversedTangent) {
  const auto p = radius_profile(2);
  const LocalFrameGraph g = local_frame_graph(p.ev, 0.0);
  const Frame f = eval_frame(*p.ac, 0.0);
  EXPECT_EQ(g.frame.ex, f.normal);
  EXPECT_EQ(g.frame.ey, -f.tangent);
  EXPECT_NEAR(distance(g.frame.origin, f.point + f.radius() * f.normal), 0, 1e-15);
}

TEST(Hoelder, FlatProfileTangentIsBarelyContinuous) {
  auto ac = std::make_shared<const ArcCurve>(arc(catalog::flat_profile()));
  const EvoluteCurve ev = evolute(ac);
  EXPECT_TRUE(radius_order(*ac, 0.0).capped());
  const HolderEstimate h = evolute_tangent_holder(ev, 0.0);
  EXPECT_GE(h.scales_used, 3u);
  EXPECT_LE(h.alpha, 0.05);
}

TEST(Hoelder, RegularPointIsLipschitz) {
  const auto p = radius_profile(1);
  EXPECT_NEAR(evolute_tangent_holder(p.ev, 0.0).alpha, 1.0, 0.05);
}

TEST(Hoelder, DeterministicAcrossCalls) {
  const auto p = radius_profile(3);
  EXPECT_EQ(evolute_tangent_holder(p.ev, 0.0), evolute_tangent_holder(p.ev, 0.0));
  EXPECT_EQ(radius_order(*p.ac, 0.0), radius_order(*p.ac, 0.0));
}
