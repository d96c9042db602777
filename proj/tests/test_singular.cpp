#include <cmath>

#include <gtest/gtest.h>

#include "heis/gallery.hpp"
#include "heis/singular.hpp"

using namespace heis;

namespace {

// shoelace area of a closed polygon
double shoelace(const std::vector<Vec2>& p) {
    double a = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) a += cross(p[i], p[i + 1]);
    if (!p.empty()) a += cross(p.back(), p.front());
    return std::fabs(a) / 2;
}

}  // namespace

TEST(DetectSingular, RadialHasOneComponentAtOrigin) {
    GalleryMember m = build(GalleryId::RadialPlane);
    SingularReport r = detect_singular(m.problem, 64, 3);
    ASSERT_EQ(r.component_count, 1);
    const Window& b = r.components[0].bbox;
    EXPECT_TRUE(b.contains({0, 0}));
    EXPECT_LT(b.diagonal(), 0.2);
    EXPECT_FALSE(r.hypothesis_violation);
    DecayFit f = measure_decay_check(r);
    EXPECT_NEAR(f.exponent, -2, 0.3);
}

TEST(DetectSingular, Ex4_4CoversTheSegment) {
    GalleryMember m = build(GalleryId::Ex4_4);
    SingularReport r = detect_singular(m.problem, 64, 3);
    ASSERT_EQ(r.component_count, 1);
    const Window& b = r.components[0].bbox;
    EXPECT_LE(b.y0, 0.05);
    EXPECT_GE(b.y1, 0.95);
    EXPECT_LT(b.width(), 0.2);
    EXPECT_NEAR(measure_decay_check(r).exponent, -1, 0.3);
}

TEST(DetectSingular, Ex4_3HalfLinesAreConnected) {
    GalleryMember m = build(GalleryId::Ex4_3);
    SingularReport r = detect_singular(m.problem, 64, 1);
    EXPECT_EQ(r.component_count, 1);
}

TEST(DetectSingular, ZeroCurlIsHypothesisViolation) {
    Window w{-1, 1, -1, 1};
    PlanarVectorField F{ScalarField::constant(0, w), ScalarField::constant(0, w)};
    SurfaceProblem pr = make_problem(ScalarField::constant(0, w), F, ScalarField::constant(0, w));
    SingularReport r = detect_singular(pr, 16, 3);
    EXPECT_TRUE(r.hypothesis_violation);
    DecayFit f = measure_decay_check(r);
    EXPECT_TRUE(f.hypothesis_violation);
    EXPECT_NEAR(f.exponent, 0, 0.1);
}

TEST(TraceSingularCurve, Ex4_1HitsNegativeAxis) {
    GalleryMember m = build(GalleryId::Ex4_1);
    // feet of the rays from this arc stay inside the window, so every ray lands
    SingularSweep sw = trace_singular_curve(m.problem, arc_curve({-1, 0}, 1, 0.5, 2.0), 24);
    EXPECT_EQ(sw.escaped(), 0);
    ASSERT_EQ(sw.points.size(), 24u);
    for (const SingularCurvePoint& p : sw.points) {
        EXPECT_LT(std::fabs(p.location.y), 1e-3);
        EXPECT_LT(p.location.x, 1e-3);
    }
}

TEST(TraceSingularCurve, Ex4_4HitsSegment) {
    GalleryMember m = build(GalleryId::Ex4_4);
    SingularSweep sw = trace_singular_curve(m.problem, segment_curve({0.3, 0.2}, {0.3, 0.8}), 12);
    ASSERT_GE(sw.points.size(), 10u);
    for (const SingularCurvePoint& p : sw.points) {
        EXPECT_LT(distance_to_truth(m, p.location), 1e-3);
    }
}

TEST(TraceSingularCurve, Ex4_2HitsDiagonal) {
    GalleryMember m = build(GalleryId::Ex4_2);
    Vec2 d = normalized(Vec2{1, 1}), n{-d.y, d.x};
    SingularSweep sw = trace_singular_curve(m.problem, segment_curve(d * 0.6 - n * 0.3, d * 1.8 - n * 0.3), 12);
    ASSERT_GE(sw.points.size(), 10u);
    for (const SingularCurvePoint& p : sw.points) EXPECT_LT(std::fabs(p.location.x - p.location.y), 1e-3);
}

TEST(LambdaRates, Ex4_4IsNondegenerate) {
    GalleryMember m = build(GalleryId::Ex4_4);
    auto [lp, lm] = lambda_rates(m.problem, {0, 0.5}, segment_curve({0.3, 0.2}, {0.3, 0.8}),
                                 segment_curve({-0.3, 0.2}, {-0.3, 0.8}));
    EXPECT_GT(std::fabs(lp), kEpsLambda);
    EXPECT_GT(std::fabs(lm), kEpsLambda);
}

TEST(LambdaRates, Ex4_1ApproachesOneOnTheAxis) {
    // seed along N, just above the axis, so the travelled length sigma to the hit point is small
    GalleryMember m = build(GalleryId::Ex4_1);
    Vec2 c = m.chart->forward({0, -1.0, 0.02});
    StopPolicy pol = default_policy(m.problem, 0.4);
    CharCurve fwd = trace_seed(m.problem, c, 1, pol), back = trace_seed(m.problem, c, -1, pol);
    ParamCurve seed{[&](double t) { return t >= 0 ? fwd.position_at(t) : back.position_at(-t); }, -0.3, 0.3};
    double tau = locate_hit(m.problem, seed, {-1, 0});
    double lam = expanding_rate(m.problem, seed, tau);
    // straight characteristics: lambda = 1 + sigma theta' with theta' = -1/2 at x0 = -1
    double sigma = 0.02 * std::sqrt(2.0);
    EXPECT_NEAR(lam, 1 - 0.5 * sigma, 2e-3);
}

TEST(ExpandingRate, SeedAlongCharacteristicIsDegenerate) {
    GalleryMember m = build(GalleryId::RadialPlane);
    try {
        expanding_rate(m.problem, segment_curve({0.2, 0}, {0.8, 0}), 0.5);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateSide);
    }
}

TEST(EqualAngle, Ex4_1AndEx4_2) {
    Vec2 d = normalized(Vec2{1, 1}), n{-d.y, d.x};
    struct C {
        GalleryId id;
        ParamCurve plus, minus;
    } cases[] = {
        {GalleryId::Ex4_1, segment_curve({-1.6, 0.6}, {-0.4, 0.6}), segment_curve({-1.6, -0.6}, {-0.4, -0.6})},
        {GalleryId::Ex4_2, segment_curve(d * 0.6 + n * 0.3, d * 1.8 + n * 0.3),
         segment_curve(d * 0.6 - n * 0.3, d * 1.8 - n * 0.3)},
    };
    for (const C& c : cases) {
        GalleryMember m = build(c.id);
        auto pts = sample_singular_points(m.problem, c.plus, c.minus, 4);
        ASSERT_GE(pts.size(), 3u) << gallery_name(c.id);
        for (const MatchedPoint& mp : pts) EXPECT_LT(equal_angle_check(m.problem, mp.point), 1e-2);
    }
}

TEST(EqualAngle, MismatchedProfilesAreFlagged) {
    AngleProfile up{[](double x0) { return kPi / 2 - std::atan(x0); }, [](double x0) { return -1 / (1 + x0 * x0); }};
    AngleProfile lo{[](double x0) { return kPi / 2 + 0.5 * std::atan(x0); },
                    [](double x0) { return 0.5 / (1 + x0 * x0); }};
    GalleryMember m = build_ex4_1_profiles(up, lo);
    auto pts = sample_singular_points(m.problem, segment_curve({-1.6, 0.6}, {-0.4, 0.6}),
                                      segment_curve({-1.6, -0.6}, {-0.4, -0.6}), 4);
    ASSERT_FALSE(pts.empty());
    for (const MatchedPoint& mp : pts) EXPECT_GT(equal_angle_check(m.problem, mp.point), 0.1);
}

TEST(SigmaBalance, IdenticalPairHasNoDefect) {
    GalleryMember m = build(GalleryId::Ex4_4);
    auto pts = sample_singular_points(m.problem, segment_curve({0.3, 0.2}, {0.3, 0.8}),
                                      segment_curve({-0.3, 0.2}, {-0.3, 0.8}), 3);
    ASSERT_FALSE(pts.empty());
    EXPECT_EQ(sigma_balance_check(m.problem, {pts[0], pts[0]}), 0);
}

TEST(SigmaBalance, Ex4_1AcrossAxis) {
    GalleryMember m = build(GalleryId::Ex4_1);
    auto pts = sample_singular_points(m.problem, segment_curve({-1.6, 0.6}, {-0.4, 0.6}),
                                      segment_curve({-1.6, -0.6}, {-0.4, -0.6}), 5);
    ASSERT_GE(pts.size(), 3u);
    EXPECT_LT(sigma_balance_check(m.problem, pts), 1e-3 * m.problem.window.diagonal());
}

TEST(Holonomy, RatioIsTwiceArea) {
    GalleryMember m = build(GalleryId::Ex4_1);
    HolonomyResult h = holonomy_area_check(m.problem, arc_curve({-1, 0}, 1, 0.5, 2.0), 64);
    ASSERT_GT(h.area, 0);
    EXPECT_NEAR(h.C1, 2, 1e-6);
    EXPECT_NEAR(h.C2, 2, 1e-6);
    EXPECT_NEAR(h.integral / h.area, 2, 0.05);
    EXPECT_NEAR(h.area, shoelace(h.polygon), 1e-9 + 1e-6 * h.area);
    EXPECT_TRUE(h.within_bounds);
}
