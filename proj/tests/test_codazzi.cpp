#include <cmath>

#include <gtest/gtest.h>

#include "heis/codazzi.hpp"
#include "heis/gallery.hpp"

using namespace heis;

namespace {

// exact p-minimal profile with D(0) = 0 and first integral 1/a^2
double closed_form(double s, double a) { return s + a - a * a / (s + a); }

}  // namespace

TEST(UniformDerivatives, ExactOnQuadratics) {
    std::vector<double> D;
    const double h = 0.1;
    for (int i = 0; i < 12; ++i) {
        double s = i * h;
        D.push_back(3 - 2 * s + 0.5 * s * s);
    }
    std::vector<double> d1, d2;
    uniform_derivatives(D, h, d1, d2);
    for (int i = 0; i < 12; ++i) {
        EXPECT_NEAR(d1[i], -2 + i * h, 1e-12);
        EXPECT_NEAR(d2[i], 1, 1e-10);
    }
}

TEST(UniformDerivatives, TooFewNodes) {
    std::vector<double> d1, d2;
    EXPECT_THROW(uniform_derivatives({1, 2, 3, 4}, 0.1, d1, d2), Error);
}

TEST(DifferentiateD, ClosedFormSatisfiesMinimalEquation) {
    // D D'' = 2 (D' - 1)(D' - 2) holds identically for the closed form; check by expansion
    for (double a : {0.5, 1.0, 2.0})
        for (double s : {0.1, 0.7, 3.0}) {
            double q = s + a;
            double D = closed_form(s, a), d1 = 1 + a * a / (q * q), d2 = -2 * a * a / (q * q * q);
            EXPECT_NEAR(D * d2, 2 * (d1 - 1) * (d1 - 2), 1e-12);
        }
    double r[2];
    for (int k = 0; k < 2; ++k) {
        CodazziTrace t = differentiate_D(synthetic_curve([](double s) { return closed_form(s, 1); }, 0.2, 1, 0.01 / (1 << k)));
        ASSERT_FALSE(t.residual_minimal.empty());
        r[k] = 0;
        for (double v : t.residual_minimal) r[k] = std::max(r[k], std::fabs(v));
    }
    EXPECT_LT(r[0], 1e-3);
    EXPECT_NEAR(std::log2(r[0] / r[1]), 2, 0.2);
}

TEST(DifferentiateD, FirstIntegralMatchesInverseSquare) {
    for (double a : {0.5, 1.0, 2.0}) {
        CodazziTrace t = differentiate_D(synthetic_curve([a](double s) { return closed_form(s, a); }, 0.2, 1, 1e-3));
        Spread sp = first_integral_spread(t, 2);
        EXPECT_NEAR(sp.mean, 1 / (a * a), 1e-4 / (a * a));
        EXPECT_LT(sp.relative_stdev, 1e-4);
    }
}

TEST(DifferentiateD, RadialRayTakesSentinelBranch) {
    GalleryMember m = build(GalleryId::RadialPlane);
    CharCurve c = trace_characteristic(m.problem, {0.9, 0}, -1, default_policy(m.problem));
    CharCurve part = c;
    part.nodes.resize(c.nodes.size() / 2);
    CodazziTrace t = differentiate_D(part, &m.problem);
    ASSERT_FALSE(t.residual_minimal.empty());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        EXPECT_NEAR(t.Dprime[i], 1, 1e-9);
        EXPECT_TRUE(std::isinf(t.first_integral_c[i]));
        EXPECT_NEAR(t.residual_minimal[i], 0, 1e-6);
        EXPECT_NEAR(t.residual_general[i], 0, 1e-6);
    }
}

TEST(ClassifyLimit, RadialIsHalfCurl) {
    GalleryMember m = build(GalleryId::RadialPlane);
    CharCurve c = trace_characteristic(m.problem, {0.6, 0.2}, -1, default_policy(m.problem));
    LimitVerdict v = classify_singular_limit(m.problem, c);
    EXPECT_EQ(v.kind, LimitKind::HalfCurl);
    EXPECT_NEAR(v.value, 1, 1e-3);
    EXPECT_NEAR(v.target_half, 1, 1e-9);
    EXPECT_NEAR(v.target_full, 2, 1e-9);
}

TEST(ClassifyLimit, SingularCurvesAreFullCurl) {
    for (GalleryId id : {GalleryId::Ex4_1, GalleryId::Ex4_2, GalleryId::Ex4_4}) {
        GalleryMember m = build(id);
        Vec2 start = m.truth.limits.front().start;
        CharCurve c = trace_characteristic(m.problem, start, -1, default_policy(m.problem));
        ASSERT_EQ(c.stop_reason, StopReason::HitSingular) << gallery_name(id);
        LimitVerdict v = classify_singular_limit(m.problem, c);
        EXPECT_EQ(v.kind, LimitKind::FullCurl) << gallery_name(id);
        EXPECT_NEAR(v.value, 2, 0.05) << gallery_name(id);
    }
}

TEST(ClassifyLimit, RejectsCurveWithoutSingularEnd) {
    GalleryMember m = build(GalleryId::RadialPlane);
    CharCurve c = trace_characteristic(m.problem, {0.5, 0}, 1, default_policy(m.problem));
    try {
        classify_singular_limit(m.problem, c);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSingularApproach);
    }
}

TEST(DirectionCheck, PositiveCurlPointsOutward) {
    GalleryMember m = build(GalleryId::RadialPlane);
    CharCurve c = trace_characteristic(m.problem, {0.6, 0.2}, -1, default_policy(m.problem));
    EXPECT_TRUE(theoremB_direction_check(m.problem, c));
    GalleryMember e = build(GalleryId::Ex4_4);
    CharCurve d = trace_characteristic(e.problem, e.truth.limits.front().start, -1, default_policy(e.problem));
    EXPECT_TRUE(theoremB_direction_check(e.problem, d));
}

TEST(GeneralOde, ConstructorValidates) {
    auto one = [](double) { return 1.0; };
    auto two = [](double) { return 2.0; };
    auto zero2 = [](double, double) { return 0.0; };
    EXPECT_THROW(make_general_ode([](double) { return 0.0; }, one, two, zero2), Error);
    EXPECT_THROW(make_general_ode(two, two, one, zero2), Error);
    EXPECT_THROW(make_general_ode(two, one, two, [](double, double) { return 1.0; }), Error);
    EXPECT_NO_THROW(make_general_ode(two, one, two, zero2));
}

TEST(GeneralOde, ReproducesClosedForm) {
    GeneralOde ode = make_general_ode([](double) { return 2.0; }, [](double) { return 1.0; },
                                      [](double) { return 2.0; }, [](double, double) { return 0.0; });
    OdeTrajectory tr = integrate_general_ode(ode, 1.0, 1.5, 1.25, 4000);
    ASSERT_GT(tr.samples.size(), 100u);
    double worst = 0;
    for (const OdeSample& s : tr.samples) {
        if (s.rho < 0.05) break;
        worst = std::max(worst, std::fabs(s.v - closed_form(s.rho, 1)));
    }
    EXPECT_LT(worst, 1e-8);
    GeneralVerdict g = classify_general_limit(tr, ode);
    EXPECT_TRUE(g.v_to_zero);
    EXPECT_EQ(g.verdict.kind, LimitKind::FullCurl);
    EXPECT_NEAR(g.verdict.value, 2, 1e-3);
}

TEST(GeneralOde, LinearBranchIsHalf) {
    GeneralOde ode = make_general_ode([](double) { return 2.0; }, [](double) { return 1.0; },
                                      [](double) { return 2.0; }, [](double, double) { return 0.0; });
    OdeTrajectory tr = integrate_general_ode(ode, 1.0, 1.0, 1.0, 2000);
    for (const OdeSample& s : tr.samples) EXPECT_NEAR(s.v, s.rho, 1e-10);
    GeneralVerdict g = classify_general_limit(tr, ode);
    EXPECT_EQ(g.verdict.kind, LimitKind::HalfCurl);
}

TEST(GeneralOde, QuadraticPerturbationStillDichotomous) {
    GeneralOde ode = make_general_ode([](double) { return 2.0; }, [](double) { return 1.0; },
                                      [](double) { return 2.0; }, [](double, double v) { return v * v; });
    OdeTrajectory tr = integrate_general_ode(ode, 1.0, 1.2, 1.4, 4000);
    GeneralVerdict g = classify_general_limit(tr, ode);
    ASSERT_TRUE(g.v_to_zero);
    EXPECT_NE(g.verdict.kind, LimitKind::Inconclusive);
    double target = g.verdict.kind == LimitKind::HalfCurl ? 1.0 : 2.0;
    EXPECT_NEAR(g.verdict.value, target, 0.05);
}
