#include <cmath>

#include <gtest/gtest.h>

#include "heis/reconstruct.hpp"

using namespace heis;

namespace {

IntrinsicPatch linear_patch(int n = 61) { return patch_from_expressions("1", "0", "xi+1", "0", {0, 1, 0, 1}, n); }

}  // namespace

TEST(Transport, ScalarDecayAlongXi) {
    // with D' = 1, H = 0 and V = d/dxi the transport reduces to dP/dlambda = -P/D
    IntrinsicPatch p = linear_patch();
    p.P_seed = [](Vec2) { return Vec2{0, 1}; };
    double g = 0;
    Vec2 P = transport_P(p, {0, 0.5}, {0, 1}, 1.0, 200, &g);
    EXPECT_NEAR(P.x, 0, 1e-12);
    EXPECT_NEAR(P.y, 0.5, 1e-9);
    EXPECT_NEAR(g, 0.25, 1e-9);
}

TEST(SolveP, StaysTransversal) {
    IntrinsicPatch p = linear_patch();
    NodeField<Vec2> P = solve_P(p);
    ASSERT_EQ(P.size(), static_cast<std::size_t>(p.n * p.n));
    for (int j = 0; j < p.n; ++j)
        for (int i = 0; i < p.n; ++i) EXPECT_GT(cross(p.V(p.node(i, j)), P[j * p.n + i]), 0);
}

TEST(Codazzi, LinearPatchPassesPerturbedFails) {
    EXPECT_LT(check_codazzi(linear_patch()).max_residual, 1e-6);
    IntrinsicPatch bad = patch_from_expressions("1", "0", "xi+1+0.1*sin(5*xi)", "0", {0, 1, 0, 1}, 61);
    EXPECT_GT(check_codazzi(bad).max_residual, 1e-2);
    try {
        build_coordinates(bad);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotIntegrable);
        EXPECT_TRUE(e.is_hypothesis_violation());
    }
}

TEST(BuildCoordinates, FlatAndUnfolded) {
    ReconstructionPatch rp = build_coordinates(linear_patch());
    EXPECT_LT(rp.max_K, 1e-5);
    EXPECT_GT(rp.min_jacobian, 0);
    for (double f : rp.f) EXPECT_EQ(f, 1);
}

TEST(EmitGraph, RoundTripThroughFields) {
    ReconstructionPatch rp = build_coordinates(linear_patch(101));
    EmittedGraph eg = emit_graph(rp);
    EXPECT_LT(eg.max_D_error, 1e-3);
    EXPECT_LT(eg.max_pde_residual, 1e-3);
    EXPECT_LT(eg.max_divDV_defect, 1e-3);
    // independent check at the rectangle centre through the fields module
    Vec2 c{0.5 * (eg.rect.x0 + eg.rect.x1), 0.5 * (eg.rect.y0 + eg.rect.y1)};
    EXPECT_LT(std::fabs(pde_residual(eg.problem, c)), 1e-3);
    EXPECT_GT(D_at(eg.problem, c), 0);
}

TEST(EmitGraph, ClosedFormPatch) {
    IntrinsicPatch p = patch_from_expressions("1", "0", "xi+1-1/(xi+1)", "0", {0.5, 2, 0, 1.5}, 81);
    ReconstructionPatch rp = build_coordinates(p);
    EmittedGraph eg = emit_graph(rp);
    EXPECT_LT(rp.max_K, 1e-3);
    EXPECT_LT(eg.max_pde_residual, 1e-3);
}
