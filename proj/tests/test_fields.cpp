#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "heis/fields.hpp"

using namespace heis;

namespace {

const Window kWin{-5, 5, -5, 5};

SurfaceProblem heis_plane(const std::string& u, const std::string& H = "0") {
    PlanarVectorField F{ScalarField::expr("-y", kWin), ScalarField::expr("x", kWin)};
    return make_problem(ScalarField::expr(u, kWin), F, ScalarField::expr(H, kWin));
}

}  // namespace

TEST(Expression, ArithmeticAndPrecedence) {
    Expression e = Expression::parse("1 + 2*x^2 - y/4");
    EXPECT_DOUBLE_EQ(e.eval(3, 8), 1 + 18 - 2);
    EXPECT_DOUBLE_EQ(Expression::parse("-x^2").eval(3, 0), -9);
    EXPECT_DOUBLE_EQ(Expression::parse("2^3^2").eval(0, 0), 512);
    EXPECT_NEAR(Expression::parse("pi + e").eval(0, 0), kPi + std::exp(1.0), 1e-15);
}

TEST(Expression, FunctionsAndPiecewise) {
    Expression e = Expression::parse("piecewise(x < 0, -1, x > 0, 1, 0)");
    EXPECT_EQ(e.eval(-2, 0), -1);
    EXPECT_EQ(e.eval(2, 0), 1);
    EXPECT_EQ(e.eval(0, 0), 0);
    EXPECT_NEAR(Expression::parse("atan(1) + arctan(1)").eval(0, 0), kPi / 2, 1e-15);
    EXPECT_NEAR(Expression::parse("pow(x, 0.5)").eval(9, 0), 3, 1e-15);
}

TEST(Expression, CustomVariables) {
    Expression e = Expression::parse("xi*eta + 1", {"xi", "eta"});
    EXPECT_DOUBLE_EQ(e.eval(2, 3), 7);
}

TEST(Expression, JetMatchesCentralDifference) {
    Expression e = Expression::parse("sin(x*y) + exp(x)/(1+y^2) + sqrt(x^2+y^2) + tanh(y) + log(2+x)");
    for (Vec2 p : {Vec2{0.3, -0.7}, Vec2{1.1, 0.4}, Vec2{-0.5, 2.0}}) {
        Jet j = e.jet(p.x, p.y);
        const double h = 1e-6;
        double fx = (e.eval(p.x + h, p.y) - e.eval(p.x - h, p.y)) / (2 * h);
        double fy = (e.eval(p.x, p.y + h) - e.eval(p.x, p.y - h)) / (2 * h);
        EXPECT_NEAR(j.v, e.eval(p.x, p.y), 1e-15);
        EXPECT_NEAR(j.dx, fx, 1e-8);
        EXPECT_NEAR(j.dy, fy, 1e-8);
    }
}

TEST(Expression, ConstantDetection) {
    EXPECT_TRUE(Expression::parse("2*pi+1").is_constant());
    EXPECT_FALSE(Expression::parse("0*x").is_constant());
}

TEST(Expression, MalformedInputThrows) {
    for (const char* bad : {"x +", "sin(", "foo(x)", "1 2", "z"}) {
        try {
            Expression::parse(bad);
            ADD_FAILURE() << "accepted " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
        }
    }
}

TEST(EvalFrame, HeisenbergFieldAtThreeFour) {
    FrameSample f = eval_frame(heis_plane("0"), {3, 4});
    EXPECT_NEAR(f.D, 5, 1e-12);
    EXPECT_NEAR(f.N.x, -0.8, 1e-12);
    EXPECT_NEAR(f.N.y, 0.6, 1e-12);
    // N_perp is N rotated clockwise
    EXPECT_NEAR(f.Nperp.x, 0.6, 1e-12);
    EXPECT_NEAR(f.Nperp.y, 0.8, 1e-12);
    EXPECT_FALSE(f.singular);
}

TEST(EvalFrame, OriginIsSingular) {
    FrameSample f = eval_frame(heis_plane("0"), {0, 0});
    EXPECT_EQ(f.D, 0);
    EXPECT_TRUE(f.singular);
}

TEST(Curl, KnownFields) {
    PlanarVectorField heis{ScalarField::expr("-y", kWin), ScalarField::expr("x", kWin)};
    for (Vec2 p : {Vec2{0, 0}, Vec2{1.5, -2}, Vec2{-3, 4}}) EXPECT_NEAR(curl(heis, p), 2, 1e-9);
    PlanarVectorField zero{ScalarField::constant(0, kWin), ScalarField::constant(0, kWin)};
    EXPECT_EQ(curl(zero, {0.2, 0.1}), 0);
    PlanarVectorField xy{ScalarField::constant(0, kWin), ScalarField::expr("x*y", kWin)};
    EXPECT_NEAR(curl(xy, {1, 2}), 2, 1e-9);
}

TEST(Curl, GridFieldAgreesWithFiniteDifferenceOracle) {
    // bilinear samples of (-y, x) reproduce the field exactly, so the FD curl is still 2
    auto sample = [](const std::string& which) {
        GridData g;
        g.nx = g.ny = 21;
        g.window = {-1, 1, -1, 1};
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double x = -1 + 0.1 * i, y = -1 + 0.1 * j;
                g.values.push_back(which == "x" ? -y : x);
            }
        return ScalarField::grid(g);
    };
    PlanarVectorField F{sample("x"), sample("y")};
    EXPECT_NEAR(curl(F, {0.23, -0.41}, 1e-3), 2, 1e-9);
}

TEST(PdeResidual, RadialFieldIsDivergenceFree) {
    SurfaceProblem pr = heis_plane("0");
    double r1 = std::fabs(pde_residual(pr, {1, 1}));
    EXPECT_LT(r1, 1e-6);
}

TEST(PdeResidual, ConstantNormalField) {
    Window w{0.5, 2.5, -1, 1};
    PlanarVectorField F{ScalarField::constant(0, w), ScalarField::constant(0, w)};
    SurfaceProblem pr = make_problem(ScalarField::expr("x^2/2", w), F, ScalarField::constant(0, w));
    EXPECT_LT(std::fabs(pde_residual(pr, {1.3, 0.2})), 1e-8);
    FrameSample f = eval_frame(pr, {1.3, 0.2});
    EXPECT_NEAR(f.N.x, 1, 1e-14);
    EXPECT_NEAR(f.N.y, 0, 1e-14);
}

TEST(PdeResidual, DetectsWrongMeanCurvature) {
    // the radial plane is p-minimal; claiming H = 1 leaves a residual of about 1
    SurfaceProblem pr = heis_plane("0", "1");
    EXPECT_NEAR(pde_residual(pr, {1, 1}), -1, 1e-5);
}

TEST(GridData, BilinearReproducesBilinearFunctions) {
    GridData g;
    g.nx = 5;
    g.ny = 4;
    g.window = {0, 2, -1, 2};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.window.x0 + i * g.dx(), y = g.window.y0 + j * g.dy();
            g.values.push_back(1 + 2 * x - y + 0.5 * x * y);
        }
    for (Vec2 p : {Vec2{0.3, 0.7}, Vec2{1.99, -0.5}, Vec2{2, 2}})
        EXPECT_NEAR(g.bilinear(p), 1 + 2 * p.x - p.y + 0.5 * p.x * p.y, 1e-13);
}

TEST(GridData, CsvRoundTrip) {
    GridData g;
    g.nx = 3;
    g.ny = 2;
    g.window = {-1, 1, 0, 0.5};
    g.values = {0.1, 1.0 / 3.0, -2.5e-7, 4, 5, 6.125};
    auto path = std::filesystem::temp_directory_path() / "heis_grid_roundtrip.csv";
    std::ofstream(path) << g.to_csv();
    GridData back = GridData::read_csv(path.string());
    EXPECT_EQ(back.nx, 3);
    EXPECT_EQ(back.ny, 2);
    EXPECT_EQ(back.window, g.window);
    EXPECT_EQ(back.values, g.values);
}

TEST(MakeProblem, DefaultsScaleWithWindow) {
    SurfaceProblem pr = heis_plane("0");
    EXPECT_NEAR(pr.fd_step, 1e-4 * kWin.diagonal(), 1e-15);
    EXPECT_NEAR(pr.eps_D, 1e-8 * kWin.diagonal(), 1e-18);
}

TEST(DirectionalDerivatives, AgreeWithGradients) {
    SurfaceProblem pr = heis_plane("x*y", "x^2");
    Vec2 p{0.7, -0.4}, d = normalized(Vec2{1, 2});
    EXPECT_NEAR(dir_deriv_H(pr, p, d), 2 * p.x * d.x, 1e-7);
    // D^2 = |(y - y, x + x)|^2 = 4x^2 with u = xy and F = (-y, x)
    EXPECT_NEAR(D_at(pr, p), 2 * std::fabs(p.x), 1e-12);
    EXPECT_NEAR(dir_deriv_D(pr, p, d), 2 * d.x, 1e-6);
}
