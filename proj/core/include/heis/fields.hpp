#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heis/common.hpp"
#include "heis/expr.hpp"

namespace heis {

// row-major samples: value(i,j) at (x0 + i*dx, y0 + j*dy)
struct GridData {
    int nx = 0;
    int ny = 0;
    Window window;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    double dx() const { return window.width() / (nx - 1); }
    double dy() const { return window.height() / (ny - 1); }
    double bilinear(Vec2 p) const;

    // first line "nx,ny,x0,x1,y0,y1" (names or numbers); if names, numbers follow on line 2
    static GridData read_csv(const std::string& path);
    std::string to_csv() const;
};

class ScalarField {
public:
    enum class Kind { Expr, Grid, Native };
    using NativeFn = std::function<Jet(Vec2)>;

    ScalarField() = default;
    static ScalarField expr(Expression e, Window w);
    static ScalarField expr(const std::string& text, Window w);
    static ScalarField constant(double c, Window w);
    static ScalarField grid(GridData g);
    // closed-form closure returning value and exact gradient; tag names it in configs
    static ScalarField native(NativeFn fn, Window w, std::string tag);

    Kind kind() const { return kind_; }
    const Window& window() const { return window_; }
    bool exact_gradient() const { return kind_ != Kind::Grid; }
    bool is_constant() const { return kind_ == Kind::Expr && expr_.is_constant(); }

    double value(Vec2 p) const;
    // exact value+gradient; only for Expr and Native kinds
    Jet jet(Vec2 p) const;

    const Expression& expression() const { return expr_; }
    const GridData& grid_data() const { return *grid_; }
    const std::string& tag() const { return tag_; }

private:
    Kind kind_ = Kind::Expr;
    Window window_;
    Expression expr_;
    std::shared_ptr<const GridData> grid_;
    std::shared_ptr<const NativeFn> native_;
    std::string tag_;
};

struct PlanarVectorField {
    ScalarField fx;
    ScalarField fy;
};

struct SurfaceProblem {
    ScalarField u;
    PlanarVectorField F;
    ScalarField H;
    Window window;
    double fd_step = 0.0;
    double eps_D = 0.0;
};

// fills defaults (fd_step = 1e-4 diag, eps_D = 1e-8 diag) and validates invariants
SurfaceProblem make_problem(ScalarField u, PlanarVectorField F, ScalarField H,
                            double fd_step = 0.0, double eps_D = 0.0);

struct FrameSample {
    Vec2 point;
    double D = 0.0;
    double theta = 0.0;
    Vec2 N;
    Vec2 Nperp;
    double curlF = 0.0;
    bool singular = false;
};

FrameSample eval_frame(const SurfaceProblem& pr, Vec2 p);
double curl(const PlanarVectorField& F, Vec2 p, double h = 0.0);
double pde_residual(const SurfaceProblem& pr, Vec2 p);

Vec2 grad_u(const SurfaceProblem& pr, Vec2 p);
Vec2 field_F(const SurfaceProblem& pr, Vec2 p);
double D_at(const SurfaceProblem& pr, Vec2 p);
double H_at(const SurfaceProblem& pr, Vec2 p);
// directional derivatives along a unit vector
double dir_deriv_H(const SurfaceProblem& pr, Vec2 p, Vec2 dir);
double dir_deriv_curl(const SurfaceProblem& pr, Vec2 p, Vec2 dir);
double dir_deriv_D(const SurfaceProblem& pr, Vec2 p, Vec2 dir, double h = 0.0);
// margin required by FD stencils of eval_frame at p
double frame_margin(const SurfaceProblem& pr);

}  // namespace heis
