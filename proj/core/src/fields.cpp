#include "heis/fields.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace heis {

double GridData::bilinear(Vec2 p) const {
    double fx = (p.x - window.x0) / dx();
    double fy = (p.y - window.y0) / dy();
    fx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
    int i = std::min(static_cast<int>(fx), nx - 2);
    int j = std::min(static_cast<int>(fy), ny - 2);
    double a = fx - i, b = fy - j;
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) + (1 - a) * b * at(i, j + 1) +
           a * b * at(i + 1, j + 1);
}

namespace {

std::vector<double> split_numbers(const std::string& line, bool& ok) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    ok = true;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
        if (end == cell.c_str() || (end && *end)) {
            ok = false;
            return out;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

GridData GridData::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open grid file " + path);
    std::string line;
    std::getline(in, line);
    bool ok = false;
    auto head = split_numbers(line, ok);
    if (!ok) {
        std::getline(in, line);
        head = split_numbers(line, ok);
    }
    if (!ok || head.size() != 6) throw Error(ErrorCode::ConfigInvalid, "bad grid header in " + path);
    GridData g;
    g.nx = static_cast<int>(head[0]);
    g.ny = static_cast<int>(head[1]);
    g.window = {head[2], head[3], head[4], head[5]};
    if (g.nx < 2 || g.ny < 2) throw Error(ErrorCode::ConfigInvalid, "grid needs at least 2x2 nodes");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_numbers(line, ok);
        if (!ok) throw Error(ErrorCode::ConfigInvalid, "bad grid row in " + path);
        g.values.insert(g.values.end(), row.begin(), row.end());
    }
    if (g.values.size() != static_cast<std::size_t>(g.nx) * g.ny)
        throw Error(ErrorCode::ConfigInvalid, "grid value count mismatch in " + path);
    return g;
}

std::string GridData::to_csv() const {
    std::string out = "nx,ny,x0,x1,y0,y1\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%d,", nx, ny);
    out += buf;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", window.x0, window.x1);
    out += buf;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", window.y0, window.y1);
    out += buf;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", at(i, j));
            out += buf;
            out += (i + 1 < nx) ? ',' : '\n';
        }
    }
    return out;
}

ScalarField ScalarField::expr(Expression e, Window w) {
    ScalarField f;
    f.kind_ = Kind::Expr;
    f.expr_ = std::move(e);
    f.window_ = w;
    return f;
}

ScalarField ScalarField::expr(const std::string& text, Window w) {
    return expr(Expression::parse(text), w);
}

ScalarField ScalarField::constant(double c, Window w) { return expr(Expression::constant(c), w); }

ScalarField ScalarField::grid(GridData g) {
    ScalarField f;
    f.kind_ = Kind::Grid;
    f.window_ = g.window;
    f.grid_ = std::make_shared<const GridData>(std::move(g));
    return f;
}

ScalarField ScalarField::native(NativeFn fn, Window w, std::string tag) {
    ScalarField f;
    f.kind_ = Kind::Native;
    f.window_ = w;
    f.native_ = std::make_shared<const NativeFn>(std::move(fn));
    f.tag_ = std::move(tag);
    return f;
}

double ScalarField::value(Vec2 p) const {
    switch (kind_) {
        case Kind::Expr: return expr_.eval(p.x, p.y);
        case Kind::Grid: return grid_->bilinear(p);
        case Kind::Native: return (*native_)(p).v;
    }
    return 0.0;
}

Jet ScalarField::jet(Vec2 p) const {
    switch (kind_) {
        case Kind::Expr: return expr_.jet(p.x, p.y);
        case Kind::Native: return (*native_)(p);
        case Kind::Grid: break;
    }
    throw Error(ErrorCode::ConfigInvalid, "exact derivatives unavailable for grid fields");
}

SurfaceProblem make_problem(ScalarField u, PlanarVectorField F, ScalarField H, double fd_step,
                            double eps_D) {
    SurfaceProblem pr;
    pr.window = u.window();
    auto same = [&](const ScalarField& f, const char* name) {
        const Window& w = f.window();
        double tol = 1e-12 * pr.window.diagonal();
        if (std::fabs(w.x0 - pr.window.x0) > tol || std::fabs(w.x1 - pr.window.x1) > tol ||
            std::fabs(w.y0 - pr.window.y0) > tol || std::fabs(w.y1 - pr.window.y1) > tol)
            throw Error(ErrorCode::ConfigInvalid, std::string("window of ") + name + " differs from window of u");
    };
    same(F.fx, "F1");
    same(F.fy, "F2");
    same(H, "H");
    if (!(pr.window.width() > 0 && pr.window.height() > 0))
        throw Error(ErrorCode::ConfigInvalid, "window must have positive extent");
    pr.fd_step = fd_step > 0 ? fd_step : 1e-4 * pr.window.diagonal();
    pr.eps_D = eps_D > 0 ? eps_D : 1e-8 * pr.window.diagonal();
    if (!(pr.fd_step < 1e-2 * pr.window.min_side()))
        throw Error(ErrorCode::ConfigInvalid, "fd_step must be below 1e-2 of the smallest window side");
    pr.u = std::move(u);
    pr.F = std::move(F);
    pr.H = std::move(H);
    return pr;
}

namespace {

double fd_dx(const ScalarField& f, Vec2 p, double h) {
    return (f.value({p.x + h, p.y}) - f.value({p.x - h, p.y})) / (2 * h);
}
double fd_dy(const ScalarField& f, Vec2 p, double h) {
    return (f.value({p.x, p.y + h}) - f.value({p.x, p.y - h})) / (2 * h);
}

Vec2 gradient(const ScalarField& f, Vec2 p, double h) {
    if (f.exact_gradient()) {
        Jet j = f.jet(p);
        return {j.dx, j.dy};
    }
    return {fd_dx(f, p, h), fd_dy(f, p, h)};
}

}  // namespace

double frame_margin(const SurfaceProblem& pr) {
    bool fd = !pr.u.exact_gradient() || !pr.F.fx.exact_gradient() || !pr.F.fy.exact_gradient();
    return fd ? pr.fd_step : 0.0;
}

Vec2 grad_u(const SurfaceProblem& pr, Vec2 p) { return gradient(pr.u, p, pr.fd_step); }

Vec2 field_F(const SurfaceProblem& pr, Vec2 p) { return {pr.F.fx.value(p), pr.F.fy.value(p)}; }

double curl(const PlanarVectorField& F, Vec2 p, double h) {
    if (h <= 0) h = 1e-4 * F.fx.window().diagonal();
    double d2x = F.fy.exact_gradient() ? F.fy.jet(p).dx : fd_dx(F.fy, p, h);
    double d1y = F.fx.exact_gradient() ? F.fx.jet(p).dy : fd_dy(F.fx, p, h);
    return d2x - d1y;
}

FrameSample eval_frame(const SurfaceProblem& pr, Vec2 p) {
    double margin = frame_margin(pr);
    if (!pr.window.contains(p, margin))
        throw Error(ErrorCode::OutOfWindow, "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                                ") outside window margin");
    FrameSample s;
    s.point = p;
    Vec2 g = grad_u(pr, p) + field_F(pr, p);
    s.D = norm(g);
    s.curlF = curl(pr.F, p, pr.fd_step);
    s.singular = s.D <= pr.eps_D;
    if (s.D > 0) {
        s.theta = std::atan2(g.y, g.x);
        s.N = {std::cos(s.theta), std::sin(s.theta)};
        s.Nperp = {std::sin(s.theta), -std::cos(s.theta)};
    } else {
        double nan = std::numeric_limits<double>::quiet_NaN();
        s.theta = nan;
        s.N = s.Nperp = {nan, nan};
    }
    return s;
}

double D_at(const SurfaceProblem& pr, Vec2 p) { return norm(grad_u(pr, p) + field_F(pr, p)); }

double H_at(const SurfaceProblem& pr, Vec2 p) { return pr.H.value(p); }

double dir_deriv_H(const SurfaceProblem& pr, Vec2 p, Vec2 dir) {
    if (pr.H.exact_gradient()) {
        Jet j = pr.H.jet(p);
        return j.dx * dir.x + j.dy * dir.y;
    }
    double h = pr.fd_step;
    return (pr.H.value(p + dir * h) - pr.H.value(p - dir * h)) / (2 * h);
}

double dir_deriv_curl(const SurfaceProblem& pr, Vec2 p, Vec2 dir) {
    double h = pr.fd_step;
    return (curl(pr.F, p + dir * h, h) - curl(pr.F, p - dir * h, h)) / (2 * h);
}

double dir_deriv_D(const SurfaceProblem& pr, Vec2 p, Vec2 dir, double h) {
    if (h <= 0) h = pr.fd_step;
    return (D_at(pr, p + dir * h) - D_at(pr, p - dir * h)) / (2 * h);
}

double pde_residual(const SurfaceProblem& pr, Vec2 p) {
    FrameSample c = eval_frame(pr, p);
    if (c.singular) throw Error(ErrorCode::SingularPoint, "pde_residual requires D > eps_D");
    double h = pr.fd_step;
    auto Nat = [&](Vec2 q) {
        FrameSample s = eval_frame(pr, q);
        if (s.singular) throw Error(ErrorCode::SingularPoint, "FD stencil touches the singular set");
        return s.N;
    };
    double div = (Nat({p.x + h, p.y}).x - Nat({p.x - h, p.y}).x) / (2 * h) +
                 (Nat({p.x, p.y + h}).y - Nat({p.x, p.y - h}).y) / (2 * h);
    return div - H_at(pr, p);
}

}  // namespace heis
