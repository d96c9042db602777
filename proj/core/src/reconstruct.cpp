#include "heis/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heis {

double IntrinsicPatch::VD(Vec2 q) const {
    Jet d = D(q);
    return d.dx * V1(q).v + d.dy * V2(q).v;
}

IntrinsicPatch patch_from_expressions(const std::string& v1, const std::string& v2, const std::string& d,
                                      const std::string& h, Window domain, int n) {
    const std::vector<std::string> vars = {"xi", "eta"};
    auto wrap = [&](const std::string& text) {
        Expression e = Expression::parse(text, vars);
        return PatchFn([e](Vec2 q) { return e.jet(q.x, q.y); });
    };
    IntrinsicPatch p;
    p.domain = domain;
    p.n = n;
    p.V1 = wrap(v1);
    p.V2 = wrap(v2);
    p.D = wrap(d);
    p.H = wrap(h);
    return p;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Carry {
    Vec2 q;
    Vec2 P;
    double g = 1.0;
};

Carry carry_rhs(const IntrinsicPatch& pt, const Carry& c) {
    Jet v1 = pt.V1(c.q), v2 = pt.V2(c.q), d = pt.D(c.q);
    double H = pt.H(c.q).v;
    Vec2 V{v1.v, v2.v};
    double VD = d.dx * V.x + d.dy * V.y;
    double k = (2 - VD) / d.v;
    Vec2 JP{v1.dx * c.P.x + v1.dy * c.P.y, v2.dx * c.P.x + v2.dy * c.P.y};
    Carry r;
    r.q = V;
    r.P = c.P * (-k) + V * H + JP;
    r.g = -2 * c.g / d.v;
    return r;
}

Carry carry_step(const IntrinsicPatch& pt, const Carry& c, double h) {
    auto add = [](const Carry& a, const Carry& b, double s) {
        return Carry{a.q + b.q * s, a.P + b.P * s, a.g + b.g * s};
    };
    Carry k1 = carry_rhs(pt, c);
    Carry k2 = carry_rhs(pt, add(c, k1, 0.5 * h));
    Carry k3 = carry_rhs(pt, add(c, k2, 0.5 * h));
    Carry k4 = carry_rhs(pt, add(c, k3, h));
    Carry out;
    out.q = c.q + (k1.q + k2.q * 2 + k3.q * 2 + k4.q) * (h / 6);
    out.P = c.P + (k1.P + k2.P * 2 + k3.P * 2 + k4.P) * (h / 6);
    out.g = c.g + (k1.g + 2 * k2.g + 2 * k3.g + k4.g) * (h / 6);
    return out;
}

Carry carry(const IntrinsicPatch& pt, Carry c, double T, int steps) {
    double h = T / steps;
    for (int k = 0; k < steps; ++k) c = carry_step(pt, c, h);
    return c;
}

Vec2 flow(const IntrinsicPatch& pt, Vec2 q, double T, int steps) {
    double h = T / steps;
    for (int k = 0; k < steps; ++k) {
        Vec2 k1 = pt.V(q), k2 = pt.V(q + k1 * (0.5 * h)), k3 = pt.V(q + k2 * (0.5 * h)), k4 = pt.V(q + k3 * h);
        q = q + (k1 + k2 * 2 + k3 * 2 + k4) * (h / 6);
    }
    return q;
}

Vec2 seed_P(const IntrinsicPatch& pt, Vec2 q) {
    if (pt.P_seed) return pt.P_seed(q);
    return normalized(rot90(pt.V(q)));
}

int steps_for(const IntrinsicPatch& pt, double T) {
    double h = std::min(pt.hxi(), pt.heta());
    return std::max(4, static_cast<int>(std::ceil(std::fabs(T) / h)));
}

// P and g at every node, transported along V-curves from the line xi = centre
void transport_all(const IntrinsicPatch& pt, NodeField<Vec2>& P, NodeField<double>& g) {
    const int n = pt.n;
    const double xc = 0.5 * (pt.domain.x0 + pt.domain.x1);
    P.assign(static_cast<std::size_t>(n) * n, Vec2{});
    g.assign(static_cast<std::size_t>(n) * n, 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        for (int i = 0; i < n; ++i) {
            Vec2 node = pt.node(i, static_cast<int>(j));
            Vec2 V = pt.V(node);
            if (std::fabs(V.x) < 1e-12) throw Error(ErrorCode::ConfigInvalid, "V-curves must cross the seed line");
            double tau = (xc - node.x) / V.x;
            Vec2 qs = node;
            for (int it = 0; it < 20; ++it) {
                qs = flow(pt, node, tau, steps_for(pt, tau));
                double err = qs.x - xc;
                if (std::fabs(err) < 1e-14 * (1 + std::fabs(xc))) break;
                tau -= err / pt.V(qs).x;
            }
            Carry c{qs, seed_P(pt, qs), 1.0};
            if (tau != 0) c = carry(pt, c, -tau, steps_for(pt, tau));
            P[j * n + i] = c.P;
            g[j * n + i] = c.g;
        }
    });
}

// 4th-order cumulative integral of uniformly spaced samples
std::vector<double> cumulative(const std::vector<double>& f, double h) {
    const std::size_t m = f.size();
    std::vector<double> F(m, 0.0);
    if (m < 2) return F;
    if (m < 4) {
        for (std::size_t k = 1; k < m; ++k) F[k] = F[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
        return F;
    }
    for (std::size_t k = 0; k + 1 < m; ++k) {
        double piece;
        if (k == 0) piece = h / 24 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
        else if (k + 2 == m) piece = h / 24 * (9 * f[m - 1] + 19 * f[m - 2] - 5 * f[m - 3] + f[m - 4]);
        else piece = h / 24 * (-f[k - 1] + 13 * f[k] + 13 * f[k + 1] - f[k + 2]);
        F[k + 1] = F[k] + piece;
    }
    return F;
}

// integrate an exact 1-form (a dxi + b deta) over the spanning tree: trunk along the
// centre column, branches along rows
NodeField<double> tree_integrate(const IntrinsicPatch& pt, const NodeField<Vec2>& form, double base) {
    const int n = pt.n, c = (n - 1) / 2;
    NodeField<double> out(static_cast<std::size_t>(n) * n);
    std::vector<double> col(n);
    for (int j = 0; j < n; ++j) col[j] = form[static_cast<std::size_t>(j) * n + c].y;
    std::vector<double> trunk = cumulative(col, pt.heta());
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) row[i] = form[static_cast<std::size_t>(j) * n + i].x;
        std::vector<double> br = cumulative(row, pt.hxi());
        double at_trunk = base + trunk[j] - trunk[c];
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(j) * n + i] = at_trunk + br[i] - br[c];
    }
    return out;
}

// gradient from its pairings with V and P
Vec2 dual_solve(Vec2 V, Vec2 P, double rv, double rp) {
    double det = V.x * P.y - V.y * P.x;
    return {(rv * P.y - V.y * rp) / det, (V.x * rp - P.x * rv) / det};
}

// central-difference derivative of Q along W / scale at nodes whose neighbours are valid
NodeField<double> along(const IntrinsicPatch& pt, const NodeField<double>& Q, const NodeField<Vec2>& W,
                        const NodeField<double>& scale) {
    const int n = pt.n;
    NodeField<double> out(Q.size(), kNaN);
    for (int j = 1; j + 1 < n; ++j)
        for (int i = 1; i + 1 < n; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * n + i;
            double qx = (Q[k + 1] - Q[k - 1]) / (2 * pt.hxi());
            double qy = (Q[k + n] - Q[k - n]) / (2 * pt.heta());
            out[k] = (W[k].x * qx + W[k].y * qy) / scale[k];
        }
    return out;
}

}  // namespace

Vec2 transport_P(const IntrinsicPatch& patch, Vec2 start, Vec2 P0, double T, int steps, double* g_out) {
    Carry c = carry(patch, Carry{start, P0, 1.0}, T, std::max(1, steps));
    if (g_out) *g_out = c.g;
    return c.P;
}

NodeField<Vec2> solve_P(const IntrinsicPatch& patch) {
    NodeField<Vec2> P;
    NodeField<double> g;
    transport_all(patch, P, g);
    const int n = patch.n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!(cross(patch.V(patch.node(i, j)), P[static_cast<std::size_t>(j) * n + i]) > 0))
                throw Error(ErrorCode::OrientationFlip, "(V, P) loses orientation at node (" + std::to_string(i) +
                                                            ", " + std::to_string(j) + ")");
    return P;
}

CodazziCheck check_codazzi(const IntrinsicPatch& pt, const NodeField<Vec2>& P) {
    const int n = pt.n;
    CodazziCheck c;
    c.residual.assign(static_cast<std::size_t>(n) * n, kNaN);
    for (int j = 1; j + 1 < n; ++j)
        for (int i = 1; i + 1 < n; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * n + i;
            Vec2 q = pt.node(i, j);
            Vec2 V = pt.V(q);
            double h = std::min(pt.hxi(), pt.heta()) / norm(V);
            double VD = pt.VD(q);
            double VVD = (pt.VD(q + V * h) - pt.VD(q - V * h)) / (2 * h);
            Jet H = pt.H(q);
            double D = pt.D(q).v;
            double PH = H.dx * P[k].x + H.dy * P[k].y;
            double r = D * VVD - (2 * (VD - 1) * (VD - 2) + (H.v * H.v + PH) * D * D);
            c.residual[k] = r;
            c.max_residual = std::max(c.max_residual, std::fabs(r));
        }
    return c;
}

CodazziCheck check_codazzi(const IntrinsicPatch& patch) { return check_codazzi(patch, solve_P(patch)); }

ReconstructionPatch build_coordinates(const IntrinsicPatch& pt) {
    if (pt.n < 9 || pt.n % 2 == 0) throw Error(ErrorCode::ConfigInvalid, "patch needs an odd node count >= 9");
    const int n = pt.n;
    const std::size_t N = static_cast<std::size_t>(n) * n;
    ReconstructionPatch rp;
    rp.patch = pt;
    rp.P = solve_P(pt);
    NodeField<Vec2> Pdummy;
    transport_all(pt, Pdummy, rp.g);

    CodazziCheck cod = check_codazzi(pt, rp.P);
    rp.codazzi_residual = cod.residual;
    rp.max_codazzi = cod.max_residual;
    if (cod.max_residual > pt.gate)
        throw Error(ErrorCode::NotIntegrable, "Codazzi residual " + std::to_string(cod.max_residual) + " above gate");

    // f along P-curves from the line eta = centre; H = 0 gives f = 1 exactly
    rp.f.assign(N, 1.0);
    double maxH = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Jet H = pt.H(pt.node(i, j));
            maxH = std::max({maxH, std::fabs(H.v), std::fabs(H.dx), std::fabs(H.dy)});
        }
    if (maxH > 0) {
        const double yc = 0.5 * (pt.domain.y0 + pt.domain.y1);
        auto P_at = [&](Vec2 q) {
            double fx = std::clamp((q.x - pt.domain.x0) / pt.hxi(), 0.0, n - 1.0);
            double fy = std::clamp((q.y - pt.domain.y0) / pt.heta(), 0.0, n - 1.0);
            int i = std::min(static_cast<int>(fx), n - 2), j = std::min(static_cast<int>(fy), n - 2);
            double a = fx - i, b = fy - j;
            auto at = [&](int ii, int jj) { return rp.P[static_cast<std::size_t>(jj) * n + ii]; };
            return at(i, j) * ((1 - a) * (1 - b)) + at(i + 1, j) * (a * (1 - b)) + at(i, j + 1) * ((1 - a) * b) +
                   at(i + 1, j + 1) * (a * b);
        };
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
            for (int i = 0; i < n; ++i) {
                Vec2 q = pt.node(i, static_cast<int>(j));
                Vec2 P0 = P_at(q);
                if (std::fabs(P0.y) < 1e-12) throw Error(ErrorCode::ConfigInvalid, "P-curves must cross eta = centre");
                double T = (q.y - yc) / P0.y;
                int steps = steps_for(pt, T);
                // walk from the node to the seed line, accumulating log f backwards
                double logf = 0.0, h = -T / steps;
                for (int k = 0; k < steps; ++k) {
                    Vec2 k1 = P_at(q), k2 = P_at(q + k1 * (0.5 * h)), k3 = P_at(q + k2 * (0.5 * h)),
                         k4 = P_at(q + k3 * h);
                    double H1 = pt.H(q).v, H2 = pt.H(q + k1 * (0.5 * h)).v, H3 = pt.H(q + k2 * (0.5 * h)).v,
                           H4 = pt.H(q + k3 * h).v;
                    logf -= h / 6 * (-H1 - 2 * H2 - 2 * H3 - H4);
                    q = q + (k1 + k2 * 2 + k3 * 2 + k4) * (h / 6);
                }
                rp.f[j * n + i] = std::exp(logf);
            }
        });
    }
    for (std::size_t k = 0; k < N; ++k)
        if (!(rp.f[k] > 0) || !(rp.g[k] > 0) || !std::isfinite(rp.f[k]) || !std::isfinite(rp.g[k]))
            throw Error(ErrorCode::NonPositiveFactor, "integrating factor not positive");

    NodeField<Vec2> Vn(N), gs(N), gt(N), gth(N);
    NodeField<double> D(N), H(N), VD(N), gD(N);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * n + i;
            Vec2 q = pt.node(i, j);
            Vn[k] = pt.V(q);
            D[k] = pt.D(q).v;
            H[k] = pt.H(q).v;
            VD[k] = pt.VD(q);
            gD[k] = rp.g[k] * D[k];
            gs[k] = dual_solve(Vn[k], rp.P[k], rp.f[k], 0.0);
            gt[k] = dual_solve(Vn[k], rp.P[k], 0.0, gD[k]);
            gth[k] = dual_solve(Vn[k], rp.P[k], -H[k], (2 - VD[k]) / D[k]);
        }
    rp.s = tree_integrate(pt, gs, 0.0);
    rp.t = tree_integrate(pt, gt, 0.0);
    rp.theta = tree_integrate(pt, gth, 0.0);
    rp.grad_theta = gth;

    // curvature of ds^2/f^2 + dt^2/(gD)^2 in the orthogonal-parametrization form
    NodeField<double> E(N), G(N), A(N);
    for (std::size_t k = 0; k < N; ++k) {
        E[k] = 1 / (rp.f[k] * rp.f[k]);
        G[k] = 1 / (gD[k] * gD[k]);
        A[k] = 1 / (rp.f[k] * gD[k]);
    }
    NodeField<double> Gs = along(pt, G, Vn, rp.f), Et = along(pt, E, rp.P, gD);
    NodeField<double> Q1(N), Q2(N);
    for (std::size_t k = 0; k < N; ++k) {
        Q1[k] = Gs[k] / A[k];
        Q2[k] = Et[k] / A[k];
    }
    NodeField<double> T1 = along(pt, Q1, Vn, rp.f), T2 = along(pt, Q2, rp.P, gD);
    rp.K_residual.assign(N, kNaN);
    for (int j = 2; j + 2 < n; ++j)
        for (int i = 2; i + 2 < n; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * n + i;
            double K = -(T1[k] + T2[k]) / (2 * A[k]);
            rp.K_residual[k] = K;
            rp.max_K = std::max(rp.max_K, std::fabs(K));
        }
    if (!(rp.max_K <= pt.gate))
        throw Error(ErrorCode::NotIntegrable, "curvature residual " + std::to_string(rp.max_K) + " above gate");

    // loop defect of d(theta) on every cell
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * n + i;
            double bottom = 0.5 * pt.hxi() * (gth[k].x + gth[k + 1].x);
            double top = 0.5 * pt.hxi() * (gth[k + n].x + gth[k + n + 1].x);
            double left = 0.5 * pt.heta() * (gth[k].y + gth[k + n].y);
            double right = 0.5 * pt.heta() * (gth[k + 1].y + gth[k + n + 1].y);
            rp.max_cell_defect = std::max(rp.max_cell_defect, std::fabs(bottom + right - top - left));
        }
    double area = pt.hxi() * pt.heta();
    if (!(rp.max_cell_defect <= 10 * rp.max_K * area + 1e-10))
        throw Error(ErrorCode::NotIntegrable, "cell loop defect " + std::to_string(rp.max_cell_defect) +
                                                  " exceeds the curvature bound");

    rp.grad_x.resize(N);
    rp.grad_y.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        double sn = std::sin(rp.theta[k]), cs = std::cos(rp.theta[k]);
        rp.grad_x[k] = dual_solve(Vn[k], rp.P[k], sn, cs);
        rp.grad_y[k] = dual_solve(Vn[k], rp.P[k], -cs, sn);
    }
    rp.x = tree_integrate(pt, rp.grad_x, 0.0);
    rp.y = tree_integrate(pt, rp.grad_y, 0.0);

    rp.min_jacobian = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < N; ++k)
        rp.min_jacobian = std::min(rp.min_jacobian, cross(Vec2{rp.grad_x[k].x, rp.grad_y[k].x},
                                                          Vec2{rp.grad_x[k].y, rp.grad_y[k].y}));
    if (!(rp.min_jacobian > 0)) throw Error(ErrorCode::FoldedChart, "(xi, eta) -> (x, y) is not orientation preserving");
    return rp;
}

void integrate_u(ReconstructionPatch& rp, double u0) {
    const IntrinsicPatch& pt = rp.patch;
    const int n = pt.n;
    const std::size_t N = static_cast<std::size_t>(n) * n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Vec2 V = pt.V(pt.node(i, j));
            if (std::fabs(V.y) > 1e-12 * norm(V))
                throw Error(ErrorCode::ConfigInvalid, "graph emission needs V-curves along the xi rows");
        }
    // trunk: grad u + (-y, x) = D N; rows are V-curves: du = y dx - x dy
    NodeField<Vec2> du(N);
    for (std::size_t k = 0; k < N; ++k) {
        int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
        double D = pt.D(pt.node(i, j)).v;
        double x = rp.x[k], y = rp.y[k], th = rp.theta[k];
        Vec2 gx = rp.grad_x[k], gy = rp.grad_y[k];
        du[k].x = y * gx.x - x * gy.x;
        du[k].y = (D * std::cos(th) + y) * gx.y + (D * std::sin(th) - x) * gy.y;
    }
    rp.u = tree_integrate(pt, du, u0);
}

namespace {

// tensor cubic Lagrange interpolation of a node field at (xi, eta)
double interp(const IntrinsicPatch& pt, const NodeField<double>& F, Vec2 q) {
    const int n = pt.n;
    double fx = (q.x - pt.domain.x0) / pt.hxi(), fy = (q.y - pt.domain.y0) / pt.heta();
    int i0 = std::clamp(static_cast<int>(std::floor(fx)) - 1, 0, n - 4);
    int j0 = std::clamp(static_cast<int>(std::floor(fy)) - 1, 0, n - 4);
    double wx[4], wy[4];
    for (int a = 0; a < 4; ++a) {
        wx[a] = wy[a] = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            wx[a] *= (fx - (i0 + b)) / static_cast<double>(a - b);
            wy[a] *= (fy - (j0 + b)) / static_cast<double>(a - b);
        }
    }
    double acc = 0.0;
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) acc += wx[a] * wy[b] * F[static_cast<std::size_t>(j0 + b) * n + i0 + a];
    return acc;
}

bool in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 &a = poly[i], &b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
    }
    return in;
}

}  // namespace

EmittedGraph emit_graph(ReconstructionPatch& rp, const EmitOptions& opt) {
    if (opt.nodes < 16) throw Error(ErrorCode::ConfigInvalid, "emitted grid needs at least 16 nodes per side");
    integrate_u(rp, opt.u0);
    const IntrinsicPatch& pt = rp.patch;
    const int n = pt.n;
    auto at = [&](const NodeField<double>& F, int i, int j) { return F[static_cast<std::size_t>(j) * n + i]; };

    // image of the patch boundary, counterclockwise
    std::vector<Vec2> poly;
    for (int i = 0; i < n - 1; ++i) poly.push_back({at(rp.x, i, 0), at(rp.y, i, 0)});
    for (int j = 0; j < n - 1; ++j) poly.push_back({at(rp.x, n - 1, j), at(rp.y, n - 1, j)});
    for (int i = n - 1; i > 0; --i) poly.push_back({at(rp.x, i, n - 1), at(rp.y, i, n - 1)});
    for (int j = n - 1; j > 0; --j) poly.push_back({at(rp.x, 0, j), at(rp.y, 0, j)});

    const int c = (n - 1) / 2;
    Vec2 ctr{at(rp.x, c, c), at(rp.y, c, c)};
    auto fits = [&](double r) {
        for (int k = 0; k <= 160; ++k) {
            double s = -r + 2 * r * (k % 41) / 40.0;
            Vec2 pts[4] = {{ctr.x + s, ctr.y - r}, {ctr.x + s, ctr.y + r}, {ctr.x - r, ctr.y + s}, {ctr.x + r, ctr.y + s}};
            for (Vec2 p : pts)
                if (!in_polygon(poly, p)) return false;
        }
        for (Vec2 v : poly)
            if (std::fabs(v.x - ctr.x) < r && std::fabs(v.y - ctr.y) < r) return false;
        return true;
    };
    double lo = 0.0, hi = 0.0;
    for (Vec2 v : poly) hi = std::max(hi, norm(v - ctr));
    for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (lo + hi);
        if (fits(m)) lo = m;
        else hi = m;
    }
    double r = 0.9 * lo;
    if (!(r > 0)) throw Error(ErrorCode::FoldedChart, "no square fits inside the image of the patch");
    EmittedGraph eg;
    eg.rect = {ctr.x - r, ctr.x + r, ctr.y - r, ctr.y + r};
    const int m = opt.nodes;
    const double sp = 2 * r / (m - 1);

    // (xi, eta) of each emitted node by Newton on the interpolated development
    std::vector<Vec2> pre(static_cast<std::size_t>(m) * m);
    auto newton = [&](Vec2 target, Vec2 q) {
        for (int it = 0; it < 40; ++it) {
            Vec2 X{interp(pt, rp.x, q), interp(pt, rp.y, q)};
            Vec2 res = X - target;
            if (norm(res) < 1e-14 * (1 + r)) return q;
            double dx = 1e-6 * pt.hxi(), dy = 1e-6 * pt.heta();
            Vec2 Xa = (Vec2{interp(pt, rp.x, {q.x + dx, q.y}), interp(pt, rp.y, {q.x + dx, q.y})} -
                       Vec2{interp(pt, rp.x, {q.x - dx, q.y}), interp(pt, rp.y, {q.x - dx, q.y})}) / (2 * dx);
            Vec2 Xb = (Vec2{interp(pt, rp.x, {q.x, q.y + dy}), interp(pt, rp.y, {q.x, q.y + dy})} -
                       Vec2{interp(pt, rp.x, {q.x, q.y - dy}), interp(pt, rp.y, {q.x, q.y - dy})}) / (2 * dy);
            double det = Xa.x * Xb.y - Xb.x * Xa.y;
            if (!(std::fabs(det) > 0)) break;
            q = q - Vec2{(res.x * Xb.y - Xb.x * res.y) / det, (Xa.x * res.y - res.x * Xa.y) / det};
        }
        Vec2 X{interp(pt, rp.x, q), interp(pt, rp.y, q)};
        if (norm(X - target) > 1e-9 * (1 + r)) throw Error(ErrorCode::FoldedChart, "cannot invert the development");
        return q;
    };
    auto nearest_node = [&](Vec2 target) {
        Vec2 best = pt.node(c, c);
        double bd = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double d = norm(Vec2{at(rp.x, i, j), at(rp.y, i, j)} - target);
                if (d < bd) {
                    bd = d;
                    best = pt.node(i, j);
                }
            }
        return best;
    };
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
        Vec2 guess = nearest_node({eg.rect.x0, eg.rect.y0 + j * sp});
        for (int i = 0; i < m; ++i) {
            Vec2 target{eg.rect.x0 + i * sp, eg.rect.y0 + j * sp};
            Vec2 q;
            try {
                q = newton(target, guess);
            } catch (const Error&) {
                q = newton(target, nearest_node(target));
            }
            pre[j * m + i] = q;
            guess = q;
        }
    });

    GridData ug;
    ug.nx = ug.ny = m;
    ug.window = eg.rect;
    ug.values.resize(static_cast<std::size_t>(m) * m);
    bool flatH = true;
    for (std::size_t k = 0; k < ug.values.size(); ++k) {
        ug.values[k] = interp(pt, rp.u, pre[k]);
        if (pt.H(pre[k]).v != 0) flatH = false;
    }
    ScalarField Hf = ScalarField::constant(0.0, eg.rect);
    if (!flatH) {
        GridData hg = ug;
        for (std::size_t k = 0; k < hg.values.size(); ++k) hg.values[k] = pt.H(pre[k]).v;
        Hf = ScalarField::grid(std::move(hg));
    }
    eg.u_grid = ug;
    PlanarVectorField F{ScalarField::expr("-y", eg.rect), ScalarField::expr("x", eg.rect)};
    eg.problem = make_problem(ScalarField::grid(ug), F, Hf, sp);

    // diagnostics on nodes whose stencils stay inside the grid
    std::vector<Vec2> W(static_cast<std::size_t>(m) * m);
    for (std::size_t k = 0; k < W.size(); ++k) {
        double th = interp(pt, rp.theta, pre[k]);
        W[k] = Vec2{std::sin(th), -std::cos(th)} * pt.D(pre[k]).v;
    }
    for (int j = 3; j < m - 3; ++j)
        for (int i = 3; i < m - 3; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * m + i;
            Vec2 p{eg.rect.x0 + i * sp, eg.rect.y0 + j * sp};
            eg.max_D_error = std::max(eg.max_D_error, std::fabs(D_at(eg.problem, p) - pt.D(pre[k]).v));
            eg.max_pde_residual = std::max(eg.max_pde_residual, std::fabs(pde_residual(eg.problem, p)));
            double div = (W[k + 1].x - W[k - 1].x) / (2 * sp) + (W[k + m].y - W[k - m].y) / (2 * sp);
            eg.max_divDV_defect = std::max(eg.max_divDV_defect, std::fabs(div - 2));
        }
    return eg;
}

}  // namespace heis
