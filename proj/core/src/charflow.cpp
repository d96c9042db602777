#include "heis/charflow.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::HitSingular: return "HitSingular";
        case StopReason::HitBoundary: return "HitBoundary";
        case StopReason::MaxLength: return "MaxLength";
        case StopReason::Closed: return "Closed";
    }
    return "Unknown";
}

Vec2 CharCurve::tangent(std::size_t i) const {
    double th = nodes[i].theta;
    Vec2 t = seed ? Vec2{std::cos(th), std::sin(th)} : Vec2{std::sin(th), -std::cos(th)};
    return t * static_cast<double>(direction);
}

Vec2 CharCurve::position_at(double s) const {
    if (nodes.size() == 1) return nodes[0].pos();
    s = std::clamp(s, nodes.front().sigma, nodes.back().sigma);
    auto it = std::upper_bound(nodes.begin(), nodes.end(), s,
                               [](double v, const CharState& n) { return v < n.sigma; });
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - nodes.begin())) - 1;
    if (k + 1 >= nodes.size()) k = nodes.size() - 2;
    const CharState& a = nodes[k];
    const CharState& b = nodes[k + 1];
    double h = b.sigma - a.sigma;
    if (h <= 0) return a.pos();
    double t = (s - a.sigma) / h;
    Vec2 ta = tangent(k) * h, tb = tangent(k + 1) * h;
    if (extrapolated_end && k + 2 == nodes.size()) tb = b.pos() - a.pos();
    double t2 = t * t, t3 = t2 * t;
    return a.pos() * (2 * t3 - 3 * t2 + 1) + ta * (t3 - 2 * t2 + t) + b.pos() * (-2 * t3 + 3 * t2) +
           tb * (t3 - t2);
}

double default_step(const SurfaceProblem& pr) {
    const Window& w = pr.window;
    double hmax = 0.0;
    for (int j = 0; j <= 16; ++j)
        for (int i = 0; i <= 16; ++i)
            hmax = std::max(hmax, std::fabs(pr.H.value({w.x0 + w.width() * i / 16.0, w.y0 + w.height() * j / 16.0})));
    double step = 1e-3 * w.diagonal();
    if (hmax > 0) step = std::min(step, 0.1 / hmax);
    return step;
}

StopPolicy default_policy(const SurfaceProblem& pr, double max_length) {
    StopPolicy p;
    p.max_length = max_length > 0 ? max_length : 4.0 * pr.window.diagonal();
    p.eps_D = pr.eps_D;
    p.boundary = pr.window;
    p.closure_tol = 1e-5 * pr.window.diagonal();
    p.step = 0.0;
    return p;
}

namespace {

struct Tracer {
    const SurfaceProblem& pr;
    const StopPolicy& policy;
    int dir;
    bool seed;
    double margin;

    bool inside(Vec2 p) const { return policy.boundary.contains(p, margin); }

    double theta_field(Vec2 p) const {
        Vec2 g = grad_u(pr, p) + field_F(pr, p);
        return std::atan2(g.y, g.x);
    }

    // derivative of (x, y, theta, u) with respect to travelled arc length
    void rhs(const double* s, double* ds) const {
        Vec2 p{s[0], s[1]};
        if (seed) {
            Vec2 g = grad_u(pr, p) + field_F(pr, p);
            Vec2 n = normalized(g) * static_cast<double>(dir);
            ds[0] = n.x;
            ds[1] = n.y;
            ds[2] = 0.0;
            ds[3] = dot(grad_u(pr, p), n);
            return;
        }
        double sn = std::sin(s[2]), cs = std::cos(s[2]);
        Vec2 F = field_F(pr, p);
        ds[0] = dir * sn;
        ds[1] = -dir * cs;
        ds[2] = -dir * H_at(pr, p);
        ds[3] = dir * (-F.x * sn + F.y * cs);
    }

    CharState advance(const CharState& s0, double h) const {
        double y0[4] = {s0.x, s0.y, s0.theta, s0.u};
        double k1[4], k2[4], k3[4], k4[4], tmp[4];
        rhs(y0, k1);
        for (int i = 0; i < 4; ++i) tmp[i] = y0[i] + 0.5 * h * k1[i];
        rhs(tmp, k2);
        for (int i = 0; i < 4; ++i) tmp[i] = y0[i] + 0.5 * h * k2[i];
        rhs(tmp, k3);
        for (int i = 0; i < 4; ++i) tmp[i] = y0[i] + h * k3[i];
        rhs(tmp, k4);
        CharState s = s0;
        s.sigma = s0.sigma + h;
        s.x = y0[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        s.y = y0[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        s.theta = y0[2] + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        s.u = y0[3] + h / 6.0 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3]);
        if (seed) {
            s.theta = unwrap_near(theta_field(s.pos()), s0.theta, 2 * kPi);
            s.u = pr.u.value(s.pos());
        }
        s.D = D_at(pr, s.pos());
        return s;
    }
};

}  // namespace

static CharCurve trace_impl(const SurfaceProblem& pr, Vec2 start, int direction, const StopPolicy& policy,
                            bool seed) {
    if (direction != 1 && direction != -1)
        throw Error(ErrorCode::ConfigInvalid, "direction must be +1 or -1");
    Tracer tr{pr, policy, direction, seed, std::max(frame_margin(pr), 0.0)};
    FrameSample f0 = eval_frame(pr, start);
    double eps = policy.eps_D > 0 ? policy.eps_D : pr.eps_D;
    if (policy.stop_at_singular && f0.D <= eps) throw Error(ErrorCode::SingularStart, "start point is singular");
    double h = policy.step > 0 ? policy.step : default_step(pr);
    if (h < 1e-12 * pr.window.diagonal()) throw Error(ErrorCode::IntegratorStall, "step collapsed");
    double max_len = policy.max_length > 0 ? policy.max_length : 4.0 * pr.window.diagonal();
    double closure_tol = policy.closure_tol > 0 ? policy.closure_tol : 1e-5 * pr.window.diagonal();

    CharCurve c;
    c.direction = direction;
    c.seed = seed;
    c.step = h;
    CharState s0;
    s0.x = start.x;
    s0.y = start.y;
    s0.theta = f0.theta;
    s0.u = pr.u.value(start);
    s0.D = f0.D;
    c.nodes.push_back(s0);

    auto monitor = [&](const CharState& s) {
        if (seed || s.D <= 10 * eps) return;
        double tf = unwrap_near(tr.theta_field(s.pos()), s.theta, 2 * kPi);
        c.theta_drift_max = std::max(c.theta_drift_max, std::fabs(tf - s.theta));
        if (c.theta_drift_max > 1e-3) c.drift_flag = true;
    };

    // last bracket already examined for a singular kink
    double examined_until = -1.0;

    for (;;) {
        const CharState& cur = c.nodes.back();
        double hs = std::min(h, max_len - cur.sigma);
        bool final_step = hs < h;
        if (hs <= 1e-12 * h) {
            c.stop_reason = StopReason::MaxLength;
            break;
        }
        CharState nxt = tr.advance(cur, hs);

        if (!tr.inside(nxt.pos())) {
            double a = 0.0, b = hs;
            while (b - a > 1e-3 * h) {
                double m = 0.5 * (a + b);
                if (tr.inside(tr.advance(cur, m).pos())) a = m;
                else b = m;
            }
            if (a > 0) {
                CharState last = tr.advance(cur, a);
                monitor(last);
                c.nodes.push_back(last);
            }
            c.stop_reason = StopReason::HitBoundary;
            break;
        }

        if (policy.stop_at_singular && nxt.D <= eps) {
            c.nodes.push_back(nxt);
            c.stop_reason = StopReason::HitSingular;
            break;
        }

        // singular kink: D falls, then rises, across a point where it vanishes
        std::size_t n = c.nodes.size();
        if (!seed && policy.stop_at_singular && n >= 2 && c.nodes[n - 1].D < c.nodes[n - 2].D && nxt.D > c.nodes[n - 1].D &&
            c.nodes[n - 2].sigma > examined_until) {
            const CharState& base = c.nodes[n - 2];
            auto Dat = [&](double lam) { return tr.advance(base, lam - base.sigma).D; };
            double eta = 1e-4 * h;
            auto descending = [&](double lam) { return Dat(lam + eta) < Dat(lam - eta); };
            double a = base.sigma, b = nxt.sigma;
            if (a - eta < base.sigma) a = base.sigma + eta;
            if (descending(a)) {
                while (b - a > 1e-3 * h) {
                    double m = 0.5 * (a + b);
                    if (descending(m)) a = m;
                    else b = m;
                }
                double Da = Dat(a);
                double delta = 1e-2 * h;
                double slope = (Da - Dat(a - delta)) / delta;
                if (slope < 0 && Da <= 4.0 * std::fabs(slope) * (b - a) + eps) {
                    double lam_star = a - Da / slope;
                    CharState end = tr.advance(base, lam_star - base.sigma);
                    end.D = 0.0;
                    if (c.nodes.back().sigma >= lam_star) c.nodes.pop_back();
                    c.nodes.push_back(end);
                    c.extrapolated_end = true;
                    c.stop_reason = StopReason::HitSingular;
                    break;
                }
            }
            examined_until = nxt.sigma;
        }

        // closure of the curve onto its start
        if (nxt.sigma > 3 * h && nxt.sigma > 100 * closure_tol) {
            Vec2 p0 = start, a = cur.pos(), b = nxt.pos();
            Vec2 ab = b - a;
            double t = std::clamp(dot(p0 - a, ab) / std::max(dot(ab, ab), 1e-300), 0.0, 1.0);
            if (norm(a + ab * t - p0) < closure_tol && t > 0 && t < 1 + 1e-12) {
                double lo = 0.0, hi = hs;
                for (int it = 0; it < 60; ++it) {
                    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                    if (norm(tr.advance(cur, m1).pos() - p0) < norm(tr.advance(cur, m2).pos() - p0)) hi = m2;
                    else lo = m1;
                }
                CharState last = tr.advance(cur, 0.5 * (lo + hi));
                c.nodes.push_back(last);
                c.stop_reason = StopReason::Closed;
                break;
            }
        }

        monitor(nxt);
        c.nodes.push_back(nxt);
        if (final_step) {
            c.stop_reason = StopReason::MaxLength;
            break;
        }
    }
    return c;
}

CharCurve trace_characteristic(const SurfaceProblem& pr, Vec2 start, int direction, const StopPolicy& policy) {
    return trace_impl(pr, start, direction, policy, false);
}

CharCurve trace_seed(const SurfaceProblem& pr, Vec2 start, int direction, const StopPolicy& policy) {
    return trace_impl(pr, start, direction, policy, true);
}

double contact_defect(const CharCurve& curve, const SurfaceProblem& pr) {
    if (curve.nodes.size() < 2) return 0.0;
    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double u_re = curve.nodes[0].u;
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < curve.nodes.size(); ++k) {
        const CharState& a = curve.nodes[k];
        const CharState& b = curve.nodes[k + 1];
        double h = b.sigma - a.sigma;
        Vec2 ta = curve.tangent(k) * h, tb = curve.tangent(k + 1) * h;
        if (curve.extrapolated_end && k + 2 == curve.nodes.size()) tb = b.pos() - a.pos();
        double acc = 0.0;
        for (int q = 0; q < 3; ++q) {
            double t = 0.5 * (gx[q] + 1.0);
            double t2 = t * t, t3 = t2 * t;
            Vec2 p = a.pos() * (2 * t3 - 3 * t2 + 1) + ta * (t3 - 2 * t2 + t) + b.pos() * (-2 * t3 + 3 * t2) +
                     tb * (t3 - t2);
            Vec2 dp = a.pos() * (6 * t2 - 6 * t) + ta * (3 * t2 - 4 * t + 1) + b.pos() * (-6 * t2 + 6 * t) +
                      tb * (3 * t2 - 2 * t);
            Vec2 F = field_F(pr, p);
            acc += 0.5 * gw[q] * (-F.x * dp.x - F.y * dp.y);
        }
        u_re += acc;
        worst = std::max(worst, std::fabs(b.u - u_re));
    }
    return worst;
}

ParamCurve as_param_curve(const CharCurve& c) {
    auto shared = std::make_shared<CharCurve>(c);
    ParamCurve pc;
    pc.at = [shared](double s) { return shared->position_at(s); };
    pc.t0 = c.nodes.front().sigma;
    pc.t1 = c.nodes.back().sigma;
    return pc;
}

ParamCurve segment_curve(Vec2 a, Vec2 b) {
    ParamCurve pc;
    pc.at = [a, b](double t) { return a + (b - a) * t; };
    pc.t0 = 0.0;
    pc.t1 = 1.0;
    return pc;
}

ParamCurve arc_curve(Vec2 center, double radius, double phi0, double phi1) {
    ParamCurve pc;
    pc.at = [=](double phi) { return center + Vec2{std::cos(phi), std::sin(phi)} * radius; };
    pc.t0 = phi0;
    pc.t1 = phi1;
    return pc;
}

}  // namespace heis
