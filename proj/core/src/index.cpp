#include "heis/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heis {

Polyline circle_polyline(Vec2 center, double radius, int n, bool counterclockwise) {
    Polyline p;
    p.reserve(n + 1);
    for (int k = 0; k < n; ++k) {
        double phi = 2 * kPi * k / n * (counterclockwise ? 1.0 : -1.0);
        p.push_back(center + Vec2{std::cos(phi), std::sin(phi)} * radius);
    }
    p.push_back(p.front());
    return p;
}

Polyline curve_polyline(const ParamCurve& c, int n) {
    Polyline p;
    p.reserve(n + 1);
    for (int k = 0; k <= n; ++k) p.push_back(c.at(c.t0 + (c.t1 - c.t0) * k / n));
    return p;
}

double round_half(double x) { return std::round(2 * x) / 2 + 0.0; }

double lifted_turns(const std::vector<double>& angles) {
    if (angles.size() < 2) return 0.0;
    double lift = angles[0], start = angles[0];
    for (std::size_t k = 1; k < angles.size(); ++k) {
        double d = std::remainder(angles[k] - lift, kPi);
        if (std::fabs(d) >= kPi / 4) throw Error(ErrorCode::LiftJump, "line direction jumps between samples");
        lift += d;
    }
    return (lift - start) / (2 * kPi);
}

namespace {

struct Walk {
    std::vector<Vec2> pts;
    std::vector<double> cum;  // arc length at each vertex

    explicit Walk(const Polyline& loop) : pts(loop) {
        if (pts.size() < 3) throw Error(ErrorCode::ConfigInvalid, "loop needs at least 3 points");
        if (norm(pts.front() - pts.back()) > 1e-9 * (1 + norm(pts.front()))) pts.push_back(pts.front());
        cum.assign(pts.size(), 0.0);
        for (std::size_t k = 1; k < pts.size(); ++k) cum[k] = cum[k - 1] + norm(pts[k] - pts[k - 1]);
    }
    double length() const { return cum.back(); }
    std::size_t segment(double s) const {
        s = std::clamp(s, 0.0, length());
        auto it = std::upper_bound(cum.begin(), cum.end(), s);
        std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cum.begin())) - 1;
        return std::min(k, pts.size() - 2);
    }
    Vec2 at(double s) const {
        std::size_t k = segment(s);
        double L = cum[k + 1] - cum[k];
        double t = L > 0 ? (std::clamp(s, 0.0, length()) - cum[k]) / L : 0.0;
        return pts[k] + (pts[k + 1] - pts[k]) * t;
    }
    Vec2 tangent(double s) const {
        std::size_t k = segment(s);
        return normalized(pts[k + 1] - pts[k]);
    }
    // nearest point on the polyline: (point, unit tangent of its segment)
    std::pair<Vec2, Vec2> nearest(Vec2 q) const {
        double best = std::numeric_limits<double>::infinity();
        Vec2 bp, bt;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            Vec2 ab = pts[k + 1] - pts[k];
            double L2 = dot(ab, ab);
            if (L2 <= 0) continue;
            double t = std::clamp(dot(q - pts[k], ab) / L2, 0.0, 1.0);
            Vec2 c = pts[k] + ab * t;
            double d = norm(q - c);
            if (d < best) {
                best = d;
                bp = c;
                bt = ab / std::sqrt(L2);
            }
        }
        return {bp, bt};
    }
    // unit tangents of the segments meeting at c (two at a vertex)
    std::vector<Vec2> tangents_at(Vec2 c) const {
        std::vector<Vec2> out;
        const double tol = 1e-12 * (1 + norm(c));
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            Vec2 ab = pts[k + 1] - pts[k];
            double L2 = dot(ab, ab);
            if (L2 <= 0) continue;
            double t = std::clamp(dot(c - pts[k], ab) / L2, 0.0, 1.0);
            if (norm(pts[k] + ab * t - c) <= tol) out.push_back(ab / std::sqrt(L2));
        }
        return out;
    }
    double bbox_diagonal() const {
        double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
        for (const Vec2& p : pts) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        return std::hypot(x1 - x0, y1 - y0);
    }
};

double line_angle(const SurfaceProblem& pr, Vec2 q, bool guard) {
    FrameSample f = eval_frame(pr, q);
    if (guard && f.D <= 2 * pr.eps_D) throw Error(ErrorCode::SingularOnLoop, "loop meets the singular set");
    if (!(f.D > 0)) throw Error(ErrorCode::SingularOnLoop, "line field undefined on the loop");
    return f.theta;
}

double loop_turns(const SurfaceProblem& pr, const Walk& w, int n) {
    std::vector<double> a(n + 1);
    parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t k) {
        a[k] = line_angle(pr, w.at(w.length() * static_cast<double>(k) / n), true);
    });
    return lifted_turns(a);
}

// glued doubled-neighbourhood loop at p with arc radius r; returns half its winding
double doubled_index(const SurfaceProblem& pr, const Walk& w, Vec2 p, double r) {
    Vec2 T0 = w.nearest(p).second;
    Vec2 n0{-T0.y, T0.x};
    auto inside = [&](double phi) {
        Vec2 q = p + Vec2{std::cos(phi), std::sin(phi)} * r;
        auto [c, t] = w.nearest(q);
        return cross(t, q - c) > 0;
    };
    double phin = std::atan2(n0.y, n0.x);
    if (!inside(phin)) throw Error(ErrorCode::NotATangency, "arc radius too large for the boundary near p");
    auto edge = [&](double sign) {
        double lo = phin, hi = phin;
        const double dphi = kPi / 360;
        for (int k = 0; k < 540; ++k) {
            hi = phin + sign * dphi * (k + 1);
            if (!inside(hi)) break;
            lo = hi;
        }
        if (inside(hi)) throw Error(ErrorCode::NotATangency, "arc does not leave the domain");
        for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (lo + hi);
            if (inside(m)) lo = m;
            else hi = m;
        }
        return lo;
    };
    double phi1 = edge(-1.0), phi2 = edge(1.0);

    const int K = 720;
    std::vector<double> alpha(K + 1);
    for (int k = 0; k <= K; ++k) {
        double phi = phi1 + (phi2 - phi1) * k / K;
        Vec2 q = p + Vec2{std::cos(phi), std::sin(phi)} * r;
        Vec2 t = w.nearest(q).second;
        // direction of the characteristic line relative to the boundary tangent
        alpha[k] = line_angle(pr, q, false) - kPi / 2 - std::atan2(t.y, t.x);
    }
    auto rep = [](double a) {
        double m = std::fmod(a, kPi);
        return m < 0 ? m + kPi : m;
    };
    double a1 = rep(alpha.front()), a2 = rep(alpha.back());
    const double tiny = 1e-6;
    if (std::fabs(std::sin(a1)) < tiny || std::fabs(std::sin(a2)) < tiny)
        throw Error(ErrorCode::NonIsolated, "line field tangent to the boundary at the arc ends");

    std::vector<double> seq(alpha);
    const int S = 32;
    // across the seam through the normal, avoiding the tangent direction
    for (int k = 1; k <= S; ++k) seq.push_back(a2 + (kPi - 2 * a2) * k / S);
    for (int k = K; k >= 0; --k) seq.push_back(-alpha[k]);
    double m1 = kPi - a1;
    for (int k = 1; k <= S; ++k) seq.push_back(m1 + (a1 - m1) * k / S);
    return 0.5 * lifted_turns(seq);
}

}  // namespace

HalfInteger loop_index(const SurfaceProblem& pr, const Polyline& loop) {
    Walk w(loop);
    int n = std::max<int>(2000, 4 * static_cast<int>(w.pts.size()));
    double raw;
    try {
        raw = loop_turns(pr, w, n);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::LiftJump) throw;
        raw = loop_turns(pr, w, 8 * n);
    }
    HalfInteger h;
    h.raw = raw;
    h.value = round_half(raw);
    h.defect = std::fabs(raw - h.value);
    return h;
}

HalfInteger boundary_tangency_index(const SurfaceProblem& pr, const Polyline& boundary, Vec2 p, double radius) {
    Walk w(boundary);
    auto [c, T] = w.nearest(p);
    FrameSample f = eval_frame(pr, c);
    if (f.singular) throw Error(ErrorCode::NotATangency, "boundary point is singular");
    // at a polyline vertex the field may sit between the two segment directions
    bool tangent = false;
    int sign = 0;
    for (Vec2 t : w.tangents_at(c)) {
        double x = cross(f.Nperp, t);
        if (std::fabs(x) <= 1e-3) tangent = true;
        int sg = x < 0 ? -1 : 1;
        if (sign != 0 && sg != sign) tangent = true;
        sign = sg;
    }
    if (!tangent && std::fabs(cross(f.Nperp, T)) > 1e-3)
        throw Error(ErrorCode::NotATangency, "line field transverse at p");
    double r = radius > 0 ? radius : 0.02 * w.bbox_diagonal();
    double big = doubled_index(pr, w, c, r);
    double small = doubled_index(pr, w, c, 0.5 * r);
    HalfInteger h;
    h.raw = big;
    h.value = round_half(big);
    h.defect = std::max(std::fabs(big - h.value), std::fabs(big - small));
    return h;
}

std::vector<Vec2> find_tangencies(const SurfaceProblem& pr, const Polyline& loop, int samples) {
    Walk w(loop);
    const double L = w.length();
    auto tfun = [&](double s) {
        Vec2 q = w.at(s);
        FrameSample f = eval_frame(pr, q);
        if (f.D <= pr.eps_D) throw Error(ErrorCode::SingularTouchesBoundary, "singular point on the boundary");
        return cross(f.Nperp, w.tangent(s));
    };
    std::vector<double> t(samples + 1);
    parallel_for(static_cast<std::size_t>(samples + 1),
                 [&](std::size_t k) { t[k] = tfun(L * static_cast<double>(k) / samples); });
    t[samples] = t[0];  // the loop is closed
    std::vector<Vec2> out;
    for (int k = 0; k < samples; ++k) {
        double s0 = L * k / samples, s1 = L * (k + 1) / samples;
        if (t[k] == 0) {
            out.push_back(w.at(s0));
            continue;
        }
        if ((t[k] < 0) != (t[k + 1] < 0) && t[k + 1] != 0) {
            double lo = s0, hi = s1, glo = t[k];
            while (hi - lo > 1e-6 * L) {
                double m = 0.5 * (lo + hi);
                double gm = tfun(m);
                if ((gm < 0) == (glo < 0)) {
                    lo = m;
                    glo = gm;
                } else {
                    hi = m;
                }
            }
            Vec2 q = w.at(0.5 * (lo + hi));
            // a sign change at a corner converges onto the vertex itself
            for (const Vec2& v : w.pts)
                if (norm(v - q) <= 2e-6 * L) q = v;
            out.push_back(q);
            continue;
        }
        // a touching zero leaves no sign change to bracket
        int km = (k + samples - 1) % samples, kp = k + 1;
        if (std::fabs(t[k]) < 1e-8 && std::fabs(t[k]) <= std::fabs(t[km]) && std::fabs(t[k]) <= std::fabs(t[kp]) &&
            (t[km] < 0) == (t[kp] < 0))
            throw Error(ErrorCode::UnresolvedTangency, "degenerate tangency without a sign change");
    }
    return out;
}

IndexReport euler_identity_check(const SurfaceProblem& pr, const std::vector<Polyline>& boundary_loops,
                                 const SingularReport& singular) {
    IndexReport rep;
    double total = 0.0;
    for (std::size_t j = 0; j < boundary_loops.size(); ++j) {
        double sum = 0.0;
        for (Vec2 p : find_tangencies(pr, boundary_loops[j])) {
            TangencyIndex ti;
            ti.loop = static_cast<int>(j);
            ti.point = p;
            ti.index = boundary_tangency_index(pr, boundary_loops[j], p);
            sum += ti.index.value;
            rep.boundary_indices.push_back(ti);
        }
        rep.loop_sums.push_back(sum);
        total += sum;
    }
    rep.component_count = singular.component_count;
    rep.no_singular_set = singular.component_count == 0;
    rep.euler_lhs = 2 - static_cast<int>(boundary_loops.size());
    rep.euler_rhs = rep.component_count + total;
    rep.identity_residual = std::fabs(rep.euler_lhs - rep.euler_rhs);
    return rep;
}

IndexReport euler_identity_declared(const IndexTruth& truth) {
    IndexReport rep;
    rep.declared = true;
    rep.component_count = truth.components;
    rep.loop_sums = truth.boundary_indices;
    double total = 0.0;
    for (double v : truth.boundary_indices) total += v;
    rep.euler_lhs = truth.euler_characteristic;
    rep.euler_rhs = truth.components + total;
    rep.identity_residual = std::fabs(rep.euler_lhs - rep.euler_rhs);
    return rep;
}

}  // namespace heis
