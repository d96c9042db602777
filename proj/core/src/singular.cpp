#include "heis/singular.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace heis {

Vec2 SingularReport::cell_center(int i, int j) const {
    double hx = window.width() / resolution, hy = window.height() / resolution;
    return {window.x0 + (i + 0.5) * hx, window.y0 + (j + 0.5) * hy};
}

namespace {

struct Mask {
    int n = 0;
    std::vector<std::uint8_t> bits;
    std::size_t count = 0;
};

Mask flag_cells(const SurfaceProblem& pr, int n) {
    const Window& w = pr.window;
    double margin = frame_margin(pr);
    Window inner{w.x0 + margin, w.x1 - margin, w.y0 + margin, w.y1 - margin};
    auto clamp_in = [&](Vec2 p) {
        return Vec2{std::clamp(p.x, inner.x0, inner.x1), std::clamp(p.y, inner.y0, inner.y1)};
    };
    double hx = w.width() / n, hy = w.height() / n;
    double hdiag = std::hypot(hx, hy);
    std::vector<double> corner(static_cast<std::size_t>(n + 1) * (n + 1));
    std::vector<double> center(static_cast<std::size_t>(n) * n);
    parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t j) {
        for (int i = 0; i <= n; ++i)
            corner[j * (n + 1) + i] = D_at(pr, clamp_in({w.x0 + i * hx, w.y0 + j * hy}));
        if (j < static_cast<std::size_t>(n))
            for (int i = 0; i < n; ++i)
                center[j * n + i] = D_at(pr, clamp_in({w.x0 + (i + 0.5) * hx, w.y0 + (j + 0.5) * hy}));
    });
    Mask m;
    m.n = n;
    m.bits.assign(static_cast<std::size_t>(n) * n, 0);
    const double eps = pr.eps_D;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Vec2 pos[5] = {{0, 0}, {hx, 0}, {0, hy}, {hx, hy}, {0.5 * hx, 0.5 * hy}};
            const double val[5] = {corner[j * (n + 1) + i], corner[j * (n + 1) + i + 1],
                                   corner[(j + 1) * (n + 1) + i], corner[(j + 1) * (n + 1) + i + 1],
                                   center[j * n + i]};
            double dmin = val[0], lip = 0.0;
            for (int a = 0; a < 5; ++a) {
                dmin = std::min(dmin, val[a]);
                for (int b = a + 1; b < 5; ++b) lip = std::max(lip, std::fabs(val[a] - val[b]) / norm(pos[a] - pos[b]));
            }
            if (dmin <= eps + 0.5 * lip * hdiag) {
                m.bits[static_cast<std::size_t>(j) * n + i] = 1;
                ++m.count;
            }
        }
    }
    return m;
}

}  // namespace

SingularReport detect_singular(const SurfaceProblem& pr, int resolution, int levels) {
    if (resolution < 16) throw Error(ErrorCode::ConfigInvalid, "resolution must be at least 16");
    SingularReport r;
    r.resolution = resolution;
    r.window = pr.window;
    const int n = resolution;
    const int top = std::max(1, levels) - 1;
    for (int k = 0; k <= top; ++k) {
        int nk = resolution << k;
        Mask m = flag_cells(pr, nk);
        r.area_series.push_back({nk, static_cast<double>(m.count) / (static_cast<double>(nk) * nk)});
        if (k == 0) r.mask = std::move(m.bits);
        if (k == top && k > 0) {
            // a base cell survives only if its block still holds a flagged cell at the finest level
            const int f = 1 << k;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    std::uint8_t& b = r.mask[static_cast<std::size_t>(j) * n + i];
                    if (!b) continue;
                    bool any = false;
                    for (int dj = 0; dj < f && !any; ++dj)
                        for (int di = 0; di < f && !any; ++di)
                            any = m.bits[static_cast<std::size_t>(j * f + dj) * nk + (i * f + di)] != 0;
                    b = any;
                }
        }
    }

    r.labels.assign(r.mask.size(), 0);
    int label = 0;
    for (int j0 = 0; j0 < n; ++j0) {
        for (int i0 = 0; i0 < n; ++i0) {
            std::size_t idx0 = static_cast<std::size_t>(j0) * n + i0;
            if (!r.mask[idx0] || r.labels[idx0]) continue;
            ++label;
            SingularComponent comp;
            comp.label = label;
            int ia = i0, ib = i0, ja = j0, jb = j0;
            std::deque<std::pair<int, int>> queue{{i0, j0}};
            r.labels[idx0] = label;
            while (!queue.empty()) {
                auto [i, j] = queue.front();
                queue.pop_front();
                ++comp.cells;
                ia = std::min(ia, i);
                ib = std::max(ib, i);
                ja = std::min(ja, j);
                jb = std::max(jb, j);
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        int a = i + di, b = j + dj;
                        if (a < 0 || b < 0 || a >= n || b >= n) continue;
                        std::size_t id = static_cast<std::size_t>(b) * n + a;
                        if (r.mask[id] && !r.labels[id]) {
                            r.labels[id] = label;
                            queue.push_back({a, b});
                        }
                    }
            }
            double hx = pr.window.width() / n, hy = pr.window.height() / n;
            comp.bbox = {pr.window.x0 + ia * hx, pr.window.x0 + (ib + 1) * hx, pr.window.y0 + ja * hy,
                         pr.window.y0 + (jb + 1) * hy};
            r.components.push_back(comp);
        }
    }
    r.component_count = label;

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            r.max_abs_curl = std::max(r.max_abs_curl, std::fabs(curl(pr.F, r.cell_center(i, j), pr.fd_step)));
    r.hypothesis_violation = r.max_abs_curl < 1e-10;
    return r;
}

DecayFit measure_decay_check(const SingularReport& report) {
    if (report.area_series.size() < 3) throw Error(ErrorCode::DegenerateSeries, "need at least 3 resolutions");
    DecayFit fit;
    fit.hypothesis_violation = report.hypothesis_violation;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(report.area_series.size());
    for (auto [n, a] : report.area_series) {
        if (a <= 0) {
            fit.degenerate = true;
            fit.exponent = -std::numeric_limits<double>::infinity();
            return fit;
        }
        double x = std::log(static_cast<double>(n)), y = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

// ---------------------------------------------------------------- sweeps

HitRecord hit_map(const SurfaceProblem& pr, const ParamCurve& beta, double tau, int direction) {
    HitRecord h;
    h.tau = tau;
    h.start = beta.at(tau);
    StopPolicy pol = default_policy(pr);
    const int dirs[2] = {direction == 0 ? -1 : direction, direction == 0 ? 1 : 0};
    for (int d : dirs) {
        if (d == 0) break;
        CharCurve c = trace_characteristic(pr, h.start, d, pol);
        h.direction = d;
        h.stop = c.stop_reason;
        if (c.stop_reason != StopReason::HitSingular || c.nodes.size() < 2) continue;
        h.hit = true;
        h.end = c.nodes.back().pos();
        h.length = c.length();
        double th = c.nodes[c.nodes.size() - 2].theta;
        h.N_end = {std::cos(th), std::sin(th)};
        return h;
    }
    return h;
}

int SingularSweep::escaped() const {
    return static_cast<int>(std::count_if(rays.begin(), rays.end(), [](const HitRecord& r) { return !r.hit; }));
}

namespace {

std::vector<SingularCurvePoint> with_secants(const std::vector<HitRecord>& hits) {
    std::vector<SingularCurvePoint> pts;
    for (const auto& h : hits) {
        if (!h.hit) continue;
        SingularCurvePoint p;
        p.location = h.end;
        pts.push_back(p);
    }
    for (std::size_t i = 0; i < pts.size() && pts.size() >= 2; ++i) {
        std::size_t a = i == 0 ? 0 : i - 1, b = std::min(i + 1, pts.size() - 1);
        Vec2 d = pts[b].location - pts[a].location;
        if (norm(d) > 0) pts[i].tangent_estimate = normalized(d);
    }
    return pts;
}

double param_speed(const ParamCurve& c, double tau) {
    double d = 1e-6 * std::max(1e-12, std::fabs(c.t1 - c.t0));
    return norm(c.at(tau + d) - c.at(tau - d)) / (2 * d);
}

}  // namespace

SingularSweep trace_singular_curve(const SurfaceProblem& pr, const ParamCurve& beta, int n_rays, int direction) {
    if (n_rays < 2) throw Error(ErrorCode::ConfigInvalid, "need at least 2 rays");
    SingularSweep s;
    s.rays.resize(n_rays);
    parallel_for(static_cast<std::size_t>(n_rays), [&](std::size_t i) {
        double tau = beta.t0 + (beta.t1 - beta.t0) * static_cast<double>(i) / (n_rays - 1);
        s.rays[i] = hit_map(pr, beta, tau, direction);
    });
    s.points = with_secants(s.rays);
    return s;
}

double expanding_rate(const SurfaceProblem& pr, const ParamCurve& seed, double tau, int direction) {
    HitRecord h0 = hit_map(pr, seed, tau, direction);
    if (!h0.hit) throw Error(ErrorCode::DegenerateSide, "characteristic does not reach the singular set");
    double delta = 1e-3 * (seed.t1 - seed.t0);
    StopPolicy pol = default_policy(pr);
    pol.stop_at_singular = false;
    pol.max_length = h0.length;
    Vec2 X[2];
    for (int k = 0; k < 2; ++k) {
        double t = tau + (k == 0 ? delta : -delta);
        CharCurve c = trace_characteristic(pr, seed.at(t), h0.direction, pol);
        if (c.stop_reason != StopReason::MaxLength || std::fabs(c.length() - h0.length) > 1e-9 * h0.length)
            throw Error(ErrorCode::DegenerateSide, "neighbouring characteristic leaves the window");
        X[k] = c.nodes.back().pos();
    }
    Vec2 dP = (X[0] - X[1]) / (2 * delta);
    double lambda = dot(dP, h0.N_end) / param_speed(seed, tau);
    if (std::fabs(lambda) < kEpsLambda)
        throw Error(ErrorCode::DegenerateSide, "expanding rate " + std::to_string(lambda) + " below threshold");
    return lambda;
}

namespace {

// tau with hit(tau) = p0, starting from the sampled hits of a sweep
double locate_from(const SurfaceProblem& pr, const ParamCurve& seed, const std::vector<HitRecord>& rays, Vec2 p0,
                   int direction, HitRecord* out) {
    std::vector<const HitRecord*> hits;
    for (const auto& r : rays)
        if (r.hit) hits.push_back(&r);
    if (hits.size() < 2) throw Error(ErrorCode::DegenerateSide, "too few hits on the seed");
    std::size_t k = 0;
    for (std::size_t i = 1; i < hits.size(); ++i)
        if (norm(hits[i]->end - p0) < norm(hits[k]->end - p0)) k = i;
    std::size_t a = k == 0 ? 0 : k - 1, b = std::min(k + 1, hits.size() - 1);
    Vec2 T = normalized(hits[b]->end - hits[a]->end);
    auto g_of = [&](const HitRecord& h) { return dot(h.end - p0, T); };

    // bracket among neighbours
    double lo = hits[a]->tau, hi = hits[b]->tau;
    double glo = g_of(*hits[a]), ghi = g_of(*hits[b]);
    if (k > a && (glo < 0) == (g_of(*hits[k]) < 0)) {
        lo = hits[k]->tau;
        glo = g_of(*hits[k]);
    } else if (k < b && (ghi < 0) == (g_of(*hits[k]) < 0)) {
        hi = hits[k]->tau;
        ghi = g_of(*hits[k]);
    }
    if ((glo < 0) == (ghi < 0)) throw Error(ErrorCode::DegenerateSide, "hit point outside the sampled range");

    const double tol = 1e-12 * pr.window.diagonal();
    HitRecord best = std::fabs(glo) < std::fabs(ghi) ? *hits[a] : *hits[b];
    int side = 0;
    for (int it = 0; it < 60; ++it) {
        double t = (lo * ghi - hi * glo) / (ghi - glo);
        if (!(t > std::min(lo, hi) && t < std::max(lo, hi))) t = 0.5 * (lo + hi);
        HitRecord h = hit_map(pr, seed, t, direction);
        if (!h.hit) throw Error(ErrorCode::DegenerateSide, "hit map interrupted inside the bracket");
        double g = g_of(h);
        best = h;
        if (std::fabs(g) < tol || std::fabs(hi - lo) < 1e-15 * (seed.t1 - seed.t0)) break;
        // Illinois modification of regula falsi
        if ((g < 0) == (glo < 0)) {
            lo = t;
            glo = g;
            if (side == -1) ghi *= 0.5;
            side = -1;
        } else {
            hi = t;
            ghi = g;
            if (side == 1) glo *= 0.5;
            side = 1;
        }
    }
    if (norm(best.end - p0) > 1e-6 * pr.window.diagonal())
        throw Error(ErrorCode::DegenerateSide, "no characteristic from the seed reaches the point");
    if (out) *out = best;
    return best.tau;
}

std::vector<HitRecord> sample_rays(const SurfaceProblem& pr, const ParamCurve& seed, int samples, int direction) {
    std::vector<HitRecord> rays(samples);
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        double tau = seed.t0 + (seed.t1 - seed.t0) * static_cast<double>(i) / (samples - 1);
        rays[i] = hit_map(pr, seed, tau, direction);
    });
    return rays;
}

}  // namespace

double locate_hit(const SurfaceProblem& pr, const ParamCurve& seed, Vec2 p0, int samples) {
    auto rays = sample_rays(pr, seed, std::max(samples, 4), 0);
    return locate_from(pr, seed, rays, p0, 0, nullptr);
}

std::pair<double, double> lambda_rates(const SurfaceProblem& pr, Vec2 p0, const ParamCurve& seed_plus,
                                       const ParamCurve& seed_minus) {
    double tp = locate_hit(pr, seed_plus, p0);
    double tm = locate_hit(pr, seed_minus, p0);
    return {expanding_rate(pr, seed_plus, tp), expanding_rate(pr, seed_minus, tm)};
}

std::vector<MatchedPoint> sample_singular_points(const SurfaceProblem& pr, const ParamCurve& seed_plus,
                                                 const ParamCurve& seed_minus, int n) {
    if (n < 1) return {};
    std::vector<HitRecord> plus(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double tau = seed_plus.t0 + (seed_plus.t1 - seed_plus.t0) * (i + 1.0) / (n + 1.0);
        plus[i] = hit_map(pr, seed_plus, tau, 0);
    });
    std::vector<HitRecord> minus = sample_rays(pr, seed_minus, std::max(2 * n, 24), 0);
    std::vector<SingularCurvePoint> secants = with_secants(plus);

    std::vector<std::optional<MatchedPoint>> out(n);
    std::vector<std::size_t> hit_index(n, 0);
    for (std::size_t i = 0, k = 0; i < plus.size(); ++i)
        if (plus[i].hit) hit_index[i] = k++;

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        if (!plus[i].hit) return;
        MatchedPoint mp;
        mp.point = secants[hit_index[i]];
        mp.point.Nplus = plus[i].N_end;
        mp.tau_plus = plus[i].tau;
        mp.sigma_plus = plus[i].length;
        HitRecord hm;
        try {
            mp.tau_minus = locate_from(pr, seed_minus, minus, plus[i].end, 0, &hm);
        } catch (const Error&) {
            return;
        }
        mp.sigma_minus = hm.length;
        mp.point.Nminus = hm.N_end;
        mp.match_error = norm(hm.end - plus[i].end);
        bool ok = true;
        try {
            mp.point.lambda_plus = expanding_rate(pr, seed_plus, mp.tau_plus, plus[i].direction);
        } catch (const Error&) {
            ok = false;
        }
        try {
            mp.point.lambda_minus = expanding_rate(pr, seed_minus, mp.tau_minus, hm.direction);
        } catch (const Error&) {
            ok = false;
        }
        mp.point.nondegenerate = ok && std::fabs(mp.point.lambda_plus) > kEpsLambda &&
                                 std::fabs(mp.point.lambda_minus) > kEpsLambda;
        out[i] = mp;
    });
    std::vector<MatchedPoint> res;
    for (auto& o : out)
        if (o) res.push_back(*o);
    return res;
}

double equal_angle_check(const SurfaceProblem&, const SingularCurvePoint& p0) {
    if (!p0.tangent_estimate || !p0.Nplus || !p0.Nminus)
        throw Error(ErrorCode::MissingSideData, "point lacks a tangent or a one-sided normal");
    Vec2 T = *p0.tangent_estimate;
    auto angle = [&](Vec2 N) {
        Vec2 Np{N.y, -N.x};
        return std::acos(std::clamp(std::fabs(dot(Np, T)), 0.0, 1.0));
    };
    return std::fabs(angle(*p0.Nplus) - angle(*p0.Nminus));
}

double sigma_balance_check(const SurfaceProblem&, const std::vector<MatchedPoint>& pairs) {
    if (pairs.size() < 2) throw Error(ErrorCode::NoMatchedPairs, "need at least two matched pairs");
    const MatchedPoint& base = pairs.front();
    double worst = 0.0;
    for (const auto& p : pairs)
        worst = std::max(worst, std::fabs((p.sigma_plus - base.sigma_plus) - (p.sigma_minus - base.sigma_minus)));
    return worst;
}

namespace {

double shoelace(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
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

HolonomyResult holonomy_area_check(const SurfaceProblem& pr, const ParamCurve& beta, int n_rays) {
    SingularSweep sw = trace_singular_curve(pr, beta, n_rays);
    if (!sw.rays.front().hit || !sw.rays.back().hit)
        throw Error(ErrorCode::OpenRegion, "extreme characteristics do not reach the singular set");
    StopPolicy pol = default_policy(pr);
    auto nodes_of = [&](const HitRecord& r) {
        return trace_characteristic(pr, r.start, r.direction, pol).nodes;
    };
    HolonomyResult res;
    auto& poly = res.polygon;
    const int M = 4 * n_rays;
    for (int k = 0; k <= M; ++k) poly.push_back(beta.at(beta.t0 + (beta.t1 - beta.t0) * k / M));
    auto last = nodes_of(sw.rays.back());
    for (std::size_t k = 1; k < last.size(); ++k) poly.push_back(last[k].pos());
    for (auto it = sw.rays.rbegin() + 1; it != sw.rays.rend() - 1; ++it)
        if (it->hit) poly.push_back(it->end);
    auto first = nodes_of(sw.rays.front());
    for (std::size_t k = first.size(); k-- > 1;) poly.push_back(first[k].pos());
    res.area = std::fabs(shoelace(poly));

    // Simpson rule for the integral of (grad u + F) . beta' dt
    const int S = 2 * M;
    double h = (beta.t1 - beta.t0) / S, acc = 0.0, d = 1e-6 * std::fabs(beta.t1 - beta.t0);
    for (int k = 0; k <= S; ++k) {
        double t = beta.t0 + k * h;
        Vec2 p = beta.at(t);
        Vec2 dp = (beta.at(t + d) - beta.at(t - d)) / (2 * d);
        double f = dot(grad_u(pr, p) + field_F(pr, p), dp);
        acc += f * ((k == 0 || k == S) ? 1 : (k % 2 ? 4 : 2));
    }
    res.integral = std::fabs(acc * h / 3);

    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    auto sample = [&](Vec2 p) {
        double c = std::fabs(curl(pr.F, p, pr.fd_step));
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    };
    for (const Vec2& p : poly) sample(p);
    double x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
    for (const Vec2& p : poly) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) {
            Vec2 p{x0 + (x1 - x0) * (i + 0.5) / 16, y0 + (y1 - y0) * (j + 0.5) / 16};
            if (in_polygon(poly, p)) sample(p);
        }
    res.C1 = cmin;
    res.C2 = cmax;
    double slack = 1e-2 * res.C2 * res.area + 1e-9;
    res.within_bounds = res.C1 * res.area - slack <= res.integral && res.integral <= res.C2 * res.area + slack;
    return res;
}

}  // namespace heis
