#include "heis/codazzi.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

const char* limit_kind_name(LimitKind k) {
    switch (k) {
        case LimitKind::HalfCurl: return "HalfCurl";
        case LimitKind::FullCurl: return "FullCurl";
        case LimitKind::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

void uniform_derivatives(const std::vector<double>& D, double h, std::vector<double>& d1, std::vector<double>& d2) {
    const std::size_t n = D.size();
    if (n < 5) throw Error(ErrorCode::TooFewNodes, "need at least 5 nodes, got " + std::to_string(n));
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) d1[i] = (D[i + 1] - D[i - 1]) / (2 * h);
    d1[0] = (-3 * D[0] + 4 * D[1] - D[2]) / (2 * h);
    d1[n - 1] = (3 * D[n - 1] - 4 * D[n - 2] + D[n - 3]) / (2 * h);

    for (std::size_t i = 1; i + 1 < n; ++i) d2[i] = (D[i - 1] - 2 * D[i] + D[i + 1]) / (h * h);
    d2[0] = (2 * D[0] - 5 * D[1] + 4 * D[2] - D[3]) / (h * h);
    d2[n - 1] = (2 * D[n - 1] - 5 * D[n - 2] + 4 * D[n - 3] - D[n - 4]) / (h * h);
}

namespace {

bool is_uniform(const std::vector<CharState>& nodes, double& h) {
    h = nodes[1].sigma - nodes[0].sigma;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (std::fabs(nodes[i].sigma - nodes[i - 1].sigma - h) > 1e-9 * h) return false;
    return h > 0;
}

// local cubic Lagrange interpolation of node data at arc length s
CharState lagrange_at(const std::vector<CharState>& nodes, double s) {
    const std::size_t n = nodes.size();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), s,
                               [](double v, const CharState& c) { return v < c.sigma; });
    std::ptrdiff_t k = (it - nodes.begin()) - 2;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 4);
    CharState out;
    out.sigma = s;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (s - nodes[k + b].sigma) / (nodes[k + a].sigma - nodes[k + b].sigma);
        const CharState& c = nodes[k + a];
        out.x += w * c.x;
        out.y += w * c.y;
        out.theta += w * c.theta;
        out.u += w * c.u;
        out.D += w * c.D;
    }
    return out;
}

}  // namespace

CodazziTrace differentiate_D(const CharCurve& curve, const SurfaceProblem* pr) {
    if (curve.nodes.size() < 5)
        throw Error(ErrorCode::TooFewNodes, "need at least 5 nodes, got " + std::to_string(curve.nodes.size()));
    CodazziTrace t;
    t.direction = curve.direction;
    double h = 0.0;
    if (is_uniform(curve.nodes, h)) {
        t.nodes = curve.nodes;
    } else {
        double L = curve.nodes.back().sigma - curve.nodes.front().sigma;
        double target = curve.step > 0 ? curve.step : L / (curve.nodes.size() - 1);
        std::size_t M = std::max<std::size_t>(4, static_cast<std::size_t>(std::llround(L / target)));
        h = L / M;
        t.nodes.reserve(M + 1);
        for (std::size_t i = 0; i <= M; ++i) t.nodes.push_back(lagrange_at(curve.nodes, curve.nodes.front().sigma + i * h));
        t.nodes.back() = curve.nodes.back();
    }
    t.spacing = h;
    const std::size_t n = t.nodes.size();
    std::vector<double> D(n);
    for (std::size_t i = 0; i < n; ++i) D[i] = t.nodes[i].D;
    std::vector<double> d1, d2;
    uniform_derivatives(D, h, d1, d2);
    t.Dprime.resize(n);
    t.Dsecond = d2;
    for (std::size_t i = 0; i < n; ++i) t.Dprime[i] = curve.direction * d1[i];

    bool minimal = pr == nullptr;
    if (pr) {
        minimal = true;
        t.residual_general.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 p = t.nodes[i].pos();
            double th = t.nodes[i].theta;
            Vec2 N{std::cos(th), std::sin(th)}, Np{std::sin(th), -std::cos(th)};
            double c = curl(pr->F, p, pr->fd_step);
            double H = H_at(*pr, p);
            if (std::fabs(H) > 1e-12 || std::fabs(c - 2.0) > 1e-9) minimal = false;
            double Dp = t.Dprime[i], Di = D[i];
            double rhs = 2 * (Dp - c / 2) * (Dp - c) + dir_deriv_curl(*pr, p, Np) * Di +
                         (H * H + dir_deriv_H(*pr, p, N)) * Di * Di;
            t.residual_general[i] = Di * t.Dsecond[i] - rhs;
        }
    }
    if (minimal) {
        t.residual_minimal.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            t.residual_minimal[i] = D[i] * t.Dsecond[i] - 2 * (t.Dprime[i] - 1) * (t.Dprime[i] - 2);
    }
    t.first_integral_c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double Dp = t.Dprime[i];
        double den = std::fabs(Dp - 1) * D[i] * D[i];
        t.first_integral_c[i] = (std::fabs(Dp - 1) < 1e-9 || den <= 0) ? std::numeric_limits<double>::infinity()
                                                                       : (Dp - 2) * (Dp - 2) / den;
    }
    return t;
}

Spread first_integral_spread(const CodazziTrace& t, int trim) {
    Spread s;
    std::vector<double> v;
    const int n = static_cast<int>(t.first_integral_c.size());
    for (int i = trim; i < n - trim; ++i)
        if (std::isfinite(t.first_integral_c[i])) v.push_back(t.first_integral_c[i]);
    s.samples = static_cast<int>(v.size());
    if (v.empty()) return s;
    double sum = 0.0;
    for (double c : v) sum += c;
    s.mean = sum / s.samples;
    double var = 0.0;
    for (double c : v) var += (c - s.mean) * (c - s.mean);
    var /= s.samples;
    s.relative_stdev = s.mean != 0 ? std::sqrt(var) / std::fabs(s.mean) : 0.0;
    return s;
}

namespace {

// least-squares line through (x_k, y_k); returns intercept and rms residual
void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& a, double& b, double& rms) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    double det = n * sxx - sx * sx;
    b = det != 0 ? (n * sxy - sx * sy) / det : 0.0;
    a = (sy - b * sx) / n;
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double r = y[k] - (a + b * x[k]);
        acc += r * r;
    }
    rms = std::sqrt(acc / n);
}

LimitVerdict decide(double value, double conf, double half, double full) {
    LimitVerdict v;
    v.value = value;
    v.confidence = conf;
    v.target_half = half;
    v.target_full = full;
    double dh = std::fabs(value - half), df = std::fabs(value - full);
    if (dh == df || !std::isfinite(value)) v.kind = LimitKind::Inconclusive;
    else v.kind = dh < df ? LimitKind::HalfCurl : LimitKind::FullCurl;
    return v;
}

// index of the singular end: +1 for the last node, -1 for the first, 0 for none
int singular_end(const CharCurve& c, double eps) {
    if (c.nodes.empty()) return 0;
    if (c.stop_reason == StopReason::HitSingular || c.nodes.back().D <= eps) return 1;
    if (c.nodes.front().D <= eps) return -1;
    return 0;
}

}  // namespace

LimitVerdict classify_singular_limit(const SurfaceProblem& pr, const CharCurve& curve) {
    int end = singular_end(curve, pr.eps_D);
    if (end != 1 || curve.nodes.size() < 2)
        throw Error(ErrorCode::NotSingularApproach, "curve does not end at a singular point");
    Vec2 p = curve.nodes.back().pos();
    double c = curl(pr.F, p, pr.fd_step);
    if (std::fabs(c) < 1e-8) throw Error(ErrorCode::ZeroCurl, "curl F vanishes at the singular endpoint");
    double L = curve.length() - curve.nodes.front().sigma;
    std::vector<double> d, Dp;
    for (int k = 0; k <= 5; ++k) {
        double dk = 0.1 * L * std::pow(2.0, -k);
        Vec2 q = curve.position_at(curve.length() - dk);
        FrameSample f = eval_frame(pr, q);
        if (f.singular) continue;
        d.push_back(dk);
        Dp.push_back(dir_deriv_D(pr, q, f.Nperp, std::min(pr.fd_step, 0.01 * dk)));
    }
    if (d.size() < 3) throw Error(ErrorCode::NotSingularApproach, "too few nonsingular samples near the endpoint");
    double a, b, rms;
    fit_line(d, Dp, a, b, rms);
    LimitVerdict v = decide(a, rms, c / 2, c);
    v.endpoint = p;
    if (rms > 0.25 * std::fabs(c) / 2) v.kind = LimitKind::Inconclusive;
    return v;
}

bool theoremB_direction_check(const SurfaceProblem& pr, const CharCurve& curve) {
    int end = singular_end(curve, pr.eps_D);
    if (end == 0 || curve.nodes.size() < 3)
        throw Error(ErrorCode::NotSingularApproach, "curve has no singular endpoint");
    const std::size_t n = curve.nodes.size();
    Vec2 p = end == 1 ? curve.nodes.back().pos() : curve.nodes.front().pos();
    double c = curl(pr.F, p, pr.fd_step);
    if (std::fabs(c) < 1e-8) throw Error(ErrorCode::ZeroCurl, "curl F vanishes at the singular endpoint");
    // a node well away from the endpoint, but still close
    std::size_t off = std::max<std::size_t>(1, std::min<std::size_t>(n / 10, n - 2));
    Vec2 q = end == 1 ? curve.nodes[n - 1 - off].pos() : curve.nodes[off].pos();
    FrameSample f = eval_frame(pr, q);
    double s = dot(f.Nperp, q - p);
    return c > 0 ? s > 0 : s < 0;
}

GeneralOde make_general_ode(std::function<double(double)> E1, std::function<double(double)> l,
                            std::function<double(double)> m, std::function<double(double, double)> E2) {
    if (!(E1(0.0) > 0)) throw Error(ErrorCode::ConfigInvalid, "E1(0) must be positive");
    if (!(l(0.0) < m(0.0))) throw Error(ErrorCode::ConfigInvalid, "l(0) must be below m(0)");
    if (std::fabs(E2(0.0, 0.0)) > 1e-14) throw Error(ErrorCode::ConfigInvalid, "E2(0, 0) must vanish");
    return {std::move(E1), std::move(l), std::move(m), std::move(E2)};
}

OdeTrajectory integrate_general_ode(const GeneralOde& ode, double rho_end, double v_end, double vprime_end,
                                    int steps) {
    if (!(v_end > 0)) throw Error(ErrorCode::NonpositiveV, "terminal v must be positive");
    if (!(rho_end > 0)) throw Error(ErrorCode::ConfigInvalid, "terminal rho must be positive");
    if (steps < 1) throw Error(ErrorCode::ConfigInvalid, "steps must be positive");
    OdeTrajectory tr;
    tr.rho_min = 1e-6 * rho_end;
    // s = log(rho); dv/ds = rho v', dv'/ds = rho v''
    auto f = [&](double s, double v, double vp, double& dv, double& dvp) {
        double rho = std::exp(s);
        double vpp = (ode.E1(rho) * (vp - ode.l(rho)) * (vp - ode.m(rho)) + ode.E2(rho, v)) / v;
        dv = rho * vp;
        dvp = rho * vpp;
    };
    double s = std::log(rho_end), s_min = std::log(tr.rho_min);
    double ds = (s_min - s) / steps;
    double v = v_end, vp = vprime_end;
    tr.samples.push_back({rho_end, v, vp});
    for (int k = 0; k < steps; ++k) {
        double k1v, k1p, k2v, k2p, k3v, k3p, k4v, k4p;
        f(s, v, vp, k1v, k1p);
        double v2 = v + 0.5 * ds * k1v;
        if (v2 <= 0) { tr.hit_zero = true; break; }
        f(s + 0.5 * ds, v2, vp + 0.5 * ds * k1p, k2v, k2p);
        double v3 = v + 0.5 * ds * k2v;
        if (v3 <= 0) { tr.hit_zero = true; break; }
        f(s + 0.5 * ds, v3, vp + 0.5 * ds * k2p, k3v, k3p);
        double v4 = v + ds * k3v;
        if (v4 <= 0) { tr.hit_zero = true; break; }
        f(s + ds, v4, vp + ds * k3p, k4v, k4p);
        double vn = v + ds / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        double vpn = vp + ds / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        s = (k + 1 == steps) ? s_min : s + ds;
        if (!std::isfinite(vn) || !std::isfinite(vpn)) {
            tr.diverged = true;
            break;
        }
        if (!(vn > 0)) {
            tr.hit_zero = true;
            break;
        }
        v = vn;
        vp = vpn;
        tr.samples.push_back({std::exp(s), v, vp});
    }
    return tr;
}

GeneralVerdict classify_general_limit(const OdeTrajectory& traj, const GeneralOde& ode) {
    if (traj.samples.size() < 8) throw Error(ErrorCode::TooFewNodes, "trajectory too short to classify");
    GeneralVerdict g;
    const OdeSample& last = traj.samples.back();
    g.v_limit = last.v;
    g.v_to_zero = !traj.diverged && (traj.hit_zero || last.v <= 10 * std::fabs(last.vprime) * last.rho);
    double l0 = ode.l(0.0), m0 = ode.m(0.0);

    // v' at the levels v_last * 2^k, interpolated linearly, then extrapolated to v = 0
    std::vector<double> x, y;
    for (int k = 0; k <= 5; ++k) {
        double lv = last.v * std::pow(2.0, k);
        for (std::size_t i = traj.samples.size() - 1; i > 0; --i) {
            const OdeSample& a = traj.samples[i];
            const OdeSample& b = traj.samples[i - 1];
            if (a.v <= lv && lv <= b.v && b.v > a.v) {
                double w = (lv - a.v) / (b.v - a.v);
                x.push_back(lv);
                y.push_back(a.vprime + w * (b.vprime - a.vprime));
                break;
            }
        }
    }
    double a = last.vprime, b = 0.0, rms = 0.0;
    if (x.size() >= 3) {
        double v_max = x.back();
        for (double& xi : x) xi /= v_max;
        fit_line(x, y, a, b, rms);
    }
    g.verdict = decide(a, rms, l0, m0);
    if (!g.v_to_zero) g.verdict.kind = LimitKind::Inconclusive;
    return g;
}

CharCurve synthetic_curve(const std::function<double(double)>& D, double s0, double length, double h) {
    CharCurve c;
    c.step = h;
    c.direction = 1;
    c.stop_reason = StopReason::MaxLength;
    std::size_t M = static_cast<std::size_t>(std::llround(length / h));
    for (std::size_t i = 0; i <= M; ++i) {
        CharState s;
        s.sigma = i * h;
        s.x = s0 + i * h;
        s.theta = kPi / 2;
        s.D = D(s0 + i * h);
        c.nodes.push_back(s);
    }
    return c;
}

}  // namespace heis
