// Acceptance run: one line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "heis/codazzi.hpp"
#include "heis/gallery.hpp"
#include "heis/index.hpp"
#include "heis/reconstruct.hpp"
#include "heis/singular.hpp"
#include "heis_cli/cli.hpp"

using namespace heis;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

CharCurve trace_into(const SurfaceProblem& pr, Vec2 start, int direction, double step = 0.0) {
    StopPolicy pol = default_policy(pr);
    pol.step = step;
    return trace_characteristic(pr, start, direction, pol);
}

// starts of rays into the singular set with the expected branch
struct Ray {
    GalleryId id;
    Vec2 start;
    std::string kind;
};

std::vector<Ray> limit_rays() {
    std::vector<Ray> out;
    for (GalleryId id : {GalleryId::RadialPlane, GalleryId::Ex4_1, GalleryId::Ex4_2, GalleryId::Ex4_3, GalleryId::Ex4_4}) {
        GalleryMember m = build(id);
        for (const auto& lim : m.truth.limits) {
            out.push_back({id, lim.start, lim.kind});
            for (double f : {0.8, 1.2}) {
                if (m.chart && lim.kind == "FullCurl") {
                    ParamPoint pp = invert_parametrization(m, lim.start);
                    pp.b *= f;
                    Vec2 q = forward_map(m, pp);
                    if (m.problem.window.contains(q, 0.05)) out.push_back({id, q, lim.kind});
                } else {
                    Vec2 q = lim.start * f;
                    if (m.problem.window.contains(q, 0.05)) out.push_back({id, q, lim.kind});
                }
            }
        }
    }
    return out;
}

Outcome limit_dichotomy() {
    auto rays = limit_rays();
    int good = 0;
    double worst = 0.0;
    std::string bad;
    for (const Ray& r : rays) {
        GalleryMember m = build(r.id);
        CharCurve c = trace_into(m.problem, r.start, -1);
        if (c.stop_reason != StopReason::HitSingular) {
            bad += std::string(" ") + gallery_name(r.id) + ":no-hit";
            continue;
        }
        LimitVerdict v = classify_singular_limit(m.problem, c);
        double target = r.kind == "HalfCurl" ? v.target_half : v.target_full;
        worst = std::max(worst, std::fabs(v.value - target));
        if (limit_kind_name(v.kind) == r.kind && std::fabs(v.value - target) < 0.05) ++good;
        else bad += std::string(" ") + gallery_name(r.id) + ":" + limit_kind_name(v.kind) + fmt("(%.4f)", v.value);
    }
    Outcome o;
    o.pass = rays.size() >= 20 && good == static_cast<int>(rays.size());
    o.detail = std::to_string(good) + "/" + std::to_string(rays.size()) + " rays" + fmt(", max |D'-target| %.2e", worst) + bad;
    return o;
}

// characteristics of p-minimal members that run toward the singular set
std::vector<std::pair<GalleryId, Vec2>> integral_rays() {
    std::vector<std::pair<GalleryId, Vec2>> out;
    for (const Ray& r : limit_rays())
        if (r.kind == "FullCurl" && out.size() < 10) out.push_back({r.id, r.start});
    return out;
}

Outcome first_integral() {
    auto rays = integral_rays();
    double worst_h = 0.0, worst_ratio = 1e300;
    int counted = 0;
    for (auto [id, start] : rays) {
        GalleryMember m = build(id);
        double spread[2];
        for (int k = 0; k < 2; ++k) {
            double h = 1e-3 / (1 << k);
            CharCurve c = trace_into(m.problem, start, -1, h);
            // keep the part before the last tenth, where D' is far from 2
            CharCurve part = c;
            part.nodes.resize(static_cast<std::size_t>(0.9 * c.nodes.size()));
            CodazziTrace t = differentiate_D(part, &m.problem);
            spread[k] = first_integral_spread(t, 0).relative_stdev;
        }
        worst_h = std::max(worst_h, spread[0]);
        worst_ratio = std::min(worst_ratio, spread[0] / spread[1]);
        ++counted;
    }
    Outcome o;
    o.pass = counted == 10 && worst_h < 1e-3 && worst_ratio >= 4;
    o.detail = std::to_string(counted) + " curves" + fmt(", max rel stdev %.2e", worst_h) +
               fmt(", min refinement gain %.2f", worst_ratio);
    return o;
}

Outcome codazzi_order() {
    double min_order = 1e300, max_order = -1e300;
    for (double a : {0.5, 1.0, 2.0}) {
        auto D = [a](double s) { return s + a - a * a / (s + a); };
        double r[2];
        for (int k = 0; k < 2; ++k) {
            double h = 1e-2 / (1 << k);
            CodazziTrace t = differentiate_D(synthetic_curve(D, 0.2, 1.0, h));
            r[k] = 0.0;
            for (double v : t.residual_minimal) r[k] = std::max(r[k], std::fabs(v));
        }
        double p = std::log2(r[0] / r[1]);
        min_order = std::min(min_order, p);
        max_order = std::max(max_order, p);
    }
    Outcome o;
    o.pass = min_order >= 1.8 && max_order <= 2.2;
    o.detail = fmt("orders in [%.3f, ", min_order) + fmt("%.3f]", max_order);
    return o;
}

// boundary travelled along y = g(x) for |x| <= 1/2 with the domain above, closed by a box below
Polyline graph_loop(const std::function<double(double)>& g) {
    Polyline p;
    for (int k = 0; k <= 2000; ++k) {
        double x = -0.5 + k / 2000.0;
        p.push_back({x, g(x)});
    }
    p.push_back({0.5, -1.5});
    p.push_back({-0.5, -1.5});
    p.push_back(p.front());
    return p;
}

Outcome index_table() {
    Window w{-3, 3, -3, 3};
    PlanarVectorField F{ScalarField::constant(0.0, w), ScalarField::constant(1.0, w)};
    SurfaceProblem pr = make_problem(ScalarField::constant(0.0, w), F, ScalarField::constant(0.0, w));
    struct Case {
        Polyline loop;
        Vec2 p;
        double expect;
    };
    std::vector<Case> cases = {
        {circle_polyline({0, 0}, 1.0, 4000, false), {0, 1}, -0.5},
        {graph_loop([](double x) { return 0.8 + x * x; }), {0, 0.8}, 0.5},
        {graph_loop([](double x) { return x * x * x; }), {0, 0}, 0.0},
        {graph_loop([](double x) { return -x * x * x; }), {0, 0}, 0.0},
    };
    Outcome o;
    o.pass = true;
    for (const Case& c : cases) {
        HalfInteger h = boundary_tangency_index(pr, c.loop, c.p);
        if (h.value != c.expect || h.defect >= 1e-2) o.pass = false;
        o.detail += fmt("%+.1f", h.value) + fmt("(defect %.1e) ", h.defect);
    }
    return o;
}

Outcome euler_identity() {
    GalleryMember ex72 = build(GalleryId::Ex7_2Domain);
    IndexReport d = euler_identity_declared(*ex72.truth.index);
    GalleryMember rad = build(GalleryId::RadialPlane);
    SingularReport s = detect_singular(rad.problem, 128, 1);
    IndexReport r = euler_identity_check(rad.problem, {circle_polyline({0, 0}, 0.8, 2000)}, s);
    Outcome o;
    o.pass = d.euler_lhs == -1 && d.identity_residual == 0 && r.component_count == 1 && r.identity_residual == 0;
    o.detail = "Ex7_2 rhs " + fmt("%.1f", d.euler_rhs) + fmt(" residual %.1f", d.identity_residual) +
               "; disk components " + std::to_string(r.component_count) + fmt(" residual %.1f", r.identity_residual);
    return o;
}

Outcome measure_decay() {
    DecayFit rad = measure_decay_check(detect_singular(build(GalleryId::RadialPlane).problem, 64, 3));
    DecayFit e44 = measure_decay_check(detect_singular(build(GalleryId::Ex4_4).problem, 64, 3));
    Outcome o;
    o.pass = !rad.degenerate && !e44.degenerate && std::fabs(rad.exponent + 2) <= 0.3 &&
             std::fabs(e44.exponent + 1) <= 0.3;
    o.detail = fmt("RadialPlane %.3f", rad.exponent) + fmt(", Ex4_4 %.3f", e44.exponent);
    return o;
}

struct SeedPair {
    GalleryId id;
    ParamCurve plus, minus;
    int n;
};

std::vector<SeedPair> seed_pairs() {
    // transverse segments on either side of a singular curve
    Vec2 d = normalized(Vec2{1, 1}), nrm{-d.y, d.x};
    return {
        {GalleryId::Ex4_1, segment_curve({-1.6, 0.6}, {-0.4, 0.6}), segment_curve({-1.6, -0.6}, {-0.4, -0.6}), 7},
        {GalleryId::Ex4_2, segment_curve(d * 0.6 + nrm * 0.3, d * 1.8 + nrm * 0.3),
         segment_curve(d * 0.6 - nrm * 0.3, d * 1.8 - nrm * 0.3), 7},
        {GalleryId::Ex4_4, segment_curve({0.3, 0.2}, {0.3, 0.8}), segment_curve({-0.3, 0.2}, {-0.3, 0.8}), 10},
    };
}

Outcome equal_angle() {
    int count = 0;
    double worst = 0.0;
    for (const SeedPair& sp : seed_pairs()) {
        GalleryMember m = build(sp.id);
        int n = sp.id == GalleryId::Ex4_4 ? 6 : sp.n;
        for (const MatchedPoint& mp : sample_singular_points(m.problem, sp.plus, sp.minus, n)) {
            if (!mp.point.nondegenerate) continue;
            worst = std::max(worst, equal_angle_check(m.problem, mp.point));
            ++count;
        }
    }
    Outcome o;
    o.pass = count >= 20 && worst < 1e-2;
    o.detail = std::to_string(count) + " points" + fmt(", max angle gap %.2e rad", worst);
    return o;
}

Outcome sigma_balance() {
    SeedPair sp = seed_pairs()[2];
    GalleryMember m = build(sp.id);
    auto pairs = sample_singular_points(m.problem, sp.plus, sp.minus, sp.n);
    double defect = pairs.size() >= 2 ? sigma_balance_check(m.problem, pairs) : 1e300;
    double tol = 1e-3 * m.problem.window.diagonal();
    Outcome o;
    o.pass = pairs.size() >= 10 && defect < tol;
    o.detail = std::to_string(pairs.size()) + " pairs" + fmt(", defect %.2e", defect) + fmt(" (tolerance %.2e)", tol);
    return o;
}

Outcome no_double_singular() {
    int traced = 0, doubles = 0;
    for (GalleryId id : all_gallery_ids()) {
        GalleryMember m = build(id);
        if (!m.has_u) continue;
        const Window& w = m.problem.window;
        for (int j = 1; j < 8; ++j)
            for (int i = 1; i < 8; ++i) {
                Vec2 p{w.x0 + w.width() * i / 8, w.y0 + w.height() * j / 8};
                if (eval_frame(m.problem, p).D < 1e-3 * w.diagonal()) continue;
                CharCurve a = trace_into(m.problem, p, 1), b = trace_into(m.problem, p, -1);
                ++traced;
                if (a.stop_reason == StopReason::HitSingular && b.stop_reason == StopReason::HitSingular) ++doubles;
            }
    }
    Outcome o;
    o.pass = traced > 0 && doubles == 0;
    o.detail = std::to_string(traced) + " characteristics, " + std::to_string(doubles) + " with two singular ends";
    return o;
}

int cli(std::vector<std::string> args) {
    std::vector<std::string> full = {"heis"};
    full.insert(full.end(), args.begin(), args.end());
    return heis_cli::run(full);
}

Outcome reconstruction() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "heis_acceptance_reconstruct";
    fs::create_directories(dir);
    struct P {
        std::string name, D;
        Window dom;
        bool valid;
    };
    std::vector<P> patches = {
        {"linear", "xi+1", {0, 1, 0, 1}, true},
        {"closed_form", "xi+1-1/(xi+1)", {0.5, 2, 0, 1.5}, true},
        {"perturbed", "xi+1+0.1*sin(5*xi)", {0, 1, 0, 1}, false},
    };
    Outcome o;
    o.pass = true;
    for (const P& p : patches) {
        IntrinsicPatch ip = patch_from_expressions("1", "0", p.D, "0", p.dom, 101);
        if (p.valid) {
            ReconstructionPatch rp = build_coordinates(ip);
            EmittedGraph eg = emit_graph(rp);
            bool ok = rp.max_K < 1e-3 && eg.max_pde_residual < 1e-3 && eg.max_divDV_defect < 1e-3;
            o.pass = o.pass && ok;
            o.detail += p.name + fmt(": K %.1e", rp.max_K) + fmt(" divN-H %.1e", eg.max_pde_residual) +
                        fmt(" div(DV)-2 %.1e; ", eg.max_divDV_defect);
        } else {
            fs::path cfg = dir / (p.name + ".json");
            std::ofstream(cfg) << "{\"command\":\"reconstruct\",\"patch\":{\"V1\":\"1\",\"V2\":\"0\",\"D\":\"" << p.D
                               << "\",\"H\":\"0\",\"domain\":[0,1,0,1],\"n\":101}}";
            int code = cli({"reconstruct", "--config", cfg.string(), "--out", (dir / p.name).string()});
            o.pass = o.pass && code == 2;
            o.detail += p.name + ": exit " + std::to_string(code);
        }
    }
    return o;
}

Outcome gallery_fidelity() {
    double worst_jump = 0.0;
    for (GalleryId id : {GalleryId::Ex4_1, GalleryId::Ex4_2, GalleryId::Ex4_3, GalleryId::Ex4_4})
        for (const SeamSample& s : seam_samples(build(id), 100))
            worst_jump = std::max(worst_jump, norm(s.grad_a - s.grad_b));

    GalleryMember m = build(GalleryId::Ex4_4);
    auto uxx = [&](double t, int side) {
        // one-sided quadratic extrapolation of u_x to the point of L with parameter t;
        // the offset stays well inside the fan where beta flattens out
        double y = profiles::ex44_beta(t), g[4];
        double h = std::min(1e-3, 0.01 * std::min(y, 1 - y));
        if (h <= 0) h = 1e-3;
        for (int k = 1; k <= 3; ++k) g[k] = m.chart->eval({side * k * h, y}).dx;
        return side * (-5 * g[1] + 8 * g[2] - 3 * g[3]) / (2 * h);
    };
    double worst_rel = 0.0, worst_abs = 0.0;
    for (int k = 1; k < 20; ++k) {
        double t = k / 20.0;
        double gap = std::fabs(uxx(t, 1) - uxx(t, -1));
        double expect = 4 * std::fabs(std::tan(profiles::ex44_alpha(t)));
        if (k == 10) worst_abs = std::max(worst_abs, gap);
        else worst_rel = std::max(worst_rel, std::fabs(gap - expect) / expect);
    }
    for (double t : {0.0, 1.0}) worst_abs = std::max(worst_abs, std::fabs(uxx(t, 1) - uxx(t, -1)));
    Outcome o;
    o.pass = worst_jump < 1e-6 && worst_rel < 0.05 && worst_abs < 1e-3;
    o.detail = fmt("max seam jump %.2e", worst_jump) + fmt(", gap rel error %.2e", worst_rel) +
               fmt(", gap at 0/half/1 %.2e", worst_abs);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*fn)();
        double budget;  // seconds, 0 for none
    };
    const Criterion all[] = {
        {"limit dichotomy", limit_dichotomy, 30},
        {"first integral", first_integral, 0},
        {"codazzi residual order", codazzi_order, 0},
        {"boundary index table", index_table, 0},
        {"euler identity", euler_identity, 0},
        {"singular measure decay", measure_decay, 60},
        {"equal angle", equal_angle, 0},
        {"sigma balance", sigma_balance, 0},
        {"no double-singular characteristics", no_double_singular, 0},
        {"reconstruction round trip", reconstruction, 60},
        {"gallery C1/C2 fidelity", gallery_fidelity, 0},
    };
    int failed = 0, k = 0;
    for (const Criterion& c : all) {
        ++k;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget > 0 && secs > c.budget) {
            o.pass = false;
            o.detail += " (over time budget)";
        }
        std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
