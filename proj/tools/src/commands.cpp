#include "commands.hpp"

#include <cstdio>
#include <iostream>
#include <random>

#include "heis/codazzi.hpp"
#include "heis/singular.hpp"

namespace heis_cli {

using namespace heis;

namespace {

json error_json(const Error& e) { return {{"error", error_name(e.code())}, {"message", e.what()}}; }

json problem_tolerances(const SurfaceProblem& pr, double step) {
    return {{"fd_step", pr.fd_step}, {"eps_D", pr.eps_D}, {"step", step}};
}

std::vector<Vec2> positions(const CharCurve& c) {
    std::vector<Vec2> p;
    p.reserve(c.nodes.size());
    for (const auto& n : c.nodes) p.push_back(n.pos());
    return p;
}

json curve_summary(const CharCurve& c, Vec2 start) {
    return {{"start", vec_json(start)},
            {"direction", c.direction},
            {"seed", c.seed},
            {"stop_reason", stop_reason_name(c.stop_reason)},
            {"length", c.length()},
            {"nodes", c.nodes.size()},
            {"end", c.nodes.empty() ? json(nullptr) : vec_json(c.nodes.back().pos())},
            {"extrapolated_end", c.extrapolated_end},
            {"theta_drift_max", c.theta_drift_max}};
}

json verdict_json(const LimitVerdict& v) {
    return {{"kind", limit_kind_name(v.kind)},    {"value", num_json(v.value)},
            {"target_half", v.target_half},       {"target_full", v.target_full},
            {"confidence", num_json(v.confidence)}, {"endpoint", vec_json(v.endpoint)}};
}

std::vector<Vec2> grid_starts(const Window& w, int k) {
    std::vector<Vec2> s;
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) s.push_back({w.x0 + w.width() * (i + 0.5) / k, w.y0 + w.height() * (j + 0.5) / k});
    return s;
}

std::vector<Vec2> starts_from(const json& opts, const LoadedProblem& lp, bool truth_default) {
    std::vector<Vec2> s;
    if (opts.contains("starts")) {
        for (const json& p : opts["starts"]) s.push_back(to_vec(p));
        return s;
    }
    if (truth_default && lp.member)
        for (const auto& l : lp.member->truth.limits) s.push_back(l.start);
    if (s.empty() && truth_default)
        throw Error(ErrorCode::ConfigInvalid, "no 'starts' given and the problem carries no reference rays");
    if (s.empty()) s = grid_starts(lp.problem.window, 5);
    return s;
}

double step_of(const RunConfig& cfg) {
    if (cfg.step) return *cfg.step;
    return cfg.options().value("step", 0.0);
}

void svg_mask(Svg& svg, const SingularReport& rep) {
    const double cw = rep.window.width() / rep.resolution, ch = rep.window.height() / rep.resolution;
    for (int j = 0; j < rep.resolution; ++j)
        for (int i = 0; i < rep.resolution; ++i)
            if (rep.flagged(i, j))
                svg.rect({rep.window.x0 + i * cw, rep.window.x0 + (i + 1) * cw, rep.window.y0 + j * ch,
                          rep.window.y0 + (j + 1) * ch},
                         "#d62728");
}

json report_json(const SingularReport& rep) {
    json comps = json::array();
    for (const auto& c : rep.components)
        comps.push_back({{"label", c.label}, {"cells", c.cells}, {"bbox", window_json(c.bbox)}});
    json series = json::array();
    for (auto [n, a] : rep.area_series) series.push_back(json::array({n, a}));
    json j = {{"resolution", rep.resolution},
              {"window", window_json(rep.window)},
              {"component_count", rep.component_count},
              {"components", comps},
              {"area_series", series},
              {"max_abs_curl", rep.max_abs_curl},
              {"hypothesis_violation", rep.hypothesis_violation}};
    if (rep.area_series.size() >= 2) {
        try {
            DecayFit d = measure_decay_check(rep);
            j["decay"] = {{"exponent", num_json(d.exponent)}, {"degenerate", d.degenerate}};
        } catch (const Error& e) {
            j["decay"] = error_json(e);
        }
    }
    return j;
}

CommandResult cmd_analyze(const RunConfig& cfg, Artifacts& out) {
    LoadedProblem lp = load_problem(cfg);
    const SurfaceProblem& pr = lp.problem;
    const json& o = cfg.options();
    int res = cfg.resolution.value_or(o.value("resolution", 128));
    int k = o.value("starts_per_side", 6);
    if (k < 1) throw Error(ErrorCode::ConfigInvalid, "starts_per_side must be positive");
    const Window& w = pr.window;

    SingularReport rep = detect_singular(pr, res, o.value("levels", 1));

    const int G = 41;
    double margin = frame_margin(pr) + 2 * pr.fd_step;
    Csv frame({"x", "y", "D", "theta", "curlF", "pde_residual"});
    double max_res = 0.0, max_H = 0.0;
    for (int j = 0; j < G; ++j)
        for (int i = 0; i < G; ++i) {
            Vec2 p{w.x0 + margin + (w.width() - 2 * margin) * i / (G - 1),
                   w.y0 + margin + (w.height() - 2 * margin) * j / (G - 1)};
            FrameSample f = eval_frame(pr, p);
            max_H = std::max(max_H, std::fabs(H_at(pr, p)));
            double r = std::nan("");
            if (f.D > 1e-3 * w.diagonal()) {
                r = pde_residual(pr, p);
                max_res = std::max(max_res, std::fabs(r));
            }
            frame.row({p.x, p.y, f.D, f.singular ? std::nan("") : f.theta, f.curlF, r});
        }
    out.write("frame.csv", frame.text());

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::vector<Vec2> starts = grid_starts(w, k);
    for (Vec2& s : starts) {
        s.x += jitter(rng) * w.width() / k;
        s.y += jitter(rng) * w.height() / k;
    }
    StopPolicy pol = default_policy(pr);
    pol.step = step_of(cfg);
    json traces = json::array();
    Svg svg(w);
    svg_mask(svg, rep);
    int doubles = 0;
    for (Vec2 s : starts) {
        if (eval_frame(pr, s).D <= 1e3 * pr.eps_D) continue;
        int singular_ends = 0;
        for (int dir : {-1, 1}) {
            CharCurve c = trace_characteristic(pr, s, dir, pol);
            json t = curve_summary(c, s);
            if (c.stop_reason == StopReason::HitSingular) {
                ++singular_ends;
                try {
                    t["limit"] = verdict_json(classify_singular_limit(pr, c));
                } catch (const Error& e) {
                    t["limit"] = error_json(e);
                }
            }
            traces.push_back(t);
            svg.polyline(positions(c), "#1f77b4");
        }
        if (singular_ends == 2) ++doubles;
    }
    json summary = {{"problem", lp.description},
                    {"window", window_json(w)},
                    {"max_pde_residual", max_res},
                    {"max_abs_H", max_H},
                    // against 1/2 for singular-curve existence in balls of radius d
                    {"max_abs_H_times_radius", max_H * 0.5 * w.diagonal()},
                    {"singular", report_json(rep)},
                    {"traces", traces},
                    {"double_singular_characteristics", doubles}};
    out.write_json("summary.json", summary);
    if (cfg.svg) out.write("analyze.svg", svg.finish());
    return {rep.hypothesis_violation ? 2 : 0, problem_tolerances(pr, pol.step)};
}

CommandResult cmd_trace(const RunConfig& cfg, Artifacts& out) {
    LoadedProblem lp = load_problem(cfg);
    const SurfaceProblem& pr = lp.problem;
    const json& o = cfg.options();
    StopPolicy pol = default_policy(pr, o.value("max_length", 0.0));
    pol.step = step_of(cfg);
    int direction = o.value("direction", 0);
    if (direction < -1 || direction > 1) throw Error(ErrorCode::ConfigInvalid, "direction must be -1, 0 or 1");
    bool seed = o.value("seed_curve", false);
    std::vector<Vec2> starts = starts_from(o, lp, false);

    Csv csv({"curve", "direction", "sigma", "x", "y", "theta", "u", "D"});
    json summary = json::array();
    Svg svg(pr.window);
    int curve = 0;
    for (Vec2 s : starts) {
        std::vector<int> dirs = direction == 0 ? std::vector<int>{-1, 1} : std::vector<int>{direction};
        for (int d : dirs) {
            json entry;
            try {
                CharCurve c = seed ? trace_seed(pr, s, d, pol) : trace_characteristic(pr, s, d, pol);
                for (const auto& n : c.nodes)
                    csv.row({double(curve), double(d), n.sigma, n.x, n.y, n.theta, n.u, n.D});
                entry = curve_summary(c, s);
                if (!seed) entry["contact_defect"] = num_json(contact_defect(c, pr));
                svg.polyline(positions(c), seed ? "#2ca02c" : "#1f77b4");
            } catch (const Error& e) {
                entry = error_json(e);
                entry["start"] = vec_json(s);
                entry["direction"] = d;
                if (e.code() != ErrorCode::SingularStart && e.code() != ErrorCode::OutOfWindow) throw;
            }
            entry["curve"] = curve++;
            summary.push_back(entry);
        }
    }
    out.write("traces.csv", csv.text());
    out.write_json("traces.json", summary);
    if (cfg.svg) out.write("traces.svg", svg.finish());
    return {0, problem_tolerances(pr, pol.step)};
}

CommandResult cmd_classify(const RunConfig& cfg, Artifacts& out) {
    LoadedProblem lp = load_problem(cfg);
    const SurfaceProblem& pr = lp.problem;
    const json& o = cfg.options();
    StopPolicy pol = default_policy(pr);
    pol.step = step_of(cfg);
    int direction = o.value("direction", -1);
    if (direction != -1 && direction != 1) throw Error(ErrorCode::ConfigInvalid, "direction must be -1 or 1");
    std::vector<Vec2> starts = starts_from(o, lp, true);
    std::vector<int> dirs(starts.size(), direction);
    if (!o.contains("starts") && lp.member)
        for (std::size_t i = 0; i < starts.size(); ++i) dirs[i] = lp.member->truth.limits[i].direction;

    json verdicts = json::array();
    Csv csv({"curve", "sigma", "x", "y", "D", "Dprime"});
    Svg svg(pr.window);
    bool violation = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        json v = {{"start", vec_json(starts[i])}, {"direction", dirs[i]}};
        CharCurve c = trace_characteristic(pr, starts[i], dirs[i], pol);
        v["stop_reason"] = stop_reason_name(c.stop_reason);
        v["length"] = c.length();
        try {
            LimitVerdict lv = classify_singular_limit(pr, c);
            v["verdict"] = verdict_json(lv);
            v["direction_check"] = theoremB_direction_check(pr, c);
            if (c.nodes.size() >= 5) {
                CodazziTrace t = differentiate_D(c, &pr);
                for (std::size_t k = 0; k < t.nodes.size(); ++k)
                    csv.row({double(i), t.nodes[k].sigma, t.nodes[k].x, t.nodes[k].y, t.nodes[k].D, t.Dprime[k]});
            }
        } catch (const Error& e) {
            v["verdict"] = error_json(e);
            if (e.is_hypothesis_violation()) violation = true;
        }
        verdicts.push_back(v);
        svg.polyline(positions(c), "#1f77b4");
    }
    out.write_json("verdicts.json", verdicts);
    out.write("derivatives.csv", csv.text());
    if (cfg.svg) out.write("classify.svg", svg.finish());
    return {violation ? 2 : 0, problem_tolerances(pr, pol.step)};
}

ParamCurve segment_of(const json& pts) { return segment_curve(to_vec(pts[0]), to_vec(pts[1])); }

CommandResult cmd_singular(const RunConfig& cfg, Artifacts& out) {
    LoadedProblem lp = load_problem(cfg);
    const SurfaceProblem& pr = lp.problem;
    const json& o = cfg.options();
    int res = cfg.resolution.value_or(o.value("resolution", 128));
    SingularReport rep = detect_singular(pr, res, o.value("levels", 3));
    out.write_json("components.json", report_json(rep));
    Csv mask({"i", "j", "x", "y", "label"});
    for (int j = 0; j < rep.resolution; ++j)
        for (int i = 0; i < rep.resolution; ++i)
            if (rep.flagged(i, j)) {
                Vec2 c = rep.cell_center(i, j);
                mask.row({double(i), double(j), c.x, c.y, double(rep.labels[static_cast<std::size_t>(j) * res + i])});
            }
    out.write("mask.csv", mask.text());
    Svg svg(pr.window);
    svg_mask(svg, rep);

    if (o.contains("seeds")) {
        const json& s = o["seeds"];
        ParamCurve plus = segment_of(s["plus"]), minus = segment_of(s["minus"]);
        auto pairs = sample_singular_points(pr, plus, minus, s.value("n", 10));
        Csv pts({"x", "y", "tangent_x", "tangent_y", "lambda_plus", "lambda_minus", "nondegenerate", "angle_gap",
                 "sigma_plus", "sigma_minus", "match_error"});
        double worst_angle = 0.0;
        int nondeg = 0;
        for (const auto& mp : pairs) {
            const auto& p = mp.point;
            Vec2 T = p.tangent_estimate.value_or(Vec2{std::nan(""), std::nan("")});
            double gap = std::nan("");
            if (p.nondegenerate) {
                gap = equal_angle_check(pr, p);
                worst_angle = std::max(worst_angle, gap);
                ++nondeg;
            }
            pts.row({p.location.x, p.location.y, T.x, T.y, p.lambda_plus, p.lambda_minus,
                     p.nondegenerate ? 1.0 : 0.0, gap, mp.sigma_plus, mp.sigma_minus, mp.match_error});
            svg.dot(p.location, "#000000");
        }
        out.write("singular_points.csv", pts.text());
        json checks = {{"matched_pairs", pairs.size()},
                       {"nondegenerate", nondeg},
                       {"max_angle_gap", worst_angle},
                       {"sigma_balance", pairs.size() >= 2 ? json(sigma_balance_check(pr, pairs)) : json(nullptr)}};
        out.write_json("checks.json", checks);
    }
    if (cfg.svg) out.write("singular.svg", svg.finish());
    return {rep.hypothesis_violation ? 2 : 0, problem_tolerances(pr, 0.0)};
}

json half_json(const HalfInteger& h) { return {{"value", h.value}, {"raw", h.raw}, {"defect", h.defect}}; }

CommandResult cmd_index(const RunConfig& cfg, Artifacts& out) {
    LoadedProblem lp = load_problem(cfg);
    const SurfaceProblem& pr = lp.problem;
    const json& o = cfg.options();
    if (!o.contains("loops") && !o.contains("boundary"))
        throw Error(ErrorCode::ConfigInvalid, "index needs 'loops' or 'boundary'");
    json loops = json::array(), boundary = json::array();
    Svg svg(pr.window);
    for (const json& spec : o.value("loops", json::array())) {
        Polyline p = load_loop(spec);
        loops.push_back(half_json(loop_index(pr, p)));
        svg.polyline(p, "#1f77b4");
    }
    for (const json& spec : o.value("boundary", json::array())) {
        Polyline p = load_loop(spec);
        json pts = json::array();
        double sum = 0.0;
        for (Vec2 q : find_tangencies(pr, p)) {
            HalfInteger h = boundary_tangency_index(pr, p, q);
            json e = half_json(h);
            e["point"] = vec_json(q);
            pts.push_back(e);
            sum += h.value;
            svg.dot(q, "#d62728");
        }
        boundary.push_back({{"tangencies", pts}, {"index", sum}});
        svg.polyline(p, "#000000");
    }
    out.write_json("index.json", {{"loops", loops}, {"boundary", boundary}});
    if (cfg.svg) out.write("index.svg", svg.finish());
    return {0, problem_tolerances(pr, 0.0)};
}

json report_of(const IndexReport& r) {
    json b = json::array();
    for (const auto& t : r.boundary_indices)
        b.push_back({{"loop", t.loop}, {"point", vec_json(t.point)}, {"index", t.index.value}, {"defect", t.index.defect}});
    return {{"declared", r.declared},
            {"component_count", r.component_count},
            {"loop_sums", r.loop_sums},
            {"boundary_indices", b},
            {"euler_lhs", r.euler_lhs},
            {"euler_rhs", r.euler_rhs},
            {"identity_residual", r.identity_residual},
            {"no_singular_set", r.no_singular_set}};
}

CommandResult cmd_euler(const RunConfig& cfg, Artifacts& out) {
    LoadedProblem lp = load_problem(cfg);
    const SurfaceProblem& pr = lp.problem;
    const json& o = cfg.options();
    IndexReport r;
    bool declared = o.value("declared", lp.member && !lp.member->has_u && !o.contains("boundary"));
    if (declared) {
        if (!lp.member || !lp.member->truth.index)
            throw Error(ErrorCode::ConfigInvalid, "declared mode needs a gallery member with an index table");
        r = euler_identity_declared(*lp.member->truth.index);
    } else {
        if (!o.contains("boundary")) throw Error(ErrorCode::ConfigInvalid, "euler-check needs 'boundary' loops");
        std::vector<Polyline> loops;
        for (const json& spec : o["boundary"]) loops.push_back(load_loop(spec));
        SingularReport rep = detect_singular(pr, cfg.resolution.value_or(o.value("resolution", 128)), 1);
        r = euler_identity_check(pr, loops, rep);
    }
    out.write_json("euler.json", report_of(r));
    return {r.identity_residual > 1e-9 ? 2 : 0, problem_tolerances(pr, 0.0)};
}

std::string field_text(const ScalarField& f) {
    switch (f.kind()) {
        case ScalarField::Kind::Expr: return f.expression().text();
        case ScalarField::Kind::Native: return f.tag();
        case ScalarField::Kind::Grid: return "grid";
    }
    return "";
}

CommandResult cmd_example(const RunConfig& cfg, Artifacts& out) {
    if (cfg.list) {
        json names = json::array();
        for (GalleryId id : all_gallery_ids()) {
            names.push_back(gallery_name(id));
            std::cout << gallery_name(id) << "\n";
        }
        out.write_json("gallery.json", names);
        return {};
    }
    auto id = gallery_id_from_name(cfg.target);
    if (!id) throw Error(ErrorCode::ConfigInvalid, "unknown gallery member " + cfg.target);
    GalleryMember m = build(*id);
    const SurfaceProblem& pr = m.problem;
    json problem = {{"u", field_text(pr.u)},
                    {"F", json::array({field_text(pr.F.fx), field_text(pr.F.fy)})},
                    {"H", field_text(pr.H)},
                    {"window", window_json(pr.window)},
                    {"fd_step", pr.fd_step},
                    {"eps_D", pr.eps_D}};
    if (!m.has_u) problem = {{"gallery", m.name}};
    out.write_json("problem.json", {{"problem", problem}});

    json sing = json::array();
    for (const auto& s : m.truth.singular_set) sing.push_back({{"a", vec_json(s.a)}, {"b", vec_json(s.b)}});
    json limits = json::array();
    for (const auto& l : m.truth.limits)
        limits.push_back({{"start", vec_json(l.start)}, {"direction", l.direction}, {"kind", l.kind}});
    json truth = {{"name", m.name},
                  {"singular_set", sing},
                  {"characteristic_family", m.truth.characteristic_family},
                  {"limits", limits},
                  {"has_u", m.has_u}};
    if (m.truth.index)
        truth["index"] = {{"components", m.truth.index->components},
                          {"boundary_indices", m.truth.index->boundary_indices},
                          {"euler_characteristic", m.truth.index->euler_characteristic}};
    out.write_json("truth.json", truth);
    return {0, problem_tolerances(pr, 0.0)};
}

CommandResult cmd_reconstruct(const RunConfig& cfg, Artifacts& out) {
    IntrinsicPatch ip = load_patch(cfg);
    const json& o = cfg.options();
    json tol = {{"gate", ip.gate}, {"n", ip.n}};
    ReconstructionPatch rp;
    try {
        rp = build_coordinates(ip);
    } catch (const Error& e) {
        if (!e.is_hypothesis_violation()) throw;
        json r = error_json(e);
        r["status"] = "rejected";
        out.write_json("report.json", r);
        return {2, tol};
    }
    const int n = ip.n;
    Csv coords({"xi", "eta", "f", "g", "s", "t", "theta", "x", "y", "K_residual", "codazzi_residual"});
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            std::size_t k = static_cast<std::size_t>(j) * n + i;
            Vec2 q = ip.node(i, j);
            coords.row({q.x, q.y, rp.f[k], rp.g[k], rp.s[k], rp.t[k], rp.theta[k], rp.x[k], rp.y[k], rp.K_residual[k],
                        rp.codazzi_residual[k]});
        }
    out.write("coordinates.csv", coords.text());
    json diag = {{"status", "accepted"},
                 {"max_K_residual", rp.max_K},
                 {"max_codazzi_residual", rp.max_codazzi},
                 {"max_cell_defect", rp.max_cell_defect},
                 {"min_jacobian", rp.min_jacobian}};
    try {
        EmitOptions eo;
        eo.nodes = o.value("nodes", 121);
        eo.u0 = o.value("u0", 0.0);
        EmittedGraph g = emit_graph(rp, eo);
        out.write("u_grid.csv", g.u_grid.to_csv());
        if (g.problem.H.is_constant())
            out.write_json("problem.json", {{"problem",
                                             {{"u_grid", "u_grid.csv"},
                                              {"F", json::array({"-y", "x"})},
                                              {"H", "0"},
                                              {"fd_step", g.problem.fd_step}}}});
        diag["graph"] = {{"rect", window_json(g.rect)},
                         {"max_D_error", g.max_D_error},
                         {"max_pde_residual", g.max_pde_residual},
                         {"max_divDV_defect", g.max_divDV_defect}};
        if (cfg.svg) {
            Svg svg(g.rect);
            for (int j = 0; j < n; j += 10) {
                std::vector<Vec2> row;
                for (int i = 0; i < n; ++i) row.push_back({rp.x[j * n + i], rp.y[j * n + i]});
                svg.polyline(row, "#1f77b4");
            }
            out.write("development.svg", svg.finish());
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ConfigInvalid) throw;
        diag["graph"] = error_json(e);
    }
    out.write_json("diagnostics.json", diag);
    return {0, tol};
}

CommandResult cmd_ode_lab(const RunConfig& cfg, Artifacts& out) {
    const json& o = cfg.options();
    const std::vector<std::string> vars = {"rho", "v"};
    auto one = [&](const char* key, const char* dflt) {
        Expression e = Expression::parse(o.value(key, std::string(dflt)), vars);
        return std::function<double(double)>([e](double r) { return e.eval(r, 0.0); });
    };
    Expression e2 = Expression::parse(o.value("E2", std::string("0")), vars);
    GeneralOde ode = make_general_ode(one("E1", "2"), one("l", "1"), one("m", "2"),
                                      [e2](double r, double v) { return e2.eval(r, v); });
    double rho_end = o.value("rho_end", 1.0), v_end = o.value("v_end", 1.5), vp_end = o.value("vprime_end", 1.25);
    int steps = o.value("steps", 4000);
    OdeTrajectory tr = integrate_general_ode(ode, rho_end, v_end, vp_end, steps);
    Csv csv({"rho", "v", "vprime"});
    for (const auto& s : tr.samples) csv.row({s.rho, s.v, s.vprime});
    out.write("trajectory.csv", csv.text());
    GeneralVerdict gv = classify_general_limit(tr, ode);
    json v = verdict_json(gv.verdict);
    v.erase("endpoint");
    out.write_json("verdict.json", {{"verdict", v},
                                    {"v_to_zero", gv.v_to_zero},
                                    {"v_limit", num_json(gv.v_limit)},
                                    {"hit_zero", tr.hit_zero},
                                    {"diverged", tr.diverged},
                                    {"rho_min", tr.rho_min},
                                    {"limit", num_json(gv.verdict.value)}});
    return {0, {{"steps", steps}, {"rho_min", tr.rho_min}}};
}

}  // namespace

CommandResult dispatch(const RunConfig& cfg, Artifacts& out) {
    const std::string& c = cfg.command;
    if (c == "analyze") return cmd_analyze(cfg, out);
    if (c == "trace") return cmd_trace(cfg, out);
    if (c == "classify-limit") return cmd_classify(cfg, out);
    if (c == "singular") return cmd_singular(cfg, out);
    if (c == "index") return cmd_index(cfg, out);
    if (c == "euler-check") return cmd_euler(cfg, out);
    if (c == "example") return cmd_example(cfg, out);
    if (c == "reconstruct") return cmd_reconstruct(cfg, out);
    if (c == "ode-lab") return cmd_ode_lab(cfg, out);
    throw Error(ErrorCode::ConfigInvalid, "unknown command " + c);
}

}  // namespace heis_cli
