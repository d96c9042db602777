#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace heis_cli {

using heis::Error;
using heis::ErrorCode;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

enum class Kind { Number, Integer, Boolean, String, Point, Points, Window, Array, Object };

bool matches(const json& v, Kind k) {
    switch (k) {
        case Kind::Number: return v.is_number();
        case Kind::Integer: return v.is_number_integer();
        case Kind::Boolean: return v.is_boolean();
        case Kind::String: return v.is_string();
        case Kind::Point: return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
        case Kind::Points:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& p) { return matches(p, Kind::Point); });
        case Kind::Window:
            return v.is_array() && v.size() == 4 &&
                   std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
        case Kind::Array: return v.is_array();
        case Kind::Object: return v.is_object();
    }
    return false;
}

using Schema = std::map<std::string, Kind>;

void check_block(const json& block, const Schema& schema, const std::string& where) {
    if (!block.is_object()) invalid(where + " must be an object");
    for (auto it = block.begin(); it != block.end(); ++it) {
        auto s = schema.find(it.key());
        if (s == schema.end()) invalid("unknown key '" + it.key() + "' in " + where);
        if (!matches(it.value(), s->second)) invalid("key '" + it.key() + "' in " + where + " has the wrong type");
    }
}

const std::map<std::string, Schema>& option_schemas() {
    static const std::map<std::string, Schema> s = {
        {"analyze", {{"starts_per_side", Kind::Integer}, {"resolution", Kind::Integer}, {"levels", Kind::Integer}}},
        {"trace",
         {{"starts", Kind::Points}, {"direction", Kind::Integer}, {"step", Kind::Number}, {"max_length", Kind::Number},
          {"seed_curve", Kind::Boolean}}},
        {"classify-limit", {{"starts", Kind::Points}, {"direction", Kind::Integer}, {"step", Kind::Number}}},
        {"singular", {{"resolution", Kind::Integer}, {"levels", Kind::Integer}, {"seeds", Kind::Object}}},
        {"index", {{"loops", Kind::Array}, {"boundary", Kind::Array}}},
        {"euler-check", {{"declared", Kind::Boolean}, {"boundary", Kind::Array}, {"resolution", Kind::Integer}}},
        {"example", {}},
        {"reconstruct", {{"nodes", Kind::Integer}, {"u0", Kind::Number}}},
        {"ode-lab",
         {{"E1", Kind::String}, {"l", Kind::String}, {"m", Kind::String}, {"E2", Kind::String},
          {"rho_end", Kind::Number}, {"v_end", Kind::Number}, {"vprime_end", Kind::Number},
          {"steps", Kind::Integer}}},
    };
    return s;
}

const Schema kTop = {{"command", Kind::String},
                     {"problem", Kind::Object},
                     {"patch", Kind::Object},
                     {"options", Kind::Object},
                     {"seed", Kind::Integer}};

const Schema kProblem = {{"gallery", Kind::String}, {"u", Kind::String},      {"u_grid", Kind::String},
                         {"F", Kind::Array},        {"H", Kind::String},      {"window", Kind::Window},
                         {"fd_step", Kind::Number}, {"eps_D", Kind::Number}};

const Schema kPatch = {{"V1", Kind::String}, {"V2", Kind::String}, {"D", Kind::String},
                       {"H", Kind::String},  {"domain", Kind::Window}, {"n", Kind::Integer},
                       {"gate", Kind::Number}};

const Schema kSeeds = {{"plus", Kind::Points}, {"minus", Kind::Points}, {"n", Kind::Integer}};

const Schema kLoop = {{"circle", Kind::Array}, {"ccw", Kind::Boolean}, {"n", Kind::Integer},
                      {"polyline", Kind::Points}};

bool needs_problem(const std::string& cmd) { return cmd != "example" && cmd != "ode-lab" && cmd != "reconstruct"; }

}  // namespace

const json& RunConfig::options() const {
    static const json empty = json::object();
    auto it = doc.find("options");
    return it == doc.end() ? empty : *it;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"analyze", "trace",   "classify-limit", "singular", "index",
                                                   "euler-check", "example", "reconstruct", "ode-lab"};
    return names;
}

void validate(const RunConfig& cfg) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), cfg.command) == names.end()) invalid("unknown command " + cfg.command);
    check_block(cfg.doc, kTop, "config");
    if (cfg.doc.contains("command") && cfg.doc["command"] != cfg.command)
        invalid("config is for command " + cfg.doc["command"].get<std::string>());
    if (cfg.doc.contains("seed") && cfg.doc["seed"].get<long long>() < 0) invalid("seed must be nonnegative");
    check_block(cfg.options(), option_schemas().at(cfg.command), "options");

    bool has_problem = cfg.doc.contains("problem"), has_patch = cfg.doc.contains("patch");
    if (cfg.command == "reconstruct") {
        if (!has_patch || has_problem) invalid("reconstruct needs exactly one 'patch' block and no 'problem'");
        check_block(cfg.doc["patch"], kPatch, "patch");
        for (const char* k : {"D", "domain"})
            if (!cfg.doc["patch"].contains(k)) invalid(std::string("patch needs '") + k + "'");
    } else if (has_patch) {
        invalid("'patch' is only used by reconstruct");
    }
    if (needs_problem(cfg.command)) {
        if (!has_problem) invalid(cfg.command + " needs a 'problem' block");
        const json& p = cfg.doc["problem"];
        check_block(p, kProblem, "problem");
        int sources = p.contains("gallery") + p.contains("u") + p.contains("u_grid");
        if (sources != 1) invalid("problem needs exactly one of 'gallery', 'u', 'u_grid'");
        if (p.contains("gallery")) {
            for (const char* k : {"F", "H", "window"})
                if (p.contains(k)) invalid(std::string("'") + k + "' cannot be combined with 'gallery'");
        } else {
            if (!p.contains("F") || p["F"].size() != 2 || !p["F"][0].is_string() || !p["F"][1].is_string())
                invalid("problem 'F' must be two expression strings");
            if (p.contains("u") && !p.contains("window")) invalid("expression problems need a 'window'");
        }
    } else if (has_problem && cfg.command != "example") {
        invalid("'problem' is not used by " + cfg.command);
    }
    if (cfg.options().contains("seeds")) {
        const json& s = cfg.options()["seeds"];
        check_block(s, kSeeds, "seeds");
        if (!s.contains("plus") || !s.contains("minus") || s["plus"].size() != 2 || s["minus"].size() != 2)
            invalid("seeds need 'plus' and 'minus' segments of two points each");
    }
    for (const char* key : {"loops", "boundary"})
        if (cfg.options().contains(key))
            for (const json& l : cfg.options()[key]) check_block(l, kLoop, std::string(key) + " entry");
    if (cfg.command == "example" && !cfg.list && cfg.target.empty()) invalid("example needs a gallery id or --list");
    if (cfg.resolution && *cfg.resolution < 16) invalid("--resolution must be at least 16");
    if (cfg.step && !(*cfg.step > 0)) invalid("--step must be positive");
    if (cfg.eps_d && !(*cfg.eps_d > 0)) invalid("--eps-d must be positive");
}

heis::Vec2 to_vec(const json& j) {
    if (!matches(j, Kind::Point)) invalid("expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

heis::Window to_window(const json& j) {
    if (!matches(j, Kind::Window)) invalid("expected [x0, x1, y0, y1]");
    heis::Window w{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) invalid("window must have positive extent");
    return w;
}

LoadedProblem load_problem(const RunConfig& cfg) {
    const json& p = cfg.doc.at("problem");
    LoadedProblem lp;
    lp.description = p;
    double eps = cfg.eps_d.value_or(p.value("eps_D", 0.0));
    double fd = p.value("fd_step", 0.0);

    auto builtin = [&](std::string name) {
        auto id = heis::gallery_id_from_name(name);
        if (!id) invalid("unknown gallery member " + name);
        lp.member = heis::build(*id);
        return lp.member->problem;
    };
    if (p.contains("gallery")) {
        heis::SurfaceProblem base = builtin(p["gallery"].get<std::string>());
        lp.problem = heis::make_problem(base.u, base.F, base.H, fd > 0 ? fd : base.fd_step, eps > 0 ? eps : 0.0);
        return lp;
    }

    heis::ScalarField u;
    heis::Window w;
    if (p.contains("u_grid")) {
        fs::path path = p["u_grid"].get<std::string>();
        if (path.is_relative()) path = cfg.base_dir / path;
        heis::GridData g = heis::GridData::read_csv(path.string());
        w = p.contains("window") ? to_window(p["window"]) : g.window;
        u = heis::ScalarField::grid(std::move(g));
    } else {
        w = to_window(p["window"]);
        std::string text = p["u"].get<std::string>();
        const std::string prefix = "builtin:";
        if (text.rfind(prefix, 0) == 0) u = builtin(text.substr(prefix.size())).u;
        else u = heis::ScalarField::expr(text, w);
    }
    auto field = [&](const json& j, const std::string& dflt) {
        std::string text = j.is_string() ? j.get<std::string>() : dflt;
        return heis::ScalarField::expr(text, w);
    };
    heis::PlanarVectorField F{field(p["F"][0], "0"), field(p["F"][1], "0")};
    heis::ScalarField H = field(p.value("H", json("0")), "0");
    lp.problem = heis::make_problem(u, F, H, fd, eps);
    return lp;
}

heis::IntrinsicPatch load_patch(const RunConfig& cfg) {
    const json& p = cfg.doc.at("patch");
    heis::IntrinsicPatch ip = heis::patch_from_expressions(p.value("V1", "1"), p.value("V2", "0"), p["D"], p.value("H", "0"),
                                                           to_window(p["domain"]), p.value("n", 101));
    ip.gate = p.value("gate", 1e-3);
    if (ip.n < 9 || ip.n % 2 == 0) invalid("patch 'n' must be odd and at least 9");
    return ip;
}

heis::Polyline load_loop(const json& spec) {
    if (spec.contains("circle")) {
        const json& c = spec["circle"];
        if (c.size() != 3 || !std::all_of(c.begin(), c.end(), [](const json& v) { return v.is_number(); }))
            invalid("circle must be [cx, cy, r]");
        return heis::circle_polyline({c[0].get<double>(), c[1].get<double>()}, c[2].get<double>(),
                                     spec.value("n", 2000), spec.value("ccw", true));
    }
    if (spec.contains("polyline")) {
        heis::Polyline p;
        for (const json& q : spec["polyline"]) p.push_back(to_vec(q));
        if (p.size() < 3) invalid("polyline needs at least 3 points");
        return p;
    }
    invalid("loop needs 'circle' or 'polyline'");
}

}  // namespace heis_cli
