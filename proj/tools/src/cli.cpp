#include "heis_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace heis_cli {

namespace {

json read_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw heis::Error(heis::ErrorCode::ConfigInvalid, "cannot open config " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw heis::Error(heis::ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
    }
}

// the effective configuration after command-line overrides, hashed for the manifest
json effective(const RunConfig& cfg) {
    json j = cfg.doc;
    j["command"] = cfg.command;
    if (!cfg.target.empty()) j["target"] = cfg.target;
    json ov = json::object();
    if (cfg.resolution) ov["resolution"] = *cfg.resolution;
    if (cfg.step) ov["step"] = *cfg.step;
    if (cfg.eps_d) ov["eps_d"] = *cfg.eps_d;
    if (cfg.list) ov["list"] = true;
    j["overrides"] = ov;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace

int run(const std::vector<std::string>& argv) {
    CLI::App app{"Numerics for graphs in the Heisenberg group: characteristics, singular sets, indices"};
    RunConfig cfg;
    std::string config_path;
    int resolution = 0;
    double step = 0.0, eps_d = 0.0;
    std::string out_dir = "heis_out";
    app.add_option("command", cfg.command, "analyze | trace | classify-limit | singular | index | euler-check | "
                                           "example | reconstruct | ode-lab")
        ->required();
    app.add_option("target", cfg.target, "gallery id for `example`");
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--resolution", resolution, "grid resolution for singular-set detection");
    app.add_option("--step", step, "arc-length step for characteristic tracing");
    app.add_option("--eps-d", eps_d, "threshold on D below which a point counts as singular");
    app.add_flag("--svg", cfg.svg, "also write SVG plots");
    app.add_flag("--list", cfg.list, "with `example`: list gallery ids");

    std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
        if (!config_path.empty()) {
            cfg.doc = read_config(config_path);
            cfg.base_dir = fs::path(config_path).parent_path();
        }
        cfg.out_dir = out_dir;
        if (app.count("--resolution")) cfg.resolution = resolution;
        if (app.count("--step")) cfg.step = step;
        if (app.count("--eps-d")) cfg.eps_d = eps_d;
        validate(cfg);
        if (cfg.doc.contains("seed")) cfg.seed = cfg.doc["seed"].get<std::uint64_t>();

        Artifacts out(cfg.out_dir);
        CommandResult r;
        try {
            r = dispatch(cfg, out);
        } catch (const heis::Error& e) {
            if (!e.is_hypothesis_violation()) throw;
            out.write_json("report.json", {{"error", heis::error_name(e.code())}, {"message", e.what()}});
            r.exit_code = 2;
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json files = json::object();
        for (const auto& [name, hash] : out.hashes()) files[name] = hash;
        json manifest = {{"command", cfg.command},
                         {"inputs_hash", hex64(fnv1a(effective(cfg).dump()))},
                         {"config", effective(cfg)},
                         {"versions", {{"heis", HEIS_VERSION}, {"nlohmann_json", NLOHMANN_JSON_VERSION_MAJOR}}},
                         {"tolerances", r.tolerances},
                         {"threads", heis::thread_count()},
                         {"seed", cfg.seed},
                         {"files", files},
                         {"exit_code", r.exit_code},
                         {"wall_time_s", wall}};
        out.write_json("manifest.json", manifest);
        if (r.exit_code == 2) std::cerr << "heis: hypothesis violation reported in " << cfg.out_dir.string() << "\n";
        return r.exit_code;
    } catch (const heis::Error& e) {
        std::cerr << "heis: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "heis: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace heis_cli
