#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "heis_cli/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int heis(std::vector<std::string> args) {
    args.insert(args.begin(), "heis");
    return heis_cli::run(args);
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "heis_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const json& j) {
    fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump();
    return p;
}

}  // namespace

TEST(Cli, ExampleThenSingular) {
    fs::path d = scratch("example_singular");
    ASSERT_EQ(heis({"example", "Ex4_1", "--out", (d / "ex").string()}), 0);
    ASSERT_TRUE(fs::exists(d / "ex" / "problem.json"));
    ASSERT_TRUE(fs::exists(d / "ex" / "truth.json"));
    ASSERT_EQ(heis({"singular", "--config", (d / "ex" / "problem.json").string(), "--out", (d / "s").string(),
                    "--resolution", "64"}),
              0);
    json c = read_json(d / "s" / "components.json");
    EXPECT_EQ(c["component_count"], 1);
    EXPECT_EQ(c["resolution"], 64);
    EXPECT_TRUE(fs::exists(d / "s" / "mask.csv"));
}

TEST(Cli, ExampleList) {
    fs::path d = scratch("list");
    ASSERT_EQ(heis({"example", "--list", "--out", d.string()}), 0);
    json g = read_json(d / "gallery.json");
    EXPECT_EQ(g.size(), 7u);
}

TEST(Cli, EulerCheckDeclared) {
    fs::path d = scratch("euler");
    fs::path cfg = write_config(d, {{"command", "euler-check"}, {"problem", {{"gallery", "Ex7_2Domain"}}}});
    ASSERT_EQ(heis({"euler-check", "--config", cfg.string(), "--out", (d / "o").string()}), 0);
    json e = read_json(d / "o" / "euler.json");
    EXPECT_EQ(e["euler_lhs"], -1);
    EXPECT_EQ(e["identity_residual"], 0.0);
}

TEST(Cli, OdeLabVerdict) {
    fs::path d = scratch("ode");
    ASSERT_EQ(heis({"ode-lab", "--out", d.string()}), 0);
    json v = read_json(d / "verdict.json");
    EXPECT_EQ(v["verdict"]["kind"], "FullCurl");
    EXPECT_TRUE(v["v_to_zero"].get<bool>());
    EXPECT_TRUE(fs::exists(d / "trajectory.csv"));
}

TEST(Cli, ManifestContents) {
    fs::path d = scratch("manifest");
    ASSERT_EQ(heis({"ode-lab", "--out", d.string()}), 0);
    json m = read_json(d / "manifest.json");
    for (const char* k : {"command", "inputs_hash", "config", "versions", "tolerances", "threads", "seed", "files",
                          "exit_code", "wall_time_s"})
        EXPECT_TRUE(m.contains(k)) << k;
    EXPECT_EQ(m["command"], "ode-lab");
    EXPECT_TRUE(m["files"].contains("verdict.json"));
}

TEST(Cli, ArtifactsAreDeterministic) {
    fs::path d = scratch("determinism");
    fs::path cfg = write_config(d, {{"command", "trace"},
                                    {"problem", {{"gallery", "Ex4_4"}}},
                                    {"options", {{"starts", {{0.2, 0.4}, {-0.2, 0.7}}}}},
                                    {"seed", 7}});
    for (const char* run : {"a", "b"})
        ASSERT_EQ(heis({"trace", "--config", cfg.string(), "--out", (d / run).string(), "--svg"}), 0);
    int compared = 0;
    for (const auto& e : fs::directory_iterator(d / "a")) {
        std::string name = e.path().filename().string();
        if (name == "manifest.json") continue;
        EXPECT_EQ(slurp(e.path()), slurp(d / "b" / name)) << name;
        ++compared;
    }
    EXPECT_GE(compared, 3);
    EXPECT_EQ(read_json(d / "a" / "manifest.json")["inputs_hash"], read_json(d / "b" / "manifest.json")["inputs_hash"]);
}

TEST(Cli, CsvUsesFullPrecisionAndLf) {
    fs::path d = scratch("csv");
    ASSERT_EQ(heis({"ode-lab", "--out", d.string()}), 0);
    std::string csv = slurp(d / "trajectory.csv");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "rho,v,vprime");
}

TEST(Cli, SchemaErrors) {
    fs::path d = scratch("schema");
    EXPECT_EQ(heis({"bogus", "--out", d.string()}), 1);
    fs::path cfg = write_config(d, {{"command", "trace"}, {"problem", {{"gallery", "RadialPlane"}}}, {"bad", 1}});
    EXPECT_EQ(heis({"trace", "--config", cfg.string(), "--out", (d / "o").string()}), 1);
    cfg = write_config(d, {{"command", "trace"}, {"problem", {{"gallery", "RadialPlane"}, {"u", "x"}}}});
    EXPECT_EQ(heis({"trace", "--config", cfg.string(), "--out", (d / "o").string()}), 1);
    cfg = write_config(d, {{"command", "trace"}, {"problem", {{"u", "x+"}, {"F", {"-y", "x"}}, {"H", "0"}, {"window", {0, 1, 0, 1}}}}});
    EXPECT_EQ(heis({"trace", "--config", cfg.string(), "--out", (d / "o").string()}), 1);
    EXPECT_EQ(heis({"trace", "--config", (d / "missing.json").string(), "--out", (d / "o").string()}), 1);
}

TEST(Cli, ReconstructRejectionExitsTwo) {
    fs::path d = scratch("reconstruct");
    fs::path cfg = write_config(
        d, {{"command", "reconstruct"},
            {"patch", {{"V1", "1"}, {"V2", "0"}, {"D", "xi+1+0.1*sin(5*xi)"}, {"H", "0"}, {"domain", {0, 1, 0, 1}}, {"n", 61}}}});
    EXPECT_EQ(heis({"reconstruct", "--config", cfg.string(), "--out", (d / "o").string()}), 2);
    EXPECT_EQ(read_json(d / "o" / "report.json")["error"], "NotIntegrable");
    EXPECT_EQ(read_json(d / "o" / "manifest.json")["exit_code"], 2);
}

TEST(Cli, ReconstructEmitsAReusableProblem) {
    fs::path d = scratch("reconstruct_ok");
    fs::path cfg = write_config(
        d, {{"command", "reconstruct"},
            {"patch", {{"V1", "1"}, {"V2", "0"}, {"D", "xi+1"}, {"H", "0"}, {"domain", {0, 1, 0, 1}}, {"n", 61}}}});
    ASSERT_EQ(heis({"reconstruct", "--config", cfg.string(), "--out", (d / "o").string()}), 0);
    for (const char* f : {"coordinates.csv", "u_grid.csv", "problem.json", "diagnostics.json"})
        EXPECT_TRUE(fs::exists(d / "o" / f)) << f;
    ASSERT_EQ(heis({"singular", "--config", (d / "o" / "problem.json").string(), "--out", (d / "s").string(),
                    "--resolution", "32"}),
              0);
}

TEST(Cli, AnalyzeReportsHBound) {
    fs::path d = scratch("analyze");
    ASSERT_EQ(heis({"example", "Ex4_1", "--out", (d / "ex").string()}), 0);
    ASSERT_EQ(heis({"analyze", "--config", (d / "ex" / "problem.json").string(), "--out", (d / "a").string(),
                    "--resolution", "32"}),
              0);
    json s = read_json(d / "a" / "summary.json");
    EXPECT_EQ(s["max_abs_H"], 0.0);
    EXPECT_TRUE(fs::exists(d / "a" / "frame.csv"));

    fs::path cfg = write_config(d, {{"command", "analyze"},
                                    {"problem", {{"u", "x*y"}, {"F", {"-y", "x"}}, {"H", "0.5+x"}, {"window", {0, 3, 0, 4}}}},
                                    {"options", {{"starts_per_side", 2}, {"levels", 2}}}});
    ASSERT_EQ(heis({"analyze", "--config", cfg.string(), "--out", (d / "h").string(), "--resolution", "16"}), 0);
    s = read_json(d / "h" / "summary.json");
    // two levels are too few for a decay fit; the run still succeeds
    EXPECT_EQ(s["singular"]["decay"]["error"], "DegenerateSeries");
    // |H| peaks on the right edge, inset by the frame margin
    EXPECT_NEAR(s["max_abs_H"].get<double>(), 3.5, 1e-3);
    EXPECT_NEAR(s["max_abs_H_times_radius"].get<double>(), s["max_abs_H"].get<double>() * 2.5, 1e-12);
}
