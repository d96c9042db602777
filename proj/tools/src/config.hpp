#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "heis/gallery.hpp"
#include "heis/index.hpp"
#include "heis/reconstruct.hpp"
#include "output.hpp"

namespace heis_cli {

struct RunConfig {
    std::string command;
    std::string target;  // positional argument after the command (gallery id for `example`)
    json doc = json::object();
    fs::path base_dir;  // relative paths in the config resolve against this
    fs::path out_dir = "heis_out";
    std::optional<int> resolution;
    std::optional<double> step;
    std::optional<double> eps_d;
    bool svg = false;
    bool list = false;
    std::uint64_t seed = 0;

    // command-specific options block, empty object when absent
    const json& options() const;
};

const std::vector<std::string>& command_names();

// checks the document shape for the command; throws ConfigInvalid
void validate(const RunConfig& cfg);

struct LoadedProblem {
    heis::SurfaceProblem problem;
    std::optional<heis::GalleryMember> member;
    json description;  // problem block as given, normalized
};

// builds the problem from the "problem" block, applying --eps-d
LoadedProblem load_problem(const RunConfig& cfg);

heis::IntrinsicPatch load_patch(const RunConfig& cfg);

heis::Polyline load_loop(const json& spec);
heis::Vec2 to_vec(const json& j);
heis::Window to_window(const json& j);

}  // namespace heis_cli
