#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "heis/common.hpp"

namespace heis_cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

// RFC-4180 table with 17 significant digits
class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    Csv& row(const std::vector<double>& values);
    // first column as text, the rest numeric
    Csv& row(const std::string& label, const std::vector<double>& values);
    const std::string& text() const { return text_; }

private:
    static std::string quote(const std::string& s);
    std::size_t width_;
    std::string text_;
};

std::string number(double v);

class Svg {
public:
    explicit Svg(const heis::Window& w);
    void polyline(const std::vector<heis::Vec2>& pts, const std::string& color, double width = 1.0);
    void rect(const heis::Window& r, const std::string& fill);
    void dot(heis::Vec2 p, const std::string& color, double radius = 3.0);
    std::string finish() const;

private:
    heis::Window w_;
    std::string body_;
};

// collects artifacts under one directory, each written once via temp file and rename
class Artifacts {
public:
    explicit Artifacts(fs::path dir);
    void write(const std::string& name, const std::string& content);
    void write_json(const std::string& name, const json& j);
    const fs::path& dir() const { return dir_; }
    const std::map<std::string, std::string>& hashes() const { return hashes_; }

private:
    fs::path dir_;
    std::map<std::string, std::string> hashes_;
};

json vec_json(heis::Vec2 v);
json window_json(const heis::Window& w);
// non-finite numbers become null in JSON
json num_json(double v);

}  // namespace heis_cli
