#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace heis_cli {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + quote(header[i]);
    text_ += "\n";
}

std::string Csv::quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

Csv& Csv::row(const std::vector<double>& values) {
    if (values.size() != width_) throw heis::Error(heis::ErrorCode::ConfigInvalid, "csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + number(values[i]);
    text_ += "\n";
    return *this;
}

Csv& Csv::row(const std::string& label, const std::vector<double>& values) {
    if (values.size() + 1 != width_) throw heis::Error(heis::ErrorCode::ConfigInvalid, "csv row width mismatch");
    text_ += quote(label);
    for (double v : values) text_ += "," + number(v);
    text_ += "\n";
    return *this;
}

Svg::Svg(const heis::Window& w) : w_(w) {}

void Svg::polyline(const std::vector<heis::Vec2>& pts, const std::string& color, double width) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + number(width) +
             "\" vector-effect=\"non-scaling-stroke\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.6g,%.6g", i ? " " : "", pts[i].x, pts[i].y);
        body_ += buf;
    }
    body_ += "\"/>\n";
}

void Svg::rect(const heis::Window& r, const std::string& fill) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "<rect x=\"%.6g\" y=\"%.6g\" width=\"%.6g\" height=\"%.6g\" fill=\"%s\"/>\n", r.x0,
                  r.y0, r.width(), r.height(), fill.c_str());
    body_ += buf;
}

void Svg::dot(heis::Vec2 p, const std::string& color, double radius) {
    double r = radius * w_.diagonal() / 1414.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.6g\" cy=\"%.6g\" r=\"%.6g\" fill=\"%s\"/>\n", p.x, p.y, r,
                  color.c_str());
    body_ += buf;
}

std::string Svg::finish() const {
    char head[400];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"%.17g %.17g "
                  "%.17g %.17g\" preserveAspectRatio=\"none\">\n<g transform=\"matrix(1 0 0 -1 0 %.17g)\">\n",
                  w_.x0, w_.y0, w_.width(), w_.height(), w_.y0 + w_.y1);
    std::string out = head;
    char frame[200];
    std::snprintf(frame, sizeof frame,
                  "<rect x=\"%.17g\" y=\"%.17g\" width=\"%.17g\" height=\"%.17g\" fill=\"white\" stroke=\"black\" "
                  "vector-effect=\"non-scaling-stroke\"/>\n",
                  w_.x0, w_.y0, w_.width(), w_.height());
    out += frame;
    out += body_;
    out += "</g>\n</svg>\n";
    return out;
}

Artifacts::Artifacts(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
        throw heis::Error(heis::ErrorCode::ConfigInvalid, "output directory not writable: " + dir_.string());
}

void Artifacts::write(const std::string& name, const std::string& content) {
    fs::path final_path = dir_ / name;
    fs::path tmp = dir_ / ("." + name + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw heis::Error(heis::ErrorCode::ConfigInvalid, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw heis::Error(heis::ErrorCode::ConfigInvalid, "short write to " + tmp.string());
    }
    fs::rename(tmp, final_path);
    hashes_[name] = hex64(fnv1a(content));
}

void Artifacts::write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec_json(heis::Vec2 v) { return json::array({num_json(v.x), num_json(v.y)}); }

json window_json(const heis::Window& w) { return json::array({w.x0, w.x1, w.y0, w.y1}); }

}  // namespace heis_cli
