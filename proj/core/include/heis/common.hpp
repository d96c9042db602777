#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace heis {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) { double n = norm(a); return n > 0 ? a / n : a; }
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

// axis-aligned rectangle [x0,x1] x [y0,y1]
struct Window {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diagonal() const { return std::hypot(width(), height()); }
    double min_side() const { return std::min(width(), height()); }
    bool contains(Vec2 p, double margin = 0.0) const {
        return p.x >= x0 + margin && p.x <= x1 - margin && p.y >= y0 + margin && p.y <= y1 - margin;
    }
    bool operator==(const Window&) const = default;
};

enum class ErrorCode {
    OutOfWindow,
    SingularPoint,
    SingularStart,
    IntegratorStall,
    TooFewNodes,
    NotSingularApproach,
    ZeroCurl,
    NonpositiveV,
    DegenerateSeries,
    RayEscaped,
    DegenerateSide,
    MissingSideData,
    NoMatchedPairs,
    OpenRegion,
    SingularOnLoop,
    LiftJump,
    NotATangency,
    NonIsolated,
    SingularTouchesBoundary,
    UnresolvedTangency,
    OutsideRegion,
    NewtonDiverged,
    OrientationFlip,
    NotIntegrable,
    NonPositiveFactor,
    FoldedChart,
    ConfigInvalid,
    ParseError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode c, const std::string& what)
        : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
    ErrorCode code() const { return code_; }

    // true for findings that mean "the mathematics says no" rather than an operational failure
    bool is_hypothesis_violation() const {
        return code_ == ErrorCode::NotIntegrable || code_ == ErrorCode::ZeroCurl ||
               code_ == ErrorCode::NonPositiveFactor || code_ == ErrorCode::OrientationFlip ||
               code_ == ErrorCode::FoldedChart;
    }

private:
    ErrorCode code_;
};

// worker count: hardware concurrency capped by HEIS_THREADS
unsigned thread_count();

// runs fn(i) for i in [0,n); results must be written to preallocated slots
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// nearest representative of a modulo period to a reference value
inline double unwrap_near(double a, double ref, double period) {
    return a + period * std::round((ref - a) / period);
}

}  // namespace heis
