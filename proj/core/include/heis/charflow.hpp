#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "heis/common.hpp"
#include "heis/fields.hpp"

namespace heis {

// sigma is arc length travelled from the start; the field orientation of the
// curve is +N_perp when direction = +1 and -N_perp when direction = -1
struct CharState {
    double sigma = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double u = 0.0;
    double D = 0.0;

    Vec2 pos() const { return {x, y}; }
};

enum class StopReason { HitSingular, HitBoundary, MaxLength, Closed };
const char* stop_reason_name(StopReason r);

struct CharCurve {
    std::vector<CharState> nodes;
    StopReason stop_reason = StopReason::MaxLength;
    int direction = 1;
    bool seed = false;              // integral curve of N rather than N_perp
    bool extrapolated_end = false;  // last node placed at the extrapolated D = 0 crossing
    double step = 0.0;
    double theta_drift_max = 0.0;
    bool drift_flag = false;

    double length() const { return nodes.empty() ? 0.0 : nodes.back().sigma; }
    // unit tangent of travel at node i
    Vec2 tangent(std::size_t i) const;
    // cubic Hermite position at arc length s
    Vec2 position_at(double s) const;
};

struct StopPolicy {
    double max_length = 0.0;
    double eps_D = 0.0;
    Window boundary;
    double closure_tol = 0.0;
    double step = 0.0;  // 0 selects min(1e-3 diag, 0.1 / max|H|)
    bool stop_at_singular = true;  // false continues the (x, y, theta) flow through D = 0
};

StopPolicy default_policy(const SurfaceProblem& pr, double max_length = 0.0);
double default_step(const SurfaceProblem& pr);

CharCurve trace_characteristic(const SurfaceProblem& pr, Vec2 start, int direction, const StopPolicy& policy);
CharCurve trace_seed(const SurfaceProblem& pr, Vec2 start, int direction, const StopPolicy& policy);
double contact_defect(const CharCurve& curve, const SurfaceProblem& pr);

// parametrized planar curve on [t0, t1]
struct ParamCurve {
    std::function<Vec2(double)> at;
    double t0 = 0.0;
    double t1 = 1.0;
};

// arc-length parametrization of a traced curve
ParamCurve as_param_curve(const CharCurve& c);
ParamCurve segment_curve(Vec2 a, Vec2 b);
ParamCurve arc_curve(Vec2 center, double radius, double phi0, double phi1);

}  // namespace heis
