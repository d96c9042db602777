#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "heis/charflow.hpp"

namespace heis {

struct SingularComponent {
    int label = 0;
    int cells = 0;
    Window bbox;  // union of the member cells
};

struct SingularReport {
    int resolution = 0;
    Window window;
    std::vector<std::uint8_t> mask;  // row-major, cell (i, j) at index j * resolution + i
    std::vector<int> labels;         // 0 for unflagged cells, components numbered from 1
    std::vector<SingularComponent> components;
    int component_count = 0;
    std::vector<std::pair<int, double>> area_series;  // (resolution, flagged area fraction)
    double max_abs_curl = 0.0;
    bool hypothesis_violation = false;  // curl F vanishes on the sampled window

    bool flagged(int i, int j) const { return mask[static_cast<std::size_t>(j) * resolution + i] != 0; }
    Vec2 cell_center(int i, int j) const;
};

// a cell is flagged when its sampled D, widened by the local Lipschitz bound over
// half a cell diagonal, reaches eps_D
SingularReport detect_singular(const SurfaceProblem& pr, int resolution, int levels = 3);

struct DecayFit {
    double exponent = 0.0;
    bool degenerate = false;
    bool hypothesis_violation = false;
};
DecayFit measure_decay_check(const SingularReport& report);

struct SingularCurvePoint {
    Vec2 location;
    std::optional<Vec2> tangent_estimate;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    std::optional<Vec2> Nplus;
    std::optional<Vec2> Nminus;
    bool nondegenerate = false;
};

// characteristic from a point of a transverse curve to its singular endpoint
struct HitRecord {
    double tau = 0.0;
    Vec2 start;
    bool hit = false;
    int direction = 0;
    Vec2 end;
    double length = 0.0;  // travelled arc length to the endpoint
    Vec2 N_end;           // N at the last nonsingular node
    StopReason stop = StopReason::MaxLength;
};

// direction 0 tries -1 first, then +1
HitRecord hit_map(const SurfaceProblem& pr, const ParamCurve& beta, double tau, int direction = 0);

struct SingularSweep {
    std::vector<HitRecord> rays;           // every sampled tau, escaped rays included
    std::vector<SingularCurvePoint> points;  // hits in tau order, with secant tangents
    int escaped() const;
};
SingularSweep trace_singular_curve(const SurfaceProblem& pr, const ParamCurve& beta, int n_rays, int direction = 0);

constexpr double kEpsLambda = 1e-3;

// expanding rate of the characteristics leaving seed at tau, measured at the hit point;
// throws DegenerateSide when the hit map is unresolvable or the rate is below kEpsLambda
double expanding_rate(const SurfaceProblem& pr, const ParamCurve& seed, double tau, int direction = 0);

// tau on `seed` whose characteristic hit point is p0; throws DegenerateSide if none
double locate_hit(const SurfaceProblem& pr, const ParamCurve& seed, Vec2 p0, int samples = 24);

std::pair<double, double> lambda_rates(const SurfaceProblem& pr, Vec2 p0, const ParamCurve& seed_plus,
                                       const ParamCurve& seed_minus);

// singular point reached from both sides, with the hit data of each side
struct MatchedPoint {
    SingularCurvePoint point;
    double tau_plus = 0.0;
    double tau_minus = 0.0;
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    double match_error = 0.0;
};
std::vector<MatchedPoint> sample_singular_points(const SurfaceProblem& pr, const ParamCurve& seed_plus,
                                                 const ParamCurve& seed_minus, int n);

double equal_angle_check(const SurfaceProblem& pr, const SingularCurvePoint& p0);

// largest |(sigma_+ - sigma_+0) - (sigma_- - sigma_-0)| relative to pairs.front()
double sigma_balance_check(const SurfaceProblem& pr, const std::vector<MatchedPoint>& pairs);

struct HolonomyResult {
    double integral = 0.0;  // |line integral of du + F1 dx + F2 dy along beta|
    double area = 0.0;
    double C1 = 0.0;  // min |curl F| over the region
    double C2 = 0.0;  // max |curl F| over the region
    bool within_bounds = false;
    std::vector<Vec2> polygon;
};
HolonomyResult holonomy_area_check(const SurfaceProblem& pr, const ParamCurve& beta, int n_rays = 64);

}  // namespace heis
