#pragma once

#include <vector>

#include "heis/fields.hpp"
#include "heis/gallery.hpp"
#include "heis/singular.hpp"

namespace heis {

// closed polyline, first point repeated at the end; boundary loops keep the domain on their left
using Polyline = std::vector<Vec2>;

Polyline circle_polyline(Vec2 center, double radius, int n, bool counterclockwise = true);
Polyline curve_polyline(const ParamCurve& c, int n);

struct HalfInteger {
    double value = 0.0;   // rounded to the nearest multiple of 1/2
    double raw = 0.0;     // before rounding
    double defect = 0.0;  // |raw - value|, plus refinement disagreement where measured
};

double round_half(double x);

// winding of the characteristic line field (theta mod pi) along a loop, in units of one turn
HalfInteger loop_index(const SurfaceProblem& pr, const Polyline& loop);

// lifted winding of a sampled mod-pi angle sequence; throws LiftJump on steps of pi/2 or more
double lifted_turns(const std::vector<double>& angles);

// index of an isolated tangency of the line field with the boundary, from the doubled
// neighbourhood; radius 0 picks 2% of the boundary bounding-box diagonal
HalfInteger boundary_tangency_index(const SurfaceProblem& pr, const Polyline& boundary, Vec2 p,
                                    double radius = 0.0);

struct TangencyIndex {
    int loop = 0;
    Vec2 point;
    HalfInteger index;
};

struct IndexReport {
    std::vector<HalfInteger> interior_indices;
    std::vector<TangencyIndex> boundary_indices;
    std::vector<double> loop_sums;  // index(C_j) per boundary loop
    int component_count = 0;
    int euler_lhs = 0;  // Euler characteristic of the planar domain
    double euler_rhs = 0.0;
    double identity_residual = 0.0;
    bool declared = false;
    bool no_singular_set = false;
};

// tangency points of the line field with one boundary loop, refined by bisection
std::vector<Vec2> find_tangencies(const SurfaceProblem& pr, const Polyline& loop, int samples = 4000);

IndexReport euler_identity_check(const SurfaceProblem& pr, const std::vector<Polyline>& boundary_loops,
                                 const SingularReport& singular);
IndexReport euler_identity_declared(const IndexTruth& truth);

}  // namespace heis
