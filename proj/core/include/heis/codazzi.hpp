#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "heis/charflow.hpp"

namespace heis {

// per-node derivatives of D on a uniform arc-length grid; Dprime is N_perp D, i.e.
// the travel derivative times the curve direction
struct CodazziTrace {
    std::vector<CharState> nodes;  // resampled, uniform in sigma
    int direction = 1;
    double spacing = 0.0;
    std::vector<double> Dprime;
    std::vector<double> Dsecond;
    std::vector<double> residual_general;  // empty without a problem
    std::vector<double> residual_minimal;  // empty unless H = 0 and curl F = 2
    std::vector<double> first_integral_c;  // +inf where |D' - 1| < 1e-9
};

// problem may be null: then only residual_minimal is filled, treating the data as a
// p-minimal graph in the Heisenberg group
CodazziTrace differentiate_D(const CharCurve& curve, const SurfaceProblem* problem = nullptr);

// D' and D'' with central three-point stencils, one-sided second-order at the ends
void uniform_derivatives(const std::vector<double>& D, double h, std::vector<double>& d1,
                         std::vector<double>& d2);

struct Spread {
    double mean = 0.0;
    double relative_stdev = 0.0;
    int samples = 0;
};
// statistics of the finite first-integral values, skipping `trim` nodes at each end
Spread first_integral_spread(const CodazziTrace& t, int trim = 0);

enum class LimitKind { HalfCurl, FullCurl, Inconclusive };
const char* limit_kind_name(LimitKind k);

struct LimitVerdict {
    LimitKind kind = LimitKind::Inconclusive;
    double value = 0.0;
    double target_half = 0.0;
    double target_full = 0.0;
    double confidence = 0.0;
    Vec2 endpoint;
};

LimitVerdict classify_singular_limit(const SurfaceProblem& pr, const CharCurve& curve);
bool theoremB_direction_check(const SurfaceProblem& pr, const CharCurve& curve);

struct GeneralOde {
    std::function<double(double)> E1;
    std::function<double(double)> l;
    std::function<double(double)> m;
    std::function<double(double, double)> E2;
};
// throws ConfigInvalid unless E1(0) > 0, l(0) < m(0), E2(0, 0) = 0
GeneralOde make_general_ode(std::function<double(double)> E1, std::function<double(double)> l,
                            std::function<double(double)> m, std::function<double(double, double)> E2);

struct OdeSample {
    double rho = 0.0;
    double v = 0.0;
    double vprime = 0.0;
};
struct OdeTrajectory {
    std::vector<OdeSample> samples;  // rho decreasing
    bool hit_zero = false;           // stopped because v reached 0
    bool diverged = false;           // v or v' overflowed
    double rho_min = 0.0;
};

OdeTrajectory integrate_general_ode(const GeneralOde& ode, double rho_end, double v_end, double vprime_end,
                                    int steps = 4000);

struct GeneralVerdict {
    LimitVerdict verdict;  // target_half = l(0), target_full = m(0)
    bool v_to_zero = false;
    double v_limit = 0.0;
};
GeneralVerdict classify_general_limit(const OdeTrajectory& traj, const GeneralOde& ode);

// synthetic straight characteristic along the x-axis with prescribed D(sigma) samples
CharCurve synthetic_curve(const std::function<double(double)>& D, double s0, double length, double h);

}  // namespace heis
