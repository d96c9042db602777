#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heis/fields.hpp"

namespace heis {

enum class GalleryId { RadialPlane, Ex4_1, Ex4_2, Ex4_3, Ex4_4, ConstantField, Ex7_2Domain };

const char* gallery_name(GalleryId id);
std::optional<GalleryId> gallery_id_from_name(const std::string& name);
std::vector<GalleryId> all_gallery_ids();

// chart parameters: (x0, s) for Ex4_1, (s, t) for Ex4_2 .. Ex4_4
struct ParamPoint {
    int region = -1;
    double a = 0.0;
    double b = 0.0;
};

struct SeamSample {
    std::string seam;
    Vec2 point;
    Vec2 grad_a;
    Vec2 grad_b;
};

// one branch of a piecewise parametrized graph
class Chart {
public:
    struct MapEval {
        Vec2 X;
        Vec2 Xa, Xb;  // partial derivatives of the forward map
        double u = 0.0, ua = 0.0, ub = 0.0;
    };
    struct SeamSide {
        int region = -1;
        bool param = true;
        ParamPoint pp;
        Vec2 p;
    };
    struct Seam {
        std::string name;
        std::function<std::pair<SeamSide, SeamSide>(double)> side;  // w in (0, 1)
    };

    virtual ~Chart() = default;
    virtual int region_of(Vec2 p) const = 0;
    virtual bool parametrized(int region) const = 0;
    virtual MapEval map_eval(int region, double a, double b) const = 0;
    // bracketing estimate of the parameters of p; refined by Newton afterwards
    virtual ParamPoint guess(int region, Vec2 p) const = 0;
    virtual Jet trivial_u(int region, Vec2 p) const = 0;
    virtual std::vector<Seam> seams() const = 0;
    // points where the chart Jacobian degenerates but the gradient is known
    virtual std::optional<Jet> special_point(Vec2 p) const { (void)p; return std::nullopt; }

    double scale = 1.0;  // window diagonal

    ParamPoint invert(Vec2 p) const;
    Vec2 forward(const ParamPoint& pp) const { return map_eval(pp.region, pp.a, pp.b).X; }
    Jet u_from_params(const ParamPoint& pp) const;
    Jet eval(Vec2 p) const;
    Vec2 side_gradient(const SeamSide& s) const;
};

struct SingularPiece {
    Vec2 a;
    Vec2 b;  // equal to a for an isolated point
};

struct ExpectedLimit {
    Vec2 start;
    int direction = -1;
    std::string kind;  // HalfCurl or FullCurl
};

struct IndexTruth {
    int components = 0;
    std::vector<double> boundary_indices;  // index(C_j) per boundary loop
    int euler_characteristic = 0;
};

struct GalleryTruth {
    std::vector<SingularPiece> singular_set;
    std::string characteristic_family;
    std::vector<ExpectedLimit> limits;
    std::optional<IndexTruth> index;
};

struct GalleryMember {
    GalleryId id = GalleryId::RadialPlane;
    std::string name;
    SurfaceProblem problem;
    GalleryTruth truth;
    std::shared_ptr<const Chart> chart;  // null for members given by plain expressions
    bool has_u = true;
};

GalleryMember build(GalleryId id);

// Ex4_1 family with caller-chosen angle profiles; mismatched profiles give a non-solution control
struct AngleProfile {
    std::function<double(double)> theta;
    std::function<double(double)> dtheta;
};
GalleryMember build_ex4_1_profiles(AngleProfile upper, AngleProfile lower);

ParamPoint invert_parametrization(const GalleryMember& m, Vec2 p);
Vec2 forward_map(const GalleryMember& m, const ParamPoint& pp);
std::vector<SeamSample> seam_samples(const GalleryMember& m, int per_seam);
// distance from p to the ground-truth singular set
double distance_to_truth(const GalleryMember& m, Vec2 p);

namespace profiles {
double ex42_alpha(double t);
double ex42_dalpha(double t);
double ex42_beta(double t);
double ex42_dbeta(double t);
double ex44_alpha(double t);
double ex44_dalpha(double t);
double ex44_beta(double t);
double ex44_dbeta(double t);
double ex44_bump_integral();
}  // namespace profiles

}  // namespace heis
