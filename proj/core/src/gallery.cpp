#include "heis/gallery.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace heis {

const char* gallery_name(GalleryId id) {
    switch (id) {
        case GalleryId::RadialPlane: return "RadialPlane";
        case GalleryId::Ex4_1: return "Ex4_1";
        case GalleryId::Ex4_2: return "Ex4_2";
        case GalleryId::Ex4_3: return "Ex4_3";
        case GalleryId::Ex4_4: return "Ex4_4";
        case GalleryId::ConstantField: return "ConstantField";
        case GalleryId::Ex7_2Domain: return "Ex7_2Domain";
    }
    return "Unknown";
}

std::vector<GalleryId> all_gallery_ids() {
    return {GalleryId::RadialPlane, GalleryId::Ex4_1, GalleryId::Ex4_2, GalleryId::Ex4_3,
            GalleryId::Ex4_4, GalleryId::ConstantField, GalleryId::Ex7_2Domain};
}

std::optional<GalleryId> gallery_id_from_name(const std::string& name) {
    for (GalleryId id : all_gallery_ids())
        if (name == gallery_name(id)) return id;
    return std::nullopt;
}

// ---------------------------------------------------------------- profiles

namespace profiles {

double ex42_alpha(double t) { return kPi / 4 * std::tanh(4 * t / kPi); }
double ex42_dalpha(double t) {
    double th = std::tanh(4 * t / kPi);
    return 1.0 - th * th;
}
double ex42_beta(double t) { return t * t / (1 + t); }
double ex42_dbeta(double t) { return (t * t + 2 * t) / ((1 + t) * (1 + t)); }

double ex44_alpha(double t) { return t * (1 - t) * (1 - 2 * t); }
double ex44_dalpha(double t) { return 1 - 6 * t + 6 * t * t; }

namespace {

double bump(double s) {
    if (s <= 0 || s >= 1) return 0.0;
    return std::exp(-1.0 / (s * (1 - s)));
}

constexpr std::array<double, 8> kGx = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                       -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                       0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGw = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                       0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                       0.2223810344533745, 0.1012285362903763};

double gauss(double a, double b) {
    double m = 0.5 * (a + b), r = 0.5 * (b - a), acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += kGw[i] * bump(m + r * kGx[i]);
    return acc * r;
}

struct BumpTable {
    static constexpr int kPanels = 4096;
    std::vector<double> cum;
    double total = 0.0;
    BumpTable() : cum(kPanels + 1, 0.0) {
        for (int k = 0; k < kPanels; ++k)
            cum[k + 1] = cum[k] + gauss(static_cast<double>(k) / kPanels, static_cast<double>(k + 1) / kPanels);
        total = cum[kPanels];
    }
    double integral(double t) const {
        if (t <= 0) return 0.0;
        if (t >= 1) return total;
        int k = std::min(static_cast<int>(t * kPanels), kPanels - 1);
        return cum[k] + gauss(static_cast<double>(k) / kPanels, t);
    }
};

const BumpTable& table() {
    static const BumpTable tbl;
    return tbl;
}

}  // namespace

double ex44_bump_integral() { return table().total; }

double ex44_beta(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    // symmetric evaluation keeps beta(1 - t) = 1 - beta(t) to rounding
    if (t > 0.5) return 1.0 - table().integral(1.0 - t) / table().total;
    return table().integral(t) / table().total;
}

double ex44_dbeta(double t) { return bump(t) / table().total; }

}  // namespace profiles

// ---------------------------------------------------------------- chart base

ParamPoint Chart::invert(Vec2 p) const {
    int region = region_of(p);
    if (!parametrized(region)) throw Error(ErrorCode::OutsideRegion, "point lies in an unparametrized region");
    ParamPoint pp = guess(region, p);
    MapEval me = map_eval(region, pp.a, pp.b);
    double res = norm(me.X - p);
    for (int it = 0; it < 30 && res > 1e-15 * scale; ++it) {
        Vec2 r = me.X - p;
        double det = me.Xa.x * me.Xb.y - me.Xb.x * me.Xa.y;
        if (std::fabs(det) < 1e-300) break;
        double da = (-r.x * me.Xb.y + r.y * me.Xb.x) / det;
        double db = (-me.Xa.x * r.y + me.Xa.y * r.x) / det;
        ParamPoint cand{region, pp.a + da, pp.b + db};
        MapEval mc = map_eval(region, cand.a, cand.b);
        double rc = norm(mc.X - p);
        if (!(rc < res)) break;
        pp = cand;
        me = mc;
        res = rc;
    }
    if (!(res <= 1e-10 * scale))
        throw Error(ErrorCode::NewtonDiverged, "inversion residual " + std::to_string(res));
    return pp;
}

Jet Chart::u_from_params(const ParamPoint& pp) const {
    MapEval me = map_eval(pp.region, pp.a, pp.b);
    double det = me.Xa.x * me.Xb.y - me.Xb.x * me.Xa.y;
    Jet j;
    j.v = me.u;
    j.dx = (me.ua * me.Xb.y - me.ub * me.Xa.y) / det;
    j.dy = (me.Xa.x * me.ub - me.Xb.x * me.ua) / det;
    return j;
}

Jet Chart::eval(Vec2 p) const {
    if (auto sp = special_point(p)) return *sp;
    int region = region_of(p);
    if (!parametrized(region)) return trivial_u(region, p);
    return u_from_params(invert(p));
}

Vec2 Chart::side_gradient(const SeamSide& s) const {
    Jet j = s.param ? u_from_params(s.pp) : trivial_u(s.region, s.p);
    return {j.dx, j.dy};
}

namespace {

// root of a function with g(lo) and g(hi) of opposite sign
template <class G>
double bisect(G g, double lo, double hi) {
    double glo = g(lo);
    if (glo == 0) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::fabs(hi)); ++it) {
        double m = 0.5 * (lo + hi);
        double gm = g(m);
        if (gm == 0) return m;
        if ((gm < 0) == (glo < 0)) {
            lo = m;
            glo = gm;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

Chart::SeamSide param_side(int region, double a, double b) { return {region, true, {region, a, b}, {}}; }
Chart::SeamSide trivial_side(int region, Vec2 p) { return {region, false, {}, p}; }

// ---------------------------------------------------------------- Ex4_1

class Ex41Chart final : public Chart {
public:
    Ex41Chart(AngleProfile up, AngleProfile lo, bool closed_form)
        : up_(std::move(up)), lo_(std::move(lo)), closed_(closed_form) {}

    int region_of(Vec2 p) const override { return p.y > 0 ? 0 : 1; }
    bool parametrized(int) const override { return true; }

    void trig(int region, double x0, double& sn, double& cs, double& dth) const {
        if (closed_) {
            double q = std::sqrt(1 + x0 * x0);
            sn = 1 / q;
            cs = region == 0 ? x0 / q : -x0 / q;
            dth = region == 0 ? -1 / (q * q) : 1 / (q * q);
            return;
        }
        const AngleProfile& pf = region == 0 ? up_ : lo_;
        double th = pf.theta(x0);
        sn = std::sin(th);
        cs = std::cos(th);
        dth = pf.dtheta(x0);
    }

    MapEval map_eval(int region, double x0, double s) const override {
        double sn, cs, dth;
        trig(region, x0, sn, cs, dth);
        MapEval me;
        me.X = {x0 + s * sn, -s * cs};
        me.Xa = {1 + s * cs * dth, s * sn * dth};
        me.Xb = {sn, -cs};
        me.u = -x0 * me.X.y;
        me.ua = -me.X.y - x0 * me.Xa.y;
        me.ub = -x0 * me.Xb.y;
        return me;
    }

    ParamPoint guess(int region, Vec2 p) const override {
        if (p.y == 0) return p.x < 0 ? ParamPoint{region, p.x, 0.0} : ParamPoint{region, 0.0, p.x};
        if (closed_) {
            double yy = region == 0 ? p.y : -p.y;
            double disc = std::sqrt(p.x * p.x + 4 * yy);
            double x0 = p.x < 0 ? 0.5 * (p.x - disc) : -2 * yy / (p.x + disc);
            double s = (p.x - x0) * std::sqrt(1 + x0 * x0);
            return {region, x0, s};
        }
        auto g = [&](double x0) {
            double sn, cs, dth;
            trig(region, x0, sn, cs, dth);
            return -(p.x - x0) * cs - p.y * sn;
        };
        double L = 1.0;
        double g0 = g(0.0);
        while ((g(-L) < 0) == (g0 < 0) && L < 1e8) L *= 2;
        double x0 = bisect(g, -L, 0.0);
        double sn, cs, dth;
        trig(region, x0, sn, cs, dth);
        return {region, x0, (p.x - x0) * sn - p.y * cs};
    }

    Jet trivial_u(int, Vec2) const override { return {}; }

    std::optional<Jet> special_point(Vec2 p) const override {
        if (p.x == 0 && p.y == 0) return Jet{};
        return std::nullopt;
    }

    std::vector<Seam> seams() const override {
        return {
            {"negative x-axis", [](double w) { return std::pair{param_side(0, -2 * w, 0), param_side(1, -2 * w, 0)}; }},
            {"positive x-axis", [](double w) { return std::pair{param_side(0, 0, w), param_side(1, 0, w)}; }},
        };
    }

private:
    AngleProfile up_, lo_;
    bool closed_;
};

// ---------------------------------------------------------------- Ex4_2 / Ex4_3

class Ex42Chart final : public Chart {
public:
    explicit Ex42Chart(bool lower_ab) : ab_(lower_ab) {}

    enum { I = 0, II = 1, III = 2, IV = 3, V = 4, A = 4, B = 5 };

    int region_of(Vec2 p) const override {
        if (p.y <= 0) {
            if (!ab_) return V;
            return p.x > 0 ? A : B;
        }
        if (p.x >= p.y) return I;
        if (p.x > 0) return II;
        if (p.y > -p.x) return III;
        return IV;
    }
    bool parametrized(int region) const override { return ab_ || region != V; }

    MapEval map_eval(int region, double s, double t) const override {
        using namespace profiles;
        double al = ex42_alpha(t), dal = ex42_dalpha(t), be = ex42_beta(t), dbe = ex42_dbeta(t);
        double ca = std::cos(al), sa = std::sin(al);
        MapEval me;
        switch (region) {
            case I:
                me.X = {s * ca + be, s * sa + be};
                me.Xa = {ca, sa};
                me.Xb = {-s * sa * dal + dbe, s * ca * dal + dbe};
                me.u = s * be * (ca - sa);
                me.ua = be * (ca - sa);
                me.ub = s * (dbe * (ca - sa) - be * (sa + ca) * dal);
                break;
            case II:
                me.X = {s * sa + be, s * ca + be};
                me.Xa = {sa, ca};
                me.Xb = {s * ca * dal + dbe, -s * sa * dal + dbe};
                me.u = s * be * (sa - ca);
                me.ua = be * (sa - ca);
                me.ub = s * (dbe * (sa - ca) + be * (ca + sa) * dal);
                break;
            case III:
                me.X = {-s * sa - be, s * ca + be};
                me.Xa = {-sa, ca};
                me.Xb = {-s * ca * dal - dbe, -s * sa * dal + dbe};
                me.u = s * be * (ca - sa);
                me.ua = be * (ca - sa);
                me.ub = s * (dbe * (ca - sa) - be * (sa + ca) * dal);
                break;
            case IV:
                me.X = {-s * ca - be, s * sa + be};
                me.Xa = {-ca, sa};
                me.Xb = {s * sa * dal - dbe, s * ca * dal + dbe};
                me.u = s * be * (sa - ca);
                me.ua = be * (sa - ca);
                me.ub = s * (dbe * (sa - ca) + be * (ca + sa) * dal);
                break;
            case A:
                me.X = {s * ca, -s * sa - be};
                me.Xa = {ca, -sa};
                me.Xb = {-s * sa * dal, -s * ca * dal - dbe};
                me.u = -s * be * ca;
                me.ua = -be * ca;
                me.ub = -s * (dbe * ca - be * sa * dal);
                break;
            case B:
                me.X = {-s * ca, -s * sa - be};
                me.Xa = {-ca, -sa};
                me.Xb = {s * sa * dal, -s * ca * dal - dbe};
                me.u = s * be * ca;
                me.ua = be * ca;
                me.ub = s * (dbe * ca - be * sa * dal);
                break;
            default: break;
        }
        return me;
    }

    // parameters of (X, Y) with X >= Y > 0 under the region-I map
    static ParamPoint solve_I(double X, double Y) {
        using namespace profiles;
        auto g = [&](double t) {
            double al = ex42_alpha(t), be = ex42_beta(t);
            return (X - be) * std::sin(al) - (Y - be) * std::cos(al);
        };
        double T = 1.0;
        while (g(T) <= 0 && T < 1e8) T *= 2;
        double t = bisect(g, 0.0, T);
        double al = ex42_alpha(t), be = ex42_beta(t);
        return {I, (X - be) * std::cos(al) + (Y - be) * std::sin(al), t};
    }

    // parameters of (X, Y) with X >= 0, Y <= 0 under the region-A map
    static ParamPoint solve_A(double X, double Y) {
        using namespace profiles;
        auto g = [&](double t) {
            double al = ex42_alpha(t), be = ex42_beta(t);
            return -X * std::sin(al) - (Y + be) * std::cos(al);
        };
        double T = 1.0;
        while (g(T) >= 0 && T < 1e8) T *= 2;
        double t = bisect(g, 0.0, T);
        double al = ex42_alpha(t);
        return {A, X / std::cos(al), t};
    }

    ParamPoint guess(int region, Vec2 p) const override {
        ParamPoint q;
        switch (region) {
            case I: q = solve_I(p.x, p.y); break;
            case II: q = solve_I(p.y, p.x); break;
            case III: q = solve_I(p.y, -p.x); break;
            case IV: q = solve_I(-p.x, p.y); break;
            case A: q = solve_A(p.x, p.y); break;
            case B: q = solve_A(-p.x, p.y); break;
            default: break;
        }
        q.region = region;
        return q;
    }

    Jet trivial_u(int, Vec2) const override { return {}; }

    std::optional<Jet> special_point(Vec2 p) const override {
        if (p.x == 0 && p.y == 0) return Jet{};
        return std::nullopt;
    }

    std::vector<Seam> seams() const override {
        std::vector<Seam> out = {
            {"diagonal", [](double w) { return std::pair{param_side(I, 0, 3 * w), param_side(II, 0, 3 * w)}; }},
            {"positive y-axis", [](double w) { return std::pair{param_side(II, 2 * w, 0), param_side(III, 2 * w, 0)}; }},
            {"anti-diagonal", [](double w) { return std::pair{param_side(III, 0, 3 * w), param_side(IV, 0, 3 * w)}; }},
        };
        if (!ab_) {
            out.push_back({"positive x-axis", [](double w) {
                               return std::pair{param_side(I, 2 * w, 0), trivial_side(V, {2 * w, 0})};
                           }});
            out.push_back({"negative x-axis", [](double w) {
                               return std::pair{param_side(IV, 2 * w, 0), trivial_side(V, {-2 * w, 0})};
                           }});
        } else {
            out.push_back({"positive x-axis", [](double w) { return std::pair{param_side(I, 2 * w, 0), param_side(A, 2 * w, 0)}; }});
            out.push_back({"negative x-axis", [](double w) { return std::pair{param_side(IV, 2 * w, 0), param_side(B, 2 * w, 0)}; }});
            out.push_back({"negative y-axis", [](double w) { return std::pair{param_side(A, 0, 3 * w), param_side(B, 0, 3 * w)}; }});
        }
        return out;
    }

private:
    bool ab_;
};

// ---------------------------------------------------------------- Ex4_4

class Ex44Chart final : public Chart {
public:
    enum { Right = 0, Left = 1, Lower = 2, Upper = 3 };

    int region_of(Vec2 p) const override {
        if (p.y <= 0) return Lower;
        if (p.y >= 1) return Upper;
        return p.x > 0 ? Right : Left;
    }
    bool parametrized(int region) const override { return region == Right || region == Left; }

    MapEval map_eval(int region, double s, double t) const override {
        using namespace profiles;
        double al = ex44_alpha(t), dal = ex44_dalpha(t), be = ex44_beta(t), dbe = ex44_dbeta(t);
        double ca = std::cos(al), sa = std::sin(al);
        double sg = region == Right ? 1.0 : -1.0;
        MapEval me;
        me.X = {s * ca, sg * s * sa + be};
        me.Xa = {ca, sg * sa};
        me.Xb = {-s * sa * dal, sg * s * ca * dal + dbe};
        me.u = s * be * ca;
        me.ua = be * ca;
        me.ub = s * (dbe * ca - be * sa * dal);
        return me;
    }

    ParamPoint guess(int region, Vec2 p) const override {
        using namespace profiles;
        double sg = region == Right ? 1.0 : -1.0;
        auto g = [&](double t) { return sg * p.x * std::tan(ex44_alpha(t)) + ex44_beta(t) - p.y; };
        double t = bisect(g, 0.0, 1.0);
        return {region, p.x / std::cos(ex44_alpha(t)), t};
    }

    Jet trivial_u(int region, Vec2 p) const override {
        if (region == Upper) return {p.x, 1.0, 0.0};
        return {};
    }

    std::vector<Seam> seams() const override {
        return {
            {"L", [](double w) { return std::pair{param_side(Right, 0, w), param_side(Left, 0, w)}; }},
            {"bottom right", [](double w) { return std::pair{param_side(Right, 0.5 * w, 0), trivial_side(Lower, {0.5 * w, 0})}; }},
            {"bottom left", [](double w) { return std::pair{param_side(Left, -0.5 * w, 0), trivial_side(Lower, {-0.5 * w, 0})}; }},
            {"top right", [](double w) { return std::pair{param_side(Right, 0.5 * w, 1), trivial_side(Upper, {0.5 * w, 1})}; }},
            {"top left", [](double w) { return std::pair{param_side(Left, -0.5 * w, 1), trivial_side(Upper, {-0.5 * w, 1})}; }},
        };
    }
};

SurfaceProblem heis_problem(ScalarField u, Window w) {
    PlanarVectorField F{ScalarField::expr("-y", w), ScalarField::expr("x", w)};
    return make_problem(std::move(u), std::move(F), ScalarField::constant(0.0, w));
}

GalleryMember chart_member(GalleryId id, std::shared_ptr<Chart> chart, Window w) {
    chart->scale = w.diagonal();
    GalleryMember m;
    m.id = id;
    m.name = gallery_name(id);
    std::shared_ptr<const Chart> c = chart;
    m.chart = c;
    m.problem = heis_problem(ScalarField::native([c](Vec2 p) { return c->eval(p); }, w,
                                                 std::string("builtin:") + gallery_name(id)),
                             w);
    return m;
}

}  // namespace

GalleryMember build_ex4_1_profiles(AngleProfile upper, AngleProfile lower) {
    Window w{-2.0, 1.0, -1.5, 1.5};
    auto chart = std::make_shared<Ex41Chart>(std::move(upper), std::move(lower), false);
    GalleryMember m = chart_member(GalleryId::Ex4_1, chart, w);
    m.name = "Ex4_1(custom profiles)";
    m.truth.singular_set = {{{w.x0, 0.0}, {0.0, 0.0}}};
    m.truth.characteristic_family = "rays from (x0, 0), x0 < 0, with caller profiles";
    return m;
}

GalleryMember build(GalleryId id) {
    GalleryMember m;
    switch (id) {
        case GalleryId::RadialPlane:
        case GalleryId::Ex7_2Domain: {
            Window w = id == GalleryId::RadialPlane ? Window{-1, 1, -1, 1} : Window{-3, 3, -3, 3};
            m.id = id;
            m.name = gallery_name(id);
            m.problem = heis_problem(ScalarField::constant(0.0, w), w);
            m.truth.singular_set = {{{0, 0}, {0, 0}}};
            m.truth.characteristic_family = "rays emitted from the origin";
            if (id == GalleryId::RadialPlane) {
                m.truth.limits = {{{0.5, 0.3}, -1, "HalfCurl"}, {{-0.2, -0.6}, -1, "HalfCurl"}};
            } else {
                m.has_u = false;
                m.truth.singular_set.clear();
                m.truth.characteristic_family = "declared configuration; no closed form";
                m.truth.index = IndexTruth{3, {-2.0, -2.0, 0.0}, -1};
            }
            return m;
        }
        case GalleryId::Ex4_1: {
            Window w{-2.0, 1.0, -1.5, 1.5};
            AngleProfile up{[](double x0) { return kPi / 2 - std::atan(x0); },
                            [](double x0) { return -1.0 / (1 + x0 * x0); }};
            AngleProfile lo{[](double x0) { return kPi / 2 + std::atan(x0); },
                            [](double x0) { return 1.0 / (1 + x0 * x0); }};
            m = chart_member(id, std::make_shared<Ex41Chart>(up, lo, true), w);
            m.truth.singular_set = {{{w.x0, 0.0}, {0.0, 0.0}}};
            m.truth.characteristic_family =
                "rays from (x0, 0), x0 < 0, at angles pi/2 -+ arctan(x0); the positive x-axis is the ray from the origin";
            Vec2 up_start = m.chart->forward({0, -1.0, 0.5});
            Vec2 lo_start = m.chart->forward({1, -0.5, 0.4});
            m.truth.limits = {{up_start, -1, "FullCurl"}, {lo_start, -1, "FullCurl"}, {{0.5, 0.0}, -1, "HalfCurl"}};
            return m;
        }
        case GalleryId::Ex4_2:
        case GalleryId::Ex4_3: {
            Window w{-2.0, 2.0, -2.0, 2.0};
            bool ab = id == GalleryId::Ex4_3;
            m = chart_member(id, std::make_shared<Ex42Chart>(ab), w);
            m.truth.singular_set = {{{0, 0}, {2, 2}}, {{0, 0}, {-2, 2}}};
            if (ab) m.truth.singular_set.push_back({{0, 0}, {0, -2}});
            m.truth.characteristic_family = ab ? "rays leaving three singular half-lines from the origin"
                                               : "rays leaving two singular half-lines; radial rays in y < 0";
            Vec2 s1 = m.chart->forward({0, 0.5, 1.0});
            m.truth.limits = {{s1, -1, "FullCurl"}};
            if (ab) m.truth.limits.push_back({m.chart->forward({4, 0.5, 1.0}), -1, "FullCurl"});
            else m.truth.limits.push_back({{0.3, -0.4}, -1, "HalfCurl"});
            return m;
        }
        case GalleryId::Ex4_4: {
            Window w{-0.5, 0.5, -0.5, 1.5};
            m = chart_member(id, std::make_shared<Ex44Chart>(), w);
            m.truth.singular_set = {{{0, 0}, {0, 1}}};
            m.truth.characteristic_family = "rays leaving {0} x [0,1] to both sides; radial about (0,0) and (0,1) outside the strip";
            m.truth.limits = {{m.chart->forward({0, 0.3, 0.4}), -1, "FullCurl"},
                              {m.chart->forward({1, -0.3, 0.7}), -1, "FullCurl"}};
            return m;
        }
        case GalleryId::ConstantField: {
            Window w{0.5, 2.5, -1.0, 1.0};
            m.id = id;
            m.name = gallery_name(id);
            PlanarVectorField F{ScalarField::constant(0.0, w), ScalarField::constant(0.0, w)};
            m.problem = make_problem(ScalarField::expr("x^2/2", w), F, ScalarField::constant(0.0, w));
            m.truth.characteristic_family = "vertical lines (N = (1, 0))";
            return m;
        }
    }
    return m;
}

ParamPoint invert_parametrization(const GalleryMember& m, Vec2 p) {
    if (!m.chart) throw Error(ErrorCode::OutsideRegion, "member has no parametrization");
    if (!m.problem.window.contains(p)) throw Error(ErrorCode::OutsideRegion, "point outside the member window");
    return m.chart->invert(p);
}

Vec2 forward_map(const GalleryMember& m, const ParamPoint& pp) {
    if (!m.chart) throw Error(ErrorCode::OutsideRegion, "member has no parametrization");
    return m.chart->forward(pp);
}

std::vector<SeamSample> seam_samples(const GalleryMember& m, int per_seam) {
    std::vector<SeamSample> out;
    if (!m.chart) return out;
    for (const auto& seam : m.chart->seams()) {
        for (int k = 0; k < per_seam; ++k) {
            double w = (k + 0.5) / per_seam;
            auto [a, b] = seam.side(w);
            SeamSample s;
            s.seam = seam.name;
            s.point = a.param ? m.chart->forward(a.pp) : a.p;
            s.grad_a = m.chart->side_gradient(a);
            s.grad_b = m.chart->side_gradient(b);
            out.push_back(s);
        }
    }
    return out;
}

double distance_to_truth(const GalleryMember& m, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& piece : m.truth.singular_set) {
        Vec2 ab = piece.b - piece.a;
        double L2 = dot(ab, ab);
        double t = L2 > 0 ? std::clamp(dot(p - piece.a, ab) / L2, 0.0, 1.0) : 0.0;
        best = std::min(best, norm(piece.a + ab * t - p));
    }
    return best;
}

}  // namespace heis
