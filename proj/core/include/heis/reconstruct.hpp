#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heis/expr.hpp"
#include "heis/fields.hpp"

namespace heis {

using PatchFn = std::function<Jet(Vec2)>;  // value and (xi, eta) partials

// intrinsic data on a square-celled (xi, eta) grid; n nodes per side
struct IntrinsicPatch {
    Window domain;
    int n = 101;
    PatchFn V1, V2, D, H;
    std::function<Vec2(Vec2)> P_seed;  // P on the seed line xi = centre; empty selects rot90(V)/|V|
    double gate = 1e-3;

    double hxi() const { return domain.width() / (n - 1); }
    double heta() const { return domain.height() / (n - 1); }
    Vec2 node(int i, int j) const { return {domain.x0 + i * hxi(), domain.y0 + j * heta()}; }
    Vec2 V(Vec2 q) const { return {V1(q).v, V2(q).v}; }
    double VD(Vec2 q) const;  // V(D), exact from the jets
};

IntrinsicPatch patch_from_expressions(const std::string& v1, const std::string& v2, const std::string& d,
                                      const std::string& h, Window domain, int n = 101);

// node-indexed field, index j * n + i
template <class T>
using NodeField = std::vector<T>;

NodeField<Vec2> solve_P(const IntrinsicPatch& patch);
// P along V-integral curves from a seed, transported through lambda in [0, T]
Vec2 transport_P(const IntrinsicPatch& patch, Vec2 start, Vec2 P0, double T, int steps, double* g_out = nullptr);

struct CodazziCheck {
    double max_residual = 0.0;
    NodeField<double> residual;  // NaN on the outer ring of nodes
};
CodazziCheck check_codazzi(const IntrinsicPatch& patch, const NodeField<Vec2>& P);
CodazziCheck check_codazzi(const IntrinsicPatch& patch);

struct ReconstructionPatch {
    IntrinsicPatch patch;
    NodeField<Vec2> P;
    NodeField<double> f, g, s, t, x, y, theta, u;
    NodeField<Vec2> grad_x, grad_y, grad_theta;  // (xi, eta) partials
    NodeField<double> K_residual;                // NaN within two nodes of the edge
    NodeField<double> codazzi_residual;
    double max_K = 0.0;
    double max_codazzi = 0.0;
    double max_cell_defect = 0.0;
    double min_jacobian = 0.0;
};

// throws NotIntegrable, NonPositiveFactor, OrientationFlip or FoldedChart
ReconstructionPatch build_coordinates(const IntrinsicPatch& patch);

struct EmitOptions {
    int nodes = 121;
    double u0 = 0.0;  // value of u at the base node
};

struct EmittedGraph {
    SurfaceProblem problem;
    GridData u_grid;
    Window rect;
    double max_D_error = 0.0;       // |D_input - D_emitted| over interior nodes
    double max_pde_residual = 0.0;  // |div N - H|
    double max_divDV_defect = 0.0;  // |div(D V) - 2|
};

// u along the central xi line from the contact condition with D, then along V-curves
void integrate_u(ReconstructionPatch& rp, double u0);
EmittedGraph emit_graph(ReconstructionPatch& rp, const EmitOptions& opt = {});

}  // namespace heis
