#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "koitervi/fem.hpp"

namespace koitervi {

struct ConvexifierSearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar samples on a uniform node grid with spacing h0, origin (ox,oy),
/// row-major storage (j*ni + i).
struct GridField {
    int ni = 0, nj = 0;
    double ox = 0.0, oy = 0.0, h0 = 0.0;
    std::vector<double> v;

    double& at(int i, int j) { return v[static_cast<size_t>(j) * ni + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * ni + i]; }
    double x(int i) const { return ox + i * h0; }
    double y(int j) const { return oy + j * h0; }
};

GridField grid_from_fn(int ni, int nj, double ox, double oy, double h0, const FieldFn& f);

/// Transverse component of a membrane-space vector as a grid field.
GridField grid_from_transverse(const Mesh& mesh, const DofMap& dofmap,
                               const std::vector<double>& u);
GridField grid_from_tangential(const Mesh& mesh, const DofMap& dofmap, int comp,
                               const std::vector<double>& u);

/// Forward quotient (f(y+h e_rho) - f(y))/h on the shrunken grid; h must be a
/// positive integer multiple of the spacing.
GridField diff_forward(const GridField& f, int rho, double h);
/// Backward quotient (f(y) - f(y-h e_rho))/h; the origin shifts by h.
GridField diff_backward(const GridField& f, int rho, double h);
/// Second quotient (f(y+h) - 2f(y) + f(y-h))/h^2.
GridField diff_second(const GridField& f, int rho, double h);

/// Squared discrete norms via bilinear interpolation and cellwise Gauss
/// quadrature.
double grid_l2_sq(const GridField& f);
double grid_h1_sq(const GridField& f);

/// eta3 + rho_coeff * phi1 * delta_{rho h} eta3.  Requires feasibility
/// s_tilde + eta3 >= 0, phi1 in [0,1] supported where the stencil fits, and
/// grid concavity of s_tilde wherever phi1 > 0.
GridField feasible_perturbation(const GridField& eta3, const GridField& s_tilde,
                                const GridField& phi1, int rho, double h, double rho_coeff);

/// A gap expression with analytic first and second derivatives.
struct SmoothField {
    FieldFn f, dx, dy, dxx, dxy, dyy;
};

struct Convexifier {
    std::array<double, 2> y0{};
    double r = 0.0;
    double B = 0.0;
    double B0 = 0.25;
    double U_halfwidth = 0.0;
    double M = 0.0;  // sampled sup of |s|, |grad s|, |hess s|
    double T = 0.0;  // min of s - B on U
};

/// g_tilde(y) = 1 - exp(r(y1-y01) + r(y2-y02))/2.  Searches shift B and rate r
/// so that (-s+B) g_tilde has a positive semidefinite sampled Hessian on the
/// neighbourhood U where g_tilde >= 1/4.
Convexifier build_convexifier(const SmoothField& s_tilde, const std::array<double, 2>& y0,
                              double domain_halfwidth);

double convexifier_g(const Convexifier& cx, double y1, double y2);
/// Hessian of (-s+B) g_tilde at a point.
Mat2 convexifier_hessian(const Convexifier& cx, const SmoothField& s_tilde, double y1, double y2);

/// Cutoff away from the boundary of the square plus discrete bump
/// mollification of radius 1/k; transverse component only.
GridField density_approximant(const GridField& eta3, int k, const GridField& s,
                              double domain_halfwidth);

struct ProbeRow {
    double h = 0.0;
    int rho = 0;
    double norm_h1_tan = 0.0;
    double norm_l2_trans = 0.0;
};

/// Norms of D_{rho h}(phi * zeta) for h = h0 * 2^j, j < levels, both
/// directions; phi must vanish outside the interior patch.
std::vector<ProbeRow> interior_regularity_probe(const Mesh& mesh, const DofMap& dofmap,
                                                const std::vector<double>& zeta,
                                                double patch_halfwidth, const FieldFn& cutoff,
                                                int levels);

}  // namespace koitervi
