#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace koitervi {

using Vec3 = std::array<double, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;

double dot(const Vec3& u, const Vec3& v);
Vec3 cross(const Vec3& u, const Vec3& v);
double norm(const Vec3& u);

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ImmersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonEllipticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ChartKind { SphereGraph, EllipsoidGraph, Plate };

/// Analytic chart over the square (-c,c)^2.  Graph charts realize the lower
/// cap of a sphere or ellipsoid as z = f(y1,y2), with all derivatives of f
/// up to third order available in closed form.
class Chart {
public:
    static Chart sphere_graph(double radius, double half_width);
    static Chart ellipsoid_graph(double a1, double a2, double a3, double half_width);
    static Chart plate(double half_width);

    ChartKind kind() const { return kind_; }
    double half_width() const { return c_; }
    bool elliptic() const { return kind_ != ChartKind::Plate; }
    double radius() const { return params_[0]; }

    bool inside(double y1, double y2) const;

    // height function of the graph and its partials; indices are 0-based
    double f(double y1, double y2) const;
    double f1(const std::array<double, 2>& y, int a) const;
    double f2(const std::array<double, 2>& y, int a, int b) const;
    double f3(const std::array<double, 2>& y, int a, int b, int t) const;

    Vec3 position(const std::array<double, 2>& y) const;

private:
    Chart(ChartKind kind, std::array<double, 3> params, double c);
    void validate() const;

    ChartKind kind_;
    std::array<double, 3> params_;  // sphere: {R,0,0}; ellipsoid: {A1,A2,A3}
    double c_;
};

/// First and second fundamental forms, Christoffel symbols, area element and
/// Gaussian curvature at one parameter point.
struct GeometryPointData {
    std::array<double, 2> y;
    std::array<Vec3, 2> a_cov;   // a_alpha
    Vec3 a3;                     // unit normal
    std::array<Vec3, 2> a_con;   // a^alpha
    Mat2 a_cov_form;             // a_{ab}
    Mat2 a_con_form;             // a^{ab}
    Mat2 b_cov;                  // b_{ab}
    Mat2 b_mixed;                // b^b_a  (b_mixed[a][b] = b^b_a)
    double christoffel[2][2][2]; // christoffel[s][a][b] = Gamma^s_{ab}
    double sqrt_a = 0.0;
    double gauss_K = 0.0;
};

/// First parameter derivatives of the curvature data, used by the
/// change-of-curvature tensor.  All entries come from third chart derivatives.
struct GeometryDerivs {
    // d_gamma[t][s][a][b] = d_t Gamma^s_{ab}
    double d_gamma[2][2][2][2];
    // d_b_mixed[t][a][b] = d_t (b^b_a)
    double d_b_mixed[2][2][2];
};

GeometryPointData eval_geometry(const Chart& chart, const std::array<double, 2>& y);
GeometryDerivs eval_geometry_derivs(const Chart& chart, const std::array<double, 2>& y);

/// Minimum of K over an n x n sample grid; throws NonEllipticError (naming the
/// failing point) if the minimum is not strictly positive.
double assert_elliptic(const Chart& chart, int n);

struct LameConstants {
    double lambda = 0.0;
    double mu = 1.0;
    LameConstants(double l, double m);
};

/// Scaled three-dimensional quantities at (y, x3, eps) for the volume chart
/// Theta = theta + eps*x3*a3.
struct ScaledVolumeData {
    double eps = 0.0;
    double x3 = 0.0;
    std::array<Vec3, 3> g_cov;
    std::array<Vec3, 3> g_con;
    double gamma3d[3][3][3];  // gamma3d[p][i][j] = Gamma^p_{ij}(eps)
    double g_det = 0.0;
    double A4[3][3][3][3];        // A^{ijkl}(eps)
    double A4_limit[3][3][3][3];  // A^{ijkl}(0)
};

ScaledVolumeData eval_scaled_tensors(const Chart& chart, const std::array<double, 2>& y,
                                     double x3, double eps, const LameConstants& lame);

}  // namespace koitervi
