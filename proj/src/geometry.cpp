#include "koitervi/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace koitervi {

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double norm(const Vec3& u) { return std::sqrt(dot(u, u)); }

Chart::Chart(ChartKind kind, std::array<double, 3> params, double c)
    : kind_(kind), params_(params), c_(c) {
    validate();
}

Chart Chart::sphere_graph(double radius, double half_width) {
    if (radius <= 0.0 || half_width <= 0.0)
        throw std::invalid_argument("sphere_graph: radius and half_width must be positive");
    return Chart(ChartKind::SphereGraph, {radius, 0.0, 0.0}, half_width);
}

Chart Chart::ellipsoid_graph(double a1, double a2, double a3, double half_width) {
    if (a1 <= 0.0 || a2 <= 0.0 || a3 <= 0.0 || half_width <= 0.0)
        throw std::invalid_argument("ellipsoid_graph: semiaxes and half_width must be positive");
    return Chart(ChartKind::EllipsoidGraph, {a1, a2, a3}, half_width);
}

Chart Chart::plate(double half_width) {
    if (half_width <= 0.0) throw std::invalid_argument("plate: half_width must be positive");
    return Chart(ChartKind::Plate, {0.0, 0.0, 0.0}, half_width);
}

void Chart::validate() const {
    // graph charts must keep the radicand well clear of the pole on the
    // closed square, worst point is the corner (c,c)
    if (kind_ == ChartKind::SphereGraph) {
        double R = params_[0];
        double rad = R * R - 2.0 * c_ * c_;
        if (rad <= 0.0 || std::sqrt(rad) < 0.01 * R * R)
            throw DomainError("sphere_graph: half_width too large for radius (radicand margin)");
    } else if (kind_ == ChartKind::EllipsoidGraph) {
        double u = c_ * c_ / (params_[0] * params_[0]) + c_ * c_ / (params_[1] * params_[1]);
        double rad = 1.0 - u;
        if (rad <= 0.0 || std::sqrt(rad) < 0.01)
            throw DomainError("ellipsoid_graph: half_width too large for semiaxes (radicand margin)");
    }
}

bool Chart::inside(double y1, double y2) const {
    return std::abs(y1) <= c_ && std::abs(y2) <= c_;
}

double Chart::f(double y1, double y2) const {
    switch (kind_) {
        case ChartKind::Plate:
            return 0.0;
        case ChartKind::SphereGraph: {
            double R = params_[0];
            return -std::sqrt(R * R - y1 * y1 - y2 * y2);
        }
        case ChartKind::EllipsoidGraph: {
            double u = (y1 / params_[0]) * (y1 / params_[0]) + (y2 / params_[1]) * (y2 / params_[1]);
            return -params_[2] * std::sqrt(1.0 - u);
        }
    }
    return 0.0;
}

// For the sphere with w = sqrt(R^2-|y|^2):
//   f_a = y_a/w,  f_ab = d_ab/w + y_a y_b/w^3,
//   f_abt = (d_ab y_t + d_at y_b + d_bt y_a)/w^3 + 3 y_a y_b y_t / w^5.
// The ellipsoid is the same with q_a = y_a/A_a^2, v = sqrt(1-u), scaled by A3.

double Chart::f1(const std::array<double, 2>& y, int a) const {
    switch (kind_) {
        case ChartKind::Plate:
            return 0.0;
        case ChartKind::SphereGraph: {
            double R = params_[0];
            double w = std::sqrt(R * R - y[0] * y[0] - y[1] * y[1]);
            return y[a] / w;
        }
        case ChartKind::EllipsoidGraph: {
            double q = y[a] / (params_[a] * params_[a]);
            double u = (y[0] / params_[0]) * (y[0] / params_[0]) + (y[1] / params_[1]) * (y[1] / params_[1]);
            double v = std::sqrt(1.0 - u);
            return params_[2] * q / v;
        }
    }
    return 0.0;
}

double Chart::f2(const std::array<double, 2>& y, int a, int b) const {
    double dab = (a == b) ? 1.0 : 0.0;
    switch (kind_) {
        case ChartKind::Plate:
            return 0.0;
        case ChartKind::SphereGraph: {
            double R = params_[0];
            double w2 = R * R - y[0] * y[0] - y[1] * y[1];
            double w = std::sqrt(w2);
            return dab / w + y[a] * y[b] / (w2 * w);
        }
        case ChartKind::EllipsoidGraph: {
            double qa = y[a] / (params_[a] * params_[a]);
            double qb = y[b] / (params_[b] * params_[b]);
            double qab = dab / (params_[a] * params_[a]);
            double u = (y[0] / params_[0]) * (y[0] / params_[0]) + (y[1] / params_[1]) * (y[1] / params_[1]);
            double v = std::sqrt(1.0 - u);
            return params_[2] * (qab / v + qa * qb / (v * v * v));
        }
    }
    return 0.0;
}

double Chart::f3(const std::array<double, 2>& y, int a, int b, int t) const {
    auto d = [](int i, int j) { return (i == j) ? 1.0 : 0.0; };
    switch (kind_) {
        case ChartKind::Plate:
            return 0.0;
        case ChartKind::SphereGraph: {
            double R = params_[0];
            double w2 = R * R - y[0] * y[0] - y[1] * y[1];
            double w3 = w2 * std::sqrt(w2);
            double w5 = w3 * w2;
            return (d(a, b) * y[t] + d(a, t) * y[b] + d(b, t) * y[a]) / w3 +
                   3.0 * y[a] * y[b] * y[t] / w5;
        }
        case ChartKind::EllipsoidGraph: {
            double qa = y[a] / (params_[a] * params_[a]);
            double qb = y[b] / (params_[b] * params_[b]);
            double qt = y[t] / (params_[t] * params_[t]);
            double qab = d(a, b) / (params_[a] * params_[a]);
            double qat = d(a, t) / (params_[a] * params_[a]);
            double qbt = d(b, t) / (params_[b] * params_[b]);
            double u = (y[0] / params_[0]) * (y[0] / params_[0]) + (y[1] / params_[1]) * (y[1] / params_[1]);
            double v = std::sqrt(1.0 - u);
            double v3 = v * v * v;
            double v5 = v3 * v * v;
            return params_[2] * ((qab * qt + qat * qb + qa * qbt) / v3 + 3.0 * qa * qb * qt / v5);
        }
    }
    return 0.0;
}

Vec3 Chart::position(const std::array<double, 2>& y) const {
    return {y[0], y[1], f(y[0], y[1])};
}

GeometryPointData eval_geometry(const Chart& chart, const std::array<double, 2>& y) {
    if (!chart.inside(y[0], y[1]))
        throw DomainError("eval_geometry: point (" + std::to_string(y[0]) + "," +
                          std::to_string(y[1]) + ") outside chart domain");

    GeometryPointData g;
    g.y = y;
    for (int a = 0; a < 2; ++a) {
        g.a_cov[a] = {a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0, chart.f1(y, a)};
    }
    Vec3 n = cross(g.a_cov[0], g.a_cov[1]);
    double nn = norm(n);
    if (nn < 1e-12) throw ImmersionError("eval_geometry: tangent vectors degenerate");
    g.a3 = {n[0] / nn, n[1] / nn, n[2] / nn};

    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g.a_cov_form[a][b] = dot(g.a_cov[a], g.a_cov[b]);
    double det = g.a_cov_form[0][0] * g.a_cov_form[1][1] - g.a_cov_form[0][1] * g.a_cov_form[1][0];
    if (det <= 0.0) throw ImmersionError("eval_geometry: first fundamental form not SPD");
    g.sqrt_a = std::sqrt(det);
    g.a_con_form[0][0] = g.a_cov_form[1][1] / det;
    g.a_con_form[1][1] = g.a_cov_form[0][0] / det;
    g.a_con_form[0][1] = -g.a_cov_form[0][1] / det;
    g.a_con_form[1][0] = -g.a_cov_form[1][0] / det;

    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 3; ++k)
            g.a_con[a][k] = g.a_con_form[a][0] * g.a_cov[0][k] + g.a_con_form[a][1] * g.a_cov[1][k];

    // d_a a_b = f_ab e3 for a graph chart
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double fab = chart.f2(y, a, b);
            g.b_cov[a][b] = fab * g.a3[2];
            for (int s = 0; s < 2; ++s) g.christoffel[s][a][b] = fab * g.a_con[s][2];
        }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            g.b_mixed[a][b] = g.a_con_form[b][0] * g.b_cov[a][0] + g.a_con_form[b][1] * g.b_cov[a][1];

    double detb = g.b_cov[0][0] * g.b_cov[1][1] - g.b_cov[0][1] * g.b_cov[1][0];
    g.gauss_K = detb / det;
    return g;
}

GeometryDerivs eval_geometry_derivs(const Chart& chart, const std::array<double, 2>& y) {
    if (!chart.inside(y[0], y[1]))
        throw DomainError("eval_geometry_derivs: point outside chart domain");

    // closed forms for a graph chart z = f(y):
    //   q := 1 + |grad f|^2,  h := sqrt(q)
    //   Gamma^s_ab = f_ab f_s / q
    //   b_ab  = f_ab / h,  b^b_a = a^{bs} b_as,  a^{sr} = d_sr - f_s f_r / q
    GeometryDerivs d{};
    double fg[2];
    double fh[2][2];
    double f3t[2][2][2];
    for (int a = 0; a < 2; ++a) fg[a] = chart.f1(y, a);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) fh[a][b] = chart.f2(y, a, b);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int t = 0; t < 2; ++t) f3t[a][b][t] = chart.f3(y, a, b, t);

    double q = 1.0 + fg[0] * fg[0] + fg[1] * fg[1];
    double h = std::sqrt(q);
    double dq[2];
    for (int t = 0; t < 2; ++t) dq[t] = 2.0 * (fg[0] * fh[0][t] + fg[1] * fh[1][t]);

    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    d.d_gamma[t][s][a][b] = (f3t[a][b][t] * fg[s] + fh[a][b] * fh[s][t]) / q -
                                            fh[a][b] * fg[s] * dq[t] / (q * q);

    double bcov[2][2];
    double dbcov[2][2][2];  // dbcov[t][a][b]
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) bcov[a][b] = fh[a][b] / h;
    for (int t = 0; t < 2; ++t)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                dbcov[t][a][b] = f3t[a][b][t] / h - fh[a][b] * dq[t] / (2.0 * q * h);

    double acon[2][2];
    double dacon[2][2][2];  // dacon[t][s][r]
    for (int s = 0; s < 2; ++s)
        for (int r = 0; r < 2; ++r) acon[s][r] = ((s == r) ? 1.0 : 0.0) - fg[s] * fg[r] / q;
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            for (int r = 0; r < 2; ++r)
                dacon[t][s][r] = -(fh[s][t] * fg[r] + fg[s] * fh[r][t]) / q +
                                 fg[s] * fg[r] * dq[t] / (q * q);

    for (int t = 0; t < 2; ++t)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double v = 0.0;
                for (int s = 0; s < 2; ++s)
                    v += dacon[t][b][s] * bcov[a][s] + acon[b][s] * dbcov[t][a][s];
                d.d_b_mixed[t][a][b] = v;
            }
    return d;
}

double assert_elliptic(const Chart& chart, int n) {
    if (n < 8) throw std::invalid_argument("assert_elliptic: grid resolution must be >= 8");
    double c = chart.half_width();
    double kmin = std::numeric_limits<double>::infinity();
    std::array<double, 2> argmin{0.0, 0.0};
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            std::array<double, 2> y = {-c + 2.0 * c * i / n, -c + 2.0 * c * j / n};
            double K = eval_geometry(chart, y).gauss_K;
            if (K < kmin) {
                kmin = K;
                argmin = y;
            }
        }
    if (kmin <= 0.0) {
        std::ostringstream msg;
        msg << "non-elliptic: min K = " << kmin << " at y = (" << argmin[0] << "," << argmin[1] << ")";
        throw NonEllipticError(msg.str());
    }
    return kmin;
}

LameConstants::LameConstants(double l, double m) : lambda(l), mu(m) {
    if (l < 0.0) throw std::invalid_argument("LameConstants: lambda must be >= 0");
    if (m <= 0.0) throw std::invalid_argument("LameConstants: mu must be > 0");
}

namespace {

void invert3(const double m[3][3], double inv[3][3], double& det) {
    det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
          m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
          m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    double id = 1.0 / det;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * id;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * id;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * id;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * id;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * id;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * id;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * id;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * id;
    // for symmetric input return a bitwise-symmetric inverse
    inv[1][0] = inv[0][1];
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
}

}  // namespace

ScaledVolumeData eval_scaled_tensors(const Chart& chart, const std::array<double, 2>& y,
                                     double x3, double eps, const LameConstants& lame) {
    if (eps <= 0.0) throw std::invalid_argument("eval_scaled_tensors: eps must be > 0");
    if (eps > 0.3) throw std::invalid_argument("eval_scaled_tensors: eps above validity guard 0.3");
    if (x3 < -1.0 || x3 > 1.0)
        throw std::invalid_argument("eval_scaled_tensors: x3 must lie in [-1,1]");

    GeometryPointData geo = eval_geometry(chart, y);
    GeometryDerivs der = eval_geometry_derivs(chart, y);

    ScaledVolumeData s;
    s.eps = eps;
    s.x3 = x3;
    double t = eps * x3;  // physical transverse offset

    // g_a = a_a - t b^s_a a_s,  g_3 = a3
    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 3; ++k) {
            double v = geo.a_cov[a][k];
            for (int sg = 0; sg < 2; ++sg) v -= t * geo.b_mixed[a][sg] * geo.a_cov[sg][k];
            s.g_cov[a][k] = v;
        }
    s.g_cov[2] = geo.a3;

    double G[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G[i][j] = dot(s.g_cov[i], s.g_cov[j]);
    double Ginv[3][3];
    invert3(G, Ginv, s.g_det);
    if (s.g_det <= 0.0) throw ImmersionError("eval_scaled_tensors: volume chart not an immersion");

    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            double v = 0.0;
            for (int i = 0; i < 3; ++i) v += Ginv[j][i] * s.g_cov[i][k];
            s.g_con[j][k] = v;
        }

    // d^eps_b g_a = d_b a_a - t [(d_b b^s_a) a_s + b^s_a (Gamma^r_bs a_r + b_bs a3)]
    // d^eps_3 g_a = -b^s_a a_s;  d^eps_i g_3 handled via d_a a3 = -b^s_a a_s
    Vec3 dg[3][3];  // dg[i][j] = d^eps_i g_j
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 3; ++k) {
                // d_b a_a = Gamma^r_ba a_r + b_ba a3
                double v = geo.b_cov[b][a] * geo.a3[k];
                for (int r = 0; r < 2; ++r) v += geo.christoffel[r][b][a] * geo.a_cov[r][k];
                for (int sg = 0; sg < 2; ++sg) {
                    double dba = der.d_b_mixed[b][a][sg];  // d_b b^sg_a
                    double inner = geo.b_cov[b][sg] * geo.a3[k];
                    for (int r = 0; r < 2; ++r) inner += geo.christoffel[r][b][sg] * geo.a_cov[r][k];
                    v -= t * (dba * geo.a_cov[sg][k] + geo.b_mixed[a][sg] * inner);
                }
                dg[b][a][k] = v;
            }
    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 3; ++k) {
            double v = 0.0;
            for (int sg = 0; sg < 2; ++sg) v -= geo.b_mixed[a][sg] * geo.a_cov[sg][k];
            dg[2][a][k] = v;  // d^eps_3 g_a
            dg[a][2][k] = v;  // d^eps_a g_3 = d_a a3
        }
    dg[2][2] = {0.0, 0.0, 0.0};

    for (int p = 0; p < 3; ++p)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s.gamma3d[p][i][j] = dot(dg[i][j], s.g_con[p]);

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    s.A4[i][j][k][l] = lame.lambda * (Ginv[i][j] * Ginv[k][l]) +
                                       lame.mu * (Ginv[i][k] * Ginv[j][l] + Ginv[i][l] * Ginv[j][k]);

    // limit tensor: contravariant metric degenerates to diag(a^{ab}, 1)
    double A0[3][3];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) A0[a][b] = geo.a_con_form[a][b];
    A0[0][2] = A0[2][0] = A0[1][2] = A0[2][1] = 0.0;
    A0[2][2] = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    s.A4_limit[i][j][k][l] = lame.lambda * (A0[i][j] * A0[k][l]) +
                                             lame.mu * (A0[i][k] * A0[j][l] + A0[i][l] * A0[j][k]);
    return s;
}

}  // namespace koitervi
