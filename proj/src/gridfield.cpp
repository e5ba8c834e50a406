#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "koitervi/gridfield.hpp"

namespace koitervi {

namespace {

int quotient_steps(const GridField& f, double h) {
    double k = h / f.h0;
    int ki = static_cast<int>(std::lround(k));
    if (ki < 1 || std::fabs(k - ki) > 1e-9 * std::max(1.0, k))
        throw std::invalid_argument("difference quotient: h must be a positive multiple of h0");
    return ki;
}

void check_direction(int rho) {
    if (rho != 1 && rho != 2) throw std::invalid_argument("difference quotient: rho must be 1 or 2");
}

void check_same_grid(const GridField& a, const GridField& b, const char* what) {
    if (a.ni != b.ni || a.nj != b.nj || std::fabs(a.h0 - b.h0) > 1e-12 ||
        std::fabs(a.ox - b.ox) > 1e-12 || std::fabs(a.oy - b.oy) > 1e-12)
        throw std::invalid_argument(std::string(what) + ": grids do not match");
}

GridField square_grid(const Mesh& mesh) {
    if (std::fabs(mesh.hx() - mesh.hy()) > 1e-12)
        throw ContractError("grid field: mesh spacing must be square");
    GridField g;
    g.ni = mesh.nx + 1;
    g.nj = mesh.ny + 1;
    g.ox = -mesh.c;
    g.oy = -mesh.c;
    g.h0 = mesh.hx();
    g.v.assign(static_cast<size_t>(g.ni) * g.nj, 0.0);
    return g;
}

}  // namespace

GridField grid_from_fn(int ni, int nj, double ox, double oy, double h0, const FieldFn& f) {
    GridField g;
    g.ni = ni;
    g.nj = nj;
    g.ox = ox;
    g.oy = oy;
    g.h0 = h0;
    g.v.reserve(static_cast<size_t>(ni) * nj);
    for (int j = 0; j < nj; ++j)
        for (int i = 0; i < ni; ++i) g.v.push_back(f(ox + i * h0, oy + j * h0));
    return g;
}

GridField grid_from_transverse(const Mesh& mesh, const DofMap& dofmap,
                               const std::vector<double>& u) {
    GridField g = square_grid(mesh);
    for (int node = 0; node < mesh.num_nodes(); ++node) g.v[node] = u[dofmap.transverse_dof(node)];
    return g;
}

GridField grid_from_tangential(const Mesh& mesh, const DofMap& dofmap, int comp,
                               const std::vector<double>& u) {
    GridField g = square_grid(mesh);
    for (int node = 0; node < mesh.num_nodes(); ++node)
        g.v[node] = u[dofmap.tangential_dof(comp, node)];
    return g;
}

GridField diff_forward(const GridField& f, int rho, double h) {
    check_direction(rho);
    int k = quotient_steps(f, h);
    GridField out = f;
    int di = rho == 1 ? k : 0, dj = rho == 2 ? k : 0;
    out.ni = f.ni - di;
    out.nj = f.nj - dj;
    if (out.ni < 1 || out.nj < 1) throw std::domain_error("diff_forward: stencil out of range");
    out.v.assign(static_cast<size_t>(out.ni) * out.nj, 0.0);
    for (int j = 0; j < out.nj; ++j)
        for (int i = 0; i < out.ni; ++i)
            out.at(i, j) = (f.at(i + di, j + dj) - f.at(i, j)) / h;
    return out;
}

GridField diff_backward(const GridField& f, int rho, double h) {
    check_direction(rho);
    int k = quotient_steps(f, h);
    GridField out = f;
    int di = rho == 1 ? k : 0, dj = rho == 2 ? k : 0;
    out.ni = f.ni - di;
    out.nj = f.nj - dj;
    if (out.ni < 1 || out.nj < 1) throw std::domain_error("diff_backward: stencil out of range");
    out.ox = f.ox + di * f.h0;
    out.oy = f.oy + dj * f.h0;
    out.v.assign(static_cast<size_t>(out.ni) * out.nj, 0.0);
    for (int j = 0; j < out.nj; ++j)
        for (int i = 0; i < out.ni; ++i)
            out.at(i, j) = (f.at(i + di, j + dj) - f.at(i, j)) / h;
    return out;
}

GridField diff_second(const GridField& f, int rho, double h) {
    check_direction(rho);
    int k = quotient_steps(f, h);
    GridField out = f;
    int di = rho == 1 ? k : 0, dj = rho == 2 ? k : 0;
    out.ni = f.ni - 2 * di;
    out.nj = f.nj - 2 * dj;
    if (out.ni < 1 || out.nj < 1) throw std::domain_error("diff_second: stencil out of range");
    out.ox = f.ox + di * f.h0;
    out.oy = f.oy + dj * f.h0;
    out.v.assign(static_cast<size_t>(out.ni) * out.nj, 0.0);
    for (int j = 0; j < out.nj; ++j)
        for (int i = 0; i < out.ni; ++i)
            out.at(i, j) =
                (f.at(i + 2 * di, j + 2 * dj) - 2.0 * f.at(i + di, j + dj) + f.at(i, j)) / (h * h);
    return out;
}

namespace {

// 2-point Gauss on [0,1]
const double kGp2[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

}  // namespace

double grid_l2_sq(const GridField& f) {
    double total = 0.0;
    for (int j = 0; j + 1 < f.nj; ++j)
        for (int i = 0; i + 1 < f.ni; ++i)
            for (int qa = 0; qa < 2; ++qa)
                for (int qb = 0; qb < 2; ++qb) {
                    double xi = kGp2[qa], eta = kGp2[qb];
                    double val = f.at(i, j) * (1 - xi) * (1 - eta) +
                                 f.at(i + 1, j) * xi * (1 - eta) + f.at(i + 1, j + 1) * xi * eta +
                                 f.at(i, j + 1) * (1 - xi) * eta;
                    total += 0.25 * val * val * f.h0 * f.h0;
                }
    return total;
}

double grid_h1_sq(const GridField& f) {
    double total = grid_l2_sq(f);
    for (int j = 0; j + 1 < f.nj; ++j)
        for (int i = 0; i + 1 < f.ni; ++i)
            for (int qa = 0; qa < 2; ++qa)
                for (int qb = 0; qb < 2; ++qb) {
                    double xi = kGp2[qa], eta = kGp2[qb];
                    double gx = (-(1 - eta) * f.at(i, j) + (1 - eta) * f.at(i + 1, j) +
                                 eta * f.at(i + 1, j + 1) - eta * f.at(i, j + 1)) /
                                f.h0;
                    double gy = (-(1 - xi) * f.at(i, j) - xi * f.at(i + 1, j) +
                                 xi * f.at(i + 1, j + 1) + (1 - xi) * f.at(i, j + 1)) /
                                f.h0;
                    total += 0.25 * (gx * gx + gy * gy) * f.h0 * f.h0;
                }
    return total;
}

GridField feasible_perturbation(const GridField& eta3, const GridField& s_tilde,
                                const GridField& phi1, int rho, double h, double rho_coeff) {
    check_direction(rho);
    check_same_grid(eta3, s_tilde, "feasible_perturbation");
    check_same_grid(eta3, phi1, "feasible_perturbation");
    int k = quotient_steps(eta3, h);
    if (!(rho_coeff > 0.0 && rho_coeff < 0.5 * h * h))
        throw std::invalid_argument("feasible_perturbation: rho_coeff must lie in (0, h^2/2)");
    for (size_t n = 0; n < phi1.v.size(); ++n) {
        if (phi1.v[n] < 0.0 || phi1.v[n] > 1.0)
            throw std::invalid_argument("feasible_perturbation: cutoff must take values in [0,1]");
        if (s_tilde.v[n] + eta3.v[n] < -1e-12)
            throw std::domain_error("feasible_perturbation: input violates the obstacle");
    }
    int di = rho == 1 ? k : 0, dj = rho == 2 ? k : 0;
    GridField out = eta3;
    for (int j = 0; j < eta3.nj; ++j)
        for (int i = 0; i < eta3.ni; ++i) {
            bool in_range = i - di >= 0 && i + di < eta3.ni && j - dj >= 0 && j + dj < eta3.nj;
            double phi = phi1.at(i, j);
            if (phi == 0.0) continue;
            if (!in_range)
                throw std::domain_error(
                    "feasible_perturbation: cutoff supported where the stencil leaves the grid");
            double dds = (s_tilde.at(i + di, j + dj) - 2.0 * s_tilde.at(i, j) +
                          s_tilde.at(i - di, j - dj)) /
                         (h * h);
            if (dds > 1e-12)
                throw std::domain_error(
                    "feasible_perturbation: gap is not grid-concave where the cutoff is active");
            double dd = (eta3.at(i + di, j + dj) - 2.0 * eta3.at(i, j) +
                         eta3.at(i - di, j - dj)) /
                        (h * h);
            out.at(i, j) = eta3.at(i, j) + rho_coeff * phi * dd;
        }
    return out;
}

double convexifier_g(const Convexifier& cx, double y1, double y2) {
    return 1.0 - 0.5 * std::exp(cx.r * (y1 - cx.y0[0]) + cx.r * (y2 - cx.y0[1]));
}

Mat2 convexifier_hessian(const Convexifier& cx, const SmoothField& s, double y1, double y2) {
    double pi = std::exp(cx.r * (y1 - cx.y0[0]) + cx.r * (y2 - cx.y0[1]));
    double g = 1.0 - 0.5 * pi;
    double dg = -0.5 * cx.r * pi;        // both first derivatives
    double ddg = -0.5 * cx.r * cx.r * pi;  // all second derivatives
    double sv = s.f(y1, y2);
    double s1 = s.dx(y1, y2), s2 = s.dy(y1, y2);
    double s11 = s.dxx(y1, y2), s12 = s.dxy(y1, y2), s22 = s.dyy(y1, y2);
    Mat2 H{};
    H[0][0] = -s11 * g - 2.0 * s1 * dg + (cx.B - sv) * ddg;
    H[1][1] = -s22 * g - 2.0 * s2 * dg + (cx.B - sv) * ddg;
    H[0][1] = H[1][0] = -s12 * g - (s1 + s2) * dg + (cx.B - sv) * ddg;
    return H;
}

namespace {

double min_eig2(const Mat2& H) {
    double tr = H[0][0] + H[1][1];
    double disc = std::sqrt((H[0][0] - H[1][1]) * (H[0][0] - H[1][1]) + 4.0 * H[0][1] * H[0][1]);
    return 0.5 * (tr - disc);
}

}  // namespace

Convexifier build_convexifier(const SmoothField& s, const std::array<double, 2>& y0,
                              double domain_halfwidth) {
    // sampled sup norms of s and its derivatives on the closed square
    double M = 0.0, smin = std::numeric_limits<double>::infinity();
    const int n = 65;
    double c = domain_halfwidth;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double x = -c + 2.0 * c * i / (n - 1), y = -c + 2.0 * c * j / (n - 1);
            double sv = s.f(x, y);
            smin = std::min(smin, sv);
            M = std::max({M, std::fabs(sv), std::fabs(s.dx(x, y)), std::fabs(s.dy(x, y)),
                          std::fabs(s.dxx(x, y)), std::fabs(s.dxy(x, y)), std::fabs(s.dyy(x, y))});
        }
    if (smin <= 0.0)
        throw std::invalid_argument("build_convexifier: gap must be positive on the closed square");

    Convexifier cx;
    cx.y0 = y0;
    double last_T = 0.0;
    for (double B : {0.0, -1.0, -2.0, -4.0, -8.0, -16.0, -32.0}) {
        for (double r = 1.0; r <= (1 << 20); r *= 2.0) {
            cx.B = B;
            cx.r = r;
            cx.U_halfwidth = std::log(1.5) / (2.0 * r);
            double T = std::numeric_limits<double>::infinity();
            double min_eig = std::numeric_limits<double>::infinity();
            double gmin = std::numeric_limits<double>::infinity();
            const int m = 33;
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) {
                    double x = y0[0] + cx.U_halfwidth * (2.0 * i / (m - 1) - 1.0);
                    double y = y0[1] + cx.U_halfwidth * (2.0 * j / (m - 1) - 1.0);
                    T = std::min(T, s.f(x, y) - B);
                    gmin = std::min(gmin, convexifier_g(cx, x, y));
                    min_eig = std::min(min_eig, min_eig2(convexifier_hessian(cx, s, x, y)));
                }
            last_T = T;
            // direction-uniform growth criterion from the shift term, taken
            // along the diagonal where the rank-one part is largest
            bool growth = T * r * r - M * r - M > 0.0;
            if (T > 0.0 && growth && gmin >= 0.25 - 1e-12 && min_eig >= -1e-10) {
                cx.T = T;
                cx.M = M;
                return cx;
            }
        }
    }
    throw ConvexifierSearchError("build_convexifier: no rate up to 2^20 yields a convex product"
                                 " (M=" + std::to_string(M) + ", T=" + std::to_string(last_T) + ")");
}

GridField density_approximant(const GridField& eta3, int k, const GridField& s,
                              double domain_halfwidth) {
    check_same_grid(eta3, s, "density_approximant");
    if (k < 1) throw std::invalid_argument("density_approximant: k must be >= 1");
    double smin = *std::min_element(s.v.begin(), s.v.end());
    if (smin <= 0.0) throw std::domain_error("density_approximant: gap must be positive");

    double c = domain_halfwidth;
    GridField cut = eta3;
    for (int j = 0; j < eta3.nj; ++j)
        for (int i = 0; i < eta3.ni; ++i) {
            double dist = c - std::max(std::fabs(eta3.x(i)), std::fabs(eta3.y(j)));
            double f = std::clamp(k * dist - 2.0, 0.0, 1.0);
            cut.at(i, j) = (1.0 - 1.0 / k) * f * eta3.at(i, j);
        }

    // discrete bump kernel of radius 1/k, weights normalized to sum 1
    double rad = 1.0 / k;
    int m = static_cast<int>(std::floor(rad / eta3.h0 + 1e-9));
    std::vector<double> w((2 * m + 1) * (2 * m + 1), 0.0);
    double wsum = 0.0;
    for (int b = -m; b <= m; ++b)
        for (int a = -m; a <= m; ++a) {
            double z2 = (a * a + b * b) * eta3.h0 * eta3.h0 * k * k;
            if (z2 < 1.0) {
                double val = std::exp(-1.0 / (1.0 - z2));
                w[(b + m) * (2 * m + 1) + (a + m)] = val;
                wsum += val;
            }
        }
    for (double& x : w) x /= wsum;

    GridField out = eta3;
    for (int j = 0; j < eta3.nj; ++j)
        for (int i = 0; i < eta3.ni; ++i) {
            double acc = 0.0;
            for (int b = -m; b <= m; ++b)
                for (int a = -m; a <= m; ++a) {
                    int ii = i + a, jj = j + b;
                    if (ii < 0 || ii >= eta3.ni || jj < 0 || jj >= eta3.nj) continue;
                    acc += w[(b + m) * (2 * m + 1) + (a + m)] * cut.at(ii, jj);
                }
            out.at(i, j) = acc;
        }
    return out;
}

std::vector<ProbeRow> interior_regularity_probe(const Mesh& mesh, const DofMap& dofmap,
                                                const std::vector<double>& zeta,
                                                double patch_halfwidth, const FieldFn& cutoff,
                                                int levels) {
    if (dofmap.space_kind != SpaceKind::Membrane)
        throw ContractError("interior_regularity_probe: membrane space only");
    if (levels < 1) throw std::invalid_argument("interior_regularity_probe: levels must be >= 1");
    double h0 = mesh.hx();
    double hmax = h0 * (1 << (levels - 1));
    if (mesh.c - patch_halfwidth < 4.0 * hmax)
        throw std::domain_error("interior_regularity_probe: patch margin below 4 max h");

    GridField comp[3] = {grid_from_tangential(mesh, dofmap, 0, zeta),
                         grid_from_tangential(mesh, dofmap, 1, zeta),
                         grid_from_transverse(mesh, dofmap, zeta)};
    for (auto& g : comp)
        for (int j = 0; j < g.nj; ++j)
            for (int i = 0; i < g.ni; ++i) {
                double phi = std::fabs(g.x(i)) <= patch_halfwidth && std::fabs(g.y(j)) <= patch_halfwidth
                                 ? cutoff(g.x(i), g.y(j))
                                 : 0.0;
                g.at(i, j) *= phi;
            }

    std::vector<ProbeRow> rows;
    for (int lev = 0; lev < levels; ++lev) {
        double h = h0 * (1 << lev);
        for (int rho = 1; rho <= 2; ++rho) {
            ProbeRow row;
            row.h = h;
            row.rho = rho;
            double tan2 = 0.0;
            for (int ccomp = 0; ccomp < 2; ++ccomp)
                tan2 += grid_h1_sq(diff_forward(comp[ccomp], rho, h));
            row.norm_h1_tan = std::sqrt(tan2);
            row.norm_l2_trans = std::sqrt(grid_l2_sq(diff_forward(comp[2], rho, h)));
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace koitervi
