#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "koitervi/fem.hpp"

namespace koitervi {

namespace {

struct Quad1D {
    std::vector<double> pts, wts;  // on [0,1]
};

Quad1D gauss(int n) {
    // Gauss-Legendre on [-1,1], mapped to [0,1]
    Quad1D q;
    std::vector<double> x, w;
    switch (n) {
        case 2:
            x = {-0.5773502691896257, 0.5773502691896257};
            w = {1.0, 1.0};
            break;
        case 3:
            x = {-0.7745966692414834, 0.0, 0.7745966692414834};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        case 4:
            x = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                 0.8611363115940526};
            w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                 0.3478548451374538};
            break;
        case 5:
            x = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                 0.9061798459386640};
            w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                 0.4786286704993665, 0.2369268850561891};
            break;
        default:
            throw std::invalid_argument("gauss: unsupported order");
    }
    for (size_t i = 0; i < x.size(); ++i) {
        q.pts.push_back(0.5 * (x[i] + 1.0));
        q.wts.push_back(0.5 * w[i]);
    }
    return q;
}

// corner k of the reference square, ccw from (0,0)
constexpr int kCornerX[4] = {0, 1, 1, 0};
constexpr int kCornerY[4] = {0, 0, 1, 1};

struct Shape {
    double val = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
};

struct Herm1D {
    double v, d, dd;
};

Herm1D herm(double t, int corner, int kind) {
    // kind 0: value function, kind 1: slope function (unit derivative at corner)
    if (kind == 0) {
        if (corner == 0) return {1 - 3 * t * t + 2 * t * t * t, -6 * t + 6 * t * t, -6 + 12 * t};
        return {3 * t * t - 2 * t * t * t, 6 * t - 6 * t * t, 6 - 12 * t};
    }
    if (corner == 0) return {t - 2 * t * t + t * t * t, 1 - 4 * t + 3 * t * t, -4 + 6 * t};
    return {-t * t + t * t * t, -2 * t + 3 * t * t, -2 + 6 * t};
}

Shape q1_shape(double xi, double eta, int corner, double hx, double hy) {
    double fx = kCornerX[corner] ? xi : 1.0 - xi;
    double fy = kCornerY[corner] ? eta : 1.0 - eta;
    double dfx = kCornerX[corner] ? 1.0 : -1.0;
    double dfy = kCornerY[corner] ? 1.0 : -1.0;
    Shape s;
    s.val = fx * fy;
    s.dx = dfx * fy / hx;
    s.dy = fx * dfy / hy;
    s.dxy = dfx * dfy / (hx * hy);
    return s;
}

Shape bfs_shape(double xi, double eta, int corner, int h, double hx, double hy) {
    // h: 0 value, 1 d/dx, 2 d/dy, 3 d2/dxdy
    int kx = (h == 1 || h == 3) ? 1 : 0;
    int ky = (h == 2 || h == 3) ? 1 : 0;
    Herm1D A = herm(xi, kCornerX[corner], kx);
    Herm1D B = herm(eta, kCornerY[corner], ky);
    double scale = (kx ? hx : 1.0) * (ky ? hy : 1.0);
    Shape s;
    s.val = scale * A.v * B.v;
    s.dx = scale * A.d * B.v / hx;
    s.dy = scale * A.v * B.d / hy;
    s.dxx = scale * A.dd * B.v / (hx * hx);
    s.dxy = scale * A.d * B.d / (hx * hy);
    s.dyy = scale * A.v * B.dd / (hy * hy);
    return s;
}

// local dof -> (component, shape) at a quadrature point
void local_shapes(SpaceKind kind, double xi, double eta, double hx, double hy,
                  std::vector<Shape>& shapes, std::vector<int>& comps) {
    int n = local_dofs(kind);
    shapes.resize(n);
    comps.resize(n);
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < 4; ++k) {
            shapes[4 * c + k] = q1_shape(xi, eta, k, hx, hy);
            comps[4 * c + k] = c;
        }
    if (kind == SpaceKind::Membrane) {
        for (int k = 0; k < 4; ++k) {
            shapes[8 + k] = q1_shape(xi, eta, k, hx, hy);
            comps[8 + k] = 2;
        }
    } else {
        for (int k = 0; k < 4; ++k)
            for (int h = 0; h < 4; ++h) {
                shapes[8 + 4 * k + h] = bfs_shape(xi, eta, k, h, hx, hy);
                comps[8 + 4 * k + h] = 2;
            }
    }
}

int global_dof(const DofMap& dm, const Mesh& mesh, int cell, int local) {
    const auto& cn = mesh.cells[cell];
    if (local < 8) return dm.tangential_dof(local / 4, cn[local % 4]);
    if (dm.space_kind == SpaceKind::Membrane) return dm.transverse_dof(cn[local - 8]);
    return dm.transverse_dof(cn[(local - 8) / 4], (local - 8) % 4);
}

StrainPointValues dof_gamma(const GeometryPointData& geo, const Shape& s, int comp) {
    std::array<double, 3> vals{0, 0, 0};
    Mat2 grads{};
    vals[comp] = s.val;
    if (comp < 2) {
        grads[comp][0] = s.dx;
        grads[comp][1] = s.dy;
    }
    return gamma_ab(geo, vals, grads);
}

StrainPointValues dof_rho(const GeometryPointData& geo, const GeometryDerivs& der, const Shape& s,
                          int comp) {
    std::array<double, 3> vals{0, 0, 0};
    Mat2 grads{};
    std::array<double, 2> g3{0, 0};
    Mat2 hess{};
    vals[comp] = s.val;
    if (comp < 2) {
        grads[comp][0] = s.dx;
        grads[comp][1] = s.dy;
    } else {
        g3 = {s.dx, s.dy};
        hess[0][0] = s.dxx;
        hess[0][1] = hess[1][0] = s.dxy;
        hess[1][1] = s.dyy;
    }
    return rho_ab(geo, der, vals, grads, g3, hess);
}

enum class Form { Membrane, Flexural };

// dense element matrix for one cell
std::vector<double> element_matrix(Form form, const Mesh& mesh, const DofMap& dm,
                                   const Chart& chart, const LameConstants& lame, int cell,
                                   const Quad1D& q) {
    int n = local_dofs(dm.space_kind);
    std::vector<double> ke(n * n, 0.0);
    double hx = mesh.hx(), hy = mesh.hy();
    const auto& p0 = mesh.nodes[mesh.cells[cell][0]];
    std::vector<Shape> shapes;
    std::vector<int> comps;
    std::vector<StrainPointValues> strains(n);
    for (size_t qi = 0; qi < q.pts.size(); ++qi)
        for (size_t qj = 0; qj < q.pts.size(); ++qj) {
            double xi = q.pts[qi], eta = q.pts[qj];
            std::array<double, 2> y = {p0[0] + xi * hx, p0[1] + eta * hy};
            GeometryPointData geo = eval_geometry(chart, y);
            ElasticityTensor2D C = elasticity_tensor(geo, lame);
            local_shapes(dm.space_kind, xi, eta, hx, hy, shapes, comps);
            if (form == Form::Membrane) {
                for (int l = 0; l < n; ++l) strains[l] = dof_gamma(geo, shapes[l], comps[l]);
            } else {
                GeometryDerivs der = eval_geometry_derivs(chart, y);
                for (int l = 0; l < n; ++l) strains[l] = dof_rho(geo, der, shapes[l], comps[l]);
            }
            double wq = q.wts[qi] * q.wts[qj] * hx * hy * geo.sqrt_a;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) {
                    auto d = energy_densities(C, strains[i], strains[j]);
                    double v = (form == Form::Membrane ? d[0] : d[1]) * wq;
                    ke[i * n + j] += v;
                    if (i != j) ke[j * n + i] += v;
                }
        }
    return ke;
}

SparseMatrix assemble_form(Form form, const Mesh& mesh, const DofMap& dm, const Chart& chart,
                           const LameConstants& lame, bool parallel, int quad_order) {
    Quad1D q = gauss(quad_order);
    int ncell = static_cast<int>(mesh.cells.size());
    int n = local_dofs(dm.space_kind);
    SparseMatrix A(dm.total_dofs);

    std::vector<std::vector<double>> locals(ncell);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int cell = 0; cell < ncell; ++cell)
            locals[cell] = element_matrix(form, mesh, dm, chart, lame, cell, q);
    } else {
        for (int cell = 0; cell < ncell; ++cell)
            locals[cell] = element_matrix(form, mesh, dm, chart, lame, cell, q);
    }
    // deterministic accumulation in cell order
    for (int cell = 0; cell < ncell; ++cell) {
        const auto& ke = locals[cell];
        for (int i = 0; i < n; ++i) {
            int gi = global_dof(dm, mesh, cell, i);
            for (int j = 0; j < n; ++j)
                A.add_triplet(gi, global_dof(dm, mesh, cell, j), ke[i * n + j]);
        }
    }
    A.finalize();
    return A;
}

}  // namespace

SparseMatrix assemble_membrane(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, bool parallel) {
    return assemble_form(Form::Membrane, mesh, dofmap, chart, lame, parallel, 3);
}

SparseMatrix assemble_flexural(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, bool parallel) {
    if (dofmap.space_kind != SpaceKind::Koiter)
        throw ContractError("assemble_flexural: flexural form requires the Koiter space");
    return assemble_form(Form::Flexural, mesh, dofmap, chart, lame, parallel, 4);
}

SparseMatrix assemble_vm_gram(const Mesh& mesh, const DofMap& dofmap) {
    if (dofmap.space_kind != SpaceKind::Membrane)
        throw ContractError("assemble_vm_gram: membrane space only");
    Quad1D q = gauss(3);
    SparseMatrix M(dofmap.total_dofs);
    double hx = mesh.hx(), hy = mesh.hy();
    for (size_t cell = 0; cell < mesh.cells.size(); ++cell) {
        const auto& cn = mesh.cells[cell];
        for (size_t qi = 0; qi < q.pts.size(); ++qi)
            for (size_t qj = 0; qj < q.pts.size(); ++qj) {
                double wq = q.wts[qi] * q.wts[qj] * hx * hy;
                Shape s[4];
                for (int k = 0; k < 4; ++k) s[k] = q1_shape(q.pts[qi], q.pts[qj], k, hx, hy);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) {
                        double mass = s[i].val * s[j].val * wq;
                        double stiff = (s[i].dx * s[j].dx + s[i].dy * s[j].dy) * wq;
                        for (int c = 0; c < 2; ++c)
                            M.add_triplet(dofmap.tangential_dof(c, cn[i]),
                                          dofmap.tangential_dof(c, cn[j]), mass + stiff);
                        M.add_triplet(dofmap.transverse_dof(cn[i]), dofmap.transverse_dof(cn[j]),
                                      mass);
                    }
            }
    }
    M.finalize();
    return M;
}

std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                                  const std::array<FieldFn, 3>& p) {
    Quad1D q = gauss(dofmap.space_kind == SpaceKind::Membrane ? 3 : 4);
    std::vector<double> f(dofmap.total_dofs, 0.0);
    double hx = mesh.hx(), hy = mesh.hy();
    std::vector<Shape> shapes;
    std::vector<int> comps;
    int n = local_dofs(dofmap.space_kind);
    for (size_t cell = 0; cell < mesh.cells.size(); ++cell) {
        const auto& p0 = mesh.nodes[mesh.cells[cell][0]];
        for (size_t qi = 0; qi < q.pts.size(); ++qi)
            for (size_t qj = 0; qj < q.pts.size(); ++qj) {
                double xi = q.pts[qi], eta = q.pts[qj];
                std::array<double, 2> y = {p0[0] + xi * hx, p0[1] + eta * hy};
                GeometryPointData geo = eval_geometry(chart, y);
                double pv[3] = {p[0](y[0], y[1]), p[1](y[0], y[1]), p[2](y[0], y[1])};
                double wq = q.wts[qi] * q.wts[qj] * hx * hy * geo.sqrt_a;
                local_shapes(dofmap.space_kind, xi, eta, hx, hy, shapes, comps);
                for (int l = 0; l < n; ++l)
                    f[global_dof(dofmap, mesh, static_cast<int>(cell), l)] +=
                        pv[comps[l]] * shapes[l].val * wq;
            }
    }
    return f;
}

std::vector<double> assemble_gap_bounds(const DofMap& dofmap, const Mesh& mesh,
                                        const GapField& gap) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lower(dofmap.total_dofs, -inf);
    for (size_t k = 0; k < dofmap.transverse_value_dofs.size(); ++k) {
        int node = dofmap.transverse_value_nodes[k];
        double s = gap.node_values[node];
        if (s <= 0.0)
            throw InfeasibleGapError("gap function not positive at node (" +
                                     std::to_string(mesh.nodes[node][0]) + "," +
                                     std::to_string(mesh.nodes[node][1]) + ")");
        lower[dofmap.transverse_value_dofs[k]] = -s;
    }
    return lower;
}

void apply_boundary_conditions(SparseMatrix& A, std::vector<double>& f, const DofMap& dofmap) {
    A.clamp(dofmap.clamped_mask);
    for (int d = 0; d < dofmap.total_dofs; ++d)
        if (dofmap.clamped_mask[d]) f[d] = 0.0;
}

namespace {

double bilinear_value(Form form, const Mesh& mesh, const DofMap& dm, const Chart& chart,
                      const LameConstants& lame, const std::vector<double>& u,
                      const std::vector<double>& v) {
    Quad1D q = gauss(form == Form::Membrane ? 3 : 4);
    double hx = mesh.hx(), hy = mesh.hy();
    int n = local_dofs(dm.space_kind);
    std::vector<Shape> shapes;
    std::vector<int> comps;
    double total = 0.0;
    for (int cell = 0; cell < static_cast<int>(mesh.cells.size()); ++cell) {
        const auto& p0 = mesh.nodes[mesh.cells[cell][0]];
        for (size_t qi = 0; qi < q.pts.size(); ++qi)
            for (size_t qj = 0; qj < q.pts.size(); ++qj) {
                double xi = q.pts[qi], eta = q.pts[qj];
                std::array<double, 2> y = {p0[0] + xi * hx, p0[1] + eta * hy};
                GeometryPointData geo = eval_geometry(chart, y);
                ElasticityTensor2D C = elasticity_tensor(geo, lame);
                local_shapes(dm.space_kind, xi, eta, hx, hy, shapes, comps);
                // pointwise field data of u and v
                std::array<double, 3> uv{0, 0, 0}, vv{0, 0, 0};
                Mat2 ug{}, vg{};
                std::array<double, 2> ug3{0, 0}, vg3{0, 0};
                Mat2 uh{}, vh{};
                for (int l = 0; l < n; ++l) {
                    int g = global_dof(dm, mesh, cell, l);
                    const Shape& s = shapes[l];
                    int c = comps[l];
                    uv[c] += u[g] * s.val;
                    vv[c] += v[g] * s.val;
                    if (c < 2) {
                        ug[c][0] += u[g] * s.dx;
                        ug[c][1] += u[g] * s.dy;
                        vg[c][0] += v[g] * s.dx;
                        vg[c][1] += v[g] * s.dy;
                    } else {
                        ug3[0] += u[g] * s.dx;
                        ug3[1] += u[g] * s.dy;
                        vg3[0] += v[g] * s.dx;
                        vg3[1] += v[g] * s.dy;
                        uh[0][0] += u[g] * s.dxx;
                        uh[0][1] += u[g] * s.dxy;
                        uh[1][0] += u[g] * s.dxy;
                        uh[1][1] += u[g] * s.dyy;
                        vh[0][0] += v[g] * s.dxx;
                        vh[0][1] += v[g] * s.dxy;
                        vh[1][0] += v[g] * s.dxy;
                        vh[1][1] += v[g] * s.dyy;
                    }
                }
                double wq = q.wts[qi] * q.wts[qj] * hx * hy * geo.sqrt_a;
                if (form == Form::Membrane) {
                    auto su = gamma_ab(geo, uv, ug);
                    auto sv = gamma_ab(geo, vv, vg);
                    total += energy_densities(C, su, sv)[0] * wq;
                } else {
                    GeometryDerivs der = eval_geometry_derivs(chart, y);
                    auto su = rho_ab(geo, der, uv, ug, ug3, uh);
                    auto sv = rho_ab(geo, der, vv, vg, vg3, vh);
                    total += energy_densities(C, su, sv)[1] * wq;
                }
            }
    }
    return total;
}

}  // namespace

double bilinear_membrane_value(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, const std::vector<double>& u,
                               const std::vector<double>& v) {
    return bilinear_value(Form::Membrane, mesh, dofmap, chart, lame, u, v);
}

double bilinear_flexural_value(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, const std::vector<double>& u,
                               const std::vector<double>& v) {
    if (dofmap.space_kind != SpaceKind::Koiter)
        throw ContractError("bilinear_flexural_value: Koiter space only");
    return bilinear_value(Form::Flexural, mesh, dofmap, chart, lame, u, v);
}

void set_tangential_nodal(const Mesh& mesh, const DofMap& dofmap, int comp, const FieldFn& f,
                          std::vector<double>& u) {
    for (int node = 0; node < mesh.num_nodes(); ++node)
        u[dofmap.tangential_dof(comp, node)] = f(mesh.nodes[node][0], mesh.nodes[node][1]);
}

void set_transverse_nodal(const Mesh& mesh, const DofMap& dofmap, const FieldFn& f,
                          std::vector<double>& u) {
    for (int node = 0; node < mesh.num_nodes(); ++node)
        u[dofmap.transverse_dof(node)] = f(mesh.nodes[node][0], mesh.nodes[node][1]);
}

void set_transverse_hermite(const Mesh& mesh, const DofMap& dofmap, const FieldFn& f,
                            const FieldFn& fx, const FieldFn& fy, const FieldFn& fxy,
                            std::vector<double>& u) {
    if (dofmap.space_kind != SpaceKind::Koiter)
        throw ContractError("set_transverse_hermite: Koiter space only");
    for (int node = 0; node < mesh.num_nodes(); ++node) {
        double x = mesh.nodes[node][0], y = mesh.nodes[node][1];
        u[dofmap.transverse_dof(node, 0)] = f(x, y);
        u[dofmap.transverse_dof(node, 1)] = fx(x, y);
        u[dofmap.transverse_dof(node, 2)] = fy(x, y);
        u[dofmap.transverse_dof(node, 3)] = fxy(x, y);
    }
}

}  // namespace koitervi
