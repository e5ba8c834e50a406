#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "koitervi/lab.hpp"

namespace koitervi {

namespace {

SparseMatrix add_scaled(const SparseMatrix& A, const SparseMatrix& B, double alpha) {
    SparseMatrix C(A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k)
            C.add_triplet(i, A.col_idx()[k], A.values()[k]);
        for (int k = B.row_ptr()[i]; k < B.row_ptr()[i + 1]; ++k)
            C.add_triplet(i, B.col_idx()[k], alpha * B.values()[k]);
    }
    C.finalize();
    return C;
}

void finish_report(ShellSolveReport& rep, const DofMap& dm, const GapField& gap) {
    rep.active_count = 0;
    rep.min_feasibility = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < dm.transverse_value_dofs.size(); ++k) {
        int d = dm.transverse_value_dofs[k];
        int node = dm.transverse_value_nodes[k];
        if (rep.qp.active_set[d]) ++rep.active_count;
        rep.min_feasibility =
            std::min(rep.min_feasibility, rep.qp.u[d] + gap.node_values[node]);
    }
}

ShellSolveReport solve_shell(const Chart& chart, const Mesh& mesh, const LameConstants& lame,
                             const GapField& gap, const std::array<FieldFn, 3>& p, double eps,
                             double tol, SpaceKind kind) {
    DofMap dm = build_dofmap(mesh, kind);
    SparseMatrix A = assemble_membrane(mesh, dm, chart, lame);
    if (kind == SpaceKind::Koiter) {
        SparseMatrix F = assemble_flexural(mesh, dm, chart, lame);
        A = add_scaled(A, F, eps * eps);
    }
    std::vector<double> f = assemble_load(mesh, dm, chart, p);
    apply_boundary_conditions(A, f, dm);
    BoxQP qp;
    qp.A = &A;
    qp.f = f;
    qp.lower = assemble_gap_bounds(dm, mesh, gap);
    qp.free_mask = dm.free_mask();
    ShellSolveReport rep;
    rep.space = kind;
    rep.eps = eps;
    rep.qp = solve_box_qp_pdas(qp, tol, 200);
    std::vector<double> Au = A.multiply(rep.qp.u);
    for (int d = 0; d < dm.total_dofs; ++d)
        rep.objective += 0.5 * rep.qp.u[d] * Au[d] - f[d] * rep.qp.u[d];
    finish_report(rep, dm, gap);
    return rep;
}

}  // namespace

ShellSolveReport solve_membrane_limit(const Chart& chart, const Mesh& mesh,
                                      const LameConstants& lame, const GapField& gap,
                                      const std::array<FieldFn, 3>& p, double tol) {
    assert_elliptic(chart, 32);
    return solve_shell(chart, mesh, lame, gap, p, 0.0, tol, SpaceKind::Membrane);
}

ShellSolveReport solve_koiter(const Chart& chart, const Mesh& mesh, const LameConstants& lame,
                              const GapField& gap, const std::array<FieldFn, 3>& p, double eps,
                              double tol) {
    if (!(eps > 0.0 && eps <= 0.3))
        throw std::invalid_argument("solve_koiter: eps must lie in (0, 0.3]");
    return solve_shell(chart, mesh, lame, gap, p, eps, tol, SpaceKind::Koiter);
}

ErrorNorms vm_norms(const Mesh& mesh, const DofMap& dm, const std::vector<double>& u) {
    if (dm.space_kind != SpaceKind::Membrane)
        throw ContractError("vm_norms: membrane space only");
    static const double gp[3] = {0.5 * (1.0 - 0.7745966692414834), 0.5,
                                 0.5 * (1.0 + 0.7745966692414834)};
    static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double hx = mesh.hx(), hy = mesh.hy();
    ErrorNorms out;
    for (const auto& cn : mesh.cells)
        for (int qi = 0; qi < 3; ++qi)
            for (int qj = 0; qj < 3; ++qj) {
                double xi = gp[qi], eta = gp[qj];
                double n[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
                double nx[4] = {-(1 - eta) / hx, (1 - eta) / hx, eta / hx, -eta / hx};
                double ny[4] = {-(1 - xi) / hy, -xi / hy, xi / hy, (1 - xi) / hy};
                double wq = gw[qi] * gw[qj] * hx * hy;
                for (int c = 0; c < 3; ++c) {
                    double v = 0, vx = 0, vy = 0;
                    for (int k = 0; k < 4; ++k) {
                        double coef = c < 2 ? u[dm.tangential_dof(c, cn[k])]
                                            : u[dm.transverse_dof(cn[k])];
                        v += coef * n[k];
                        vx += coef * nx[k];
                        vy += coef * ny[k];
                    }
                    if (c < 2)
                        out.h1_tangential += (v * v + vx * vx + vy * vy) * wq;
                    else
                        out.l2_transverse += v * v * wq;
                }
            }
    out.vm_norm = std::sqrt(out.h1_tangential + out.l2_transverse);
    return out;
}

std::vector<double> restrict_to_membrane(const DofMap& koiter_dm, const DofMap& membrane_dm,
                                         const std::vector<double>& u) {
    if (koiter_dm.space_kind != SpaceKind::Koiter ||
        membrane_dm.space_kind != SpaceKind::Membrane)
        throw ContractError("restrict_to_membrane: space mismatch");
    std::vector<double> v(membrane_dm.total_dofs, 0.0);
    for (int node = 0; node < membrane_dm.num_nodes; ++node) {
        for (int c = 0; c < 2; ++c)
            v[membrane_dm.tangential_dof(c, node)] = u[koiter_dm.tangential_dof(c, node)];
        v[membrane_dm.transverse_dof(node)] = u[koiter_dm.transverse_dof(node, 0)];
    }
    return v;
}

SweepReport epsilon_sweep(const Chart& chart, const Mesh& mesh, const LameConstants& lame,
                          const GapField& gap, const std::array<FieldFn, 3>& p,
                          const std::vector<double>& eps_list, double tol) {
    if (eps_list.size() < 3)
        throw std::invalid_argument("epsilon_sweep: need at least 3 eps values");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("epsilon_sweep: eps_list must be strictly decreasing");
    SweepReport rep;
    rep.membrane = solve_membrane_limit(chart, mesh, lame, gap, p, tol);
    DofMap mdm = build_dofmap(mesh, SpaceKind::Membrane);
    DofMap kdm = build_dofmap(mesh, SpaceKind::Koiter);
    for (double eps : eps_list) {
        ShellSolveReport ks = solve_koiter(chart, mesh, lame, gap, p, eps, tol);
        std::vector<double> diff = restrict_to_membrane(kdm, mdm, ks.qp.u);
        for (int d = 0; d < mdm.total_dofs; ++d) diff[d] -= rep.membrane.qp.u[d];
        rep.epsilons.push_back(eps);
        rep.errors.push_back(vm_norms(mesh, mdm, diff));
        rep.iterations.push_back(ks.qp.iterations);
        rep.active_counts.push_back(ks.active_count);
    }
    return rep;
}

KornResult korn_constant(const Chart& chart, const Mesh& mesh, const LameConstants& lame) {
    DofMap dm = build_dofmap(mesh, SpaceKind::Membrane);
    SparseMatrix A = assemble_membrane(mesh, dm, chart, lame);
    SparseMatrix M = assemble_vm_gram(mesh, dm);
    std::vector<char> mask = dm.free_mask();

    if (!chart.elliptic()) {
        // kernel witness: eta = (0,0,1) has gamma = 0 when b vanishes
        std::vector<double> w(dm.total_dofs, 0.0);
        for (int d : dm.transverse_value_dofs) w[d] = 1.0;
        double energy = 0.0, norm = 0.0;
        std::vector<double> Aw = A.multiply(w), Mw = M.multiply(w);
        for (int d = 0; d < dm.total_dofs; ++d) {
            energy += w[d] * Aw[d];
            norm += w[d] * Mw[d];
        }
        throw DegenerateKornError(
            "korn_constant: chart is not uniformly elliptic; witness eta=(0,0,1) has "
            "membrane energy " +
            std::to_string(energy) + " against V_M norm squared " + std::to_string(norm));
    }

    std::vector<double> fzero(dm.total_dofs, 0.0);
    apply_boundary_conditions(A, fzero, dm);

    // block inverse iteration with Rayleigh-Ritz; the lowest eigenvalue of
    // the cap is a near-degenerate cluster, so a single vector stalls
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    int n = dm.total_dofs;
    const int q = 4;
    std::vector<std::vector<double>> V(q, std::vector<double>(n, 0.0));
    for (auto& v : V)
        for (int i = 0; i < n; ++i) v[i] = mask[i] ? dist(rng) : 0.0;

    auto m_dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> Mb = M.multiply(b);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask[i]) s += a[i] * Mb[i];
        return s;
    };

    KornResult res;
    double lambda_prev = 0.0;
    std::vector<double> rhs(n), Au(n);
    for (int it = 0; it < 300; ++it) {
        for (int c = 0; c < q; ++c) {
            M.multiply(V[c], rhs);
            for (int i = 0; i < n; ++i)
                if (!mask[i]) rhs[i] = 0.0;
            double rn = 0.0;
            for (int i = 0; i < n; ++i) rn = std::max(rn, std::fabs(rhs[i]));
            solve_cg(A, rhs, V[c], mask, 1e-13 * std::max(1.0, rn), 200 * n + 1000);
        }
        // modified Gram-Schmidt in the M inner product
        for (int c = 0; c < q; ++c) {
            for (int d = 0; d < c; ++d) {
                double proj = m_dot(V[d], V[c]);
                for (int i = 0; i < n; ++i) V[c][i] -= proj * V[d][i];
            }
            double s = 1.0 / std::sqrt(m_dot(V[c], V[c]));
            for (int i = 0; i < n; ++i) V[c][i] = mask[i] ? V[c][i] * s : 0.0;
        }
        double H[q][q];
        for (int c = 0; c < q; ++c) {
            A.multiply(V[c], Au);
            for (int d = 0; d < q; ++d) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    if (mask[i]) s += V[d][i] * Au[i];
                H[d][c] = s;
            }
        }
        for (int c = 0; c < q; ++c)
            for (int d = c + 1; d < q; ++d) H[c][d] = H[d][c] = 0.5 * (H[c][d] + H[d][c]);
        // Jacobi sweeps on the small projected matrix
        double U[q][q] = {};
        for (int c = 0; c < q; ++c) U[c][c] = 1.0;
        for (int sweep = 0; sweep < 50; ++sweep) {
            double off = 0.0;
            for (int c = 0; c < q; ++c)
                for (int d = c + 1; d < q; ++d) off = std::max(off, std::fabs(H[c][d]));
            if (off < 1e-15) break;
            for (int c = 0; c < q; ++c)
                for (int d = c + 1; d < q; ++d) {
                    if (std::fabs(H[c][d]) < 1e-18) continue;
                    double theta = 0.5 * std::atan2(2.0 * H[c][d], H[d][d] - H[c][c]);
                    double cs = std::cos(theta), sn = std::sin(theta);
                    for (int k = 0; k < q; ++k) {
                        double hc = H[k][c], hd = H[k][d];
                        H[k][c] = cs * hc - sn * hd;
                        H[k][d] = sn * hc + cs * hd;
                    }
                    for (int k = 0; k < q; ++k) {
                        double hc = H[c][k], hd = H[d][k];
                        H[c][k] = cs * hc - sn * hd;
                        H[d][k] = sn * hc + cs * hd;
                        double uc = U[c][k], ud = U[d][k];
                        U[c][k] = cs * uc - sn * ud;
                        U[d][k] = sn * uc + cs * ud;
                    }
                }
        }
        int lo = 0;
        for (int c = 1; c < q; ++c)
            if (H[c][c] < H[lo][lo]) lo = c;
        double lambda = H[lo][lo];
        // rotate the block onto the Ritz basis, smallest first
        std::vector<std::vector<double>> W(q, std::vector<double>(n, 0.0));
        for (int c = 0; c < q; ++c)
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int d = 0; d < q; ++d) s += U[c][d] * V[d][i];
                W[c][i] = s;
            }
        std::swap(W[0], W[lo]);
        V = W;
        res.iterations = it + 1;
        res.lambda_min = lambda;
        if (it > 0 && std::fabs(lambda - lambda_prev) <= 1e-13 * std::max(1.0, lambda)) break;
        lambda_prev = lambda;
    }
    if (res.lambda_min <= 1e-12)
        throw DegenerateKornError("korn_constant: smallest eigenvalue " +
                                  std::to_string(res.lambda_min) +
                                  " is numerically zero");
    res.c0_estimate = 1.0 / std::sqrt(res.lambda_min);
    return res;
}

}  // namespace koitervi
