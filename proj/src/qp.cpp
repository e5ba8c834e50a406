#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "koitervi/qp.hpp"

namespace koitervi {

namespace {

double inf_norm_masked(const std::vector<double>& v, const std::vector<char>& mask) {
    double m = 0.0;
    for (size_t i = 0; i < v.size(); ++i)
        if (mask[i]) m = std::max(m, std::fabs(v[i]));
    return m;
}

void check_qp(const BoxQP& qp) {
    if (!qp.A || !qp.A->finalized()) throw SolverError("box qp: matrix not finalized");
    size_t n = static_cast<size_t>(qp.A->rows());
    if (qp.f.size() != n || qp.lower.size() != n || qp.free_mask.size() != n)
        throw SolverError("box qp: inconsistent sizes");
}

}  // namespace

int solve_cg(const SparseMatrix& A, const std::vector<double>& f, std::vector<double>& u,
             const std::vector<char>& mask, double tol, int max_iter) {
    int n = A.rows();
    std::vector<double> r(n), z(n), p(n), Ap(n);
    A.multiply(u, Ap);
    for (int i = 0; i < n; ++i) r[i] = mask[i] ? f[i] - Ap[i] : 0.0;

    std::vector<double> dinv(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (mask[i]) {
            double d = A.diagonal(i);
            if (d <= 0.0) throw SolverError("cg: nonpositive diagonal at dof " + std::to_string(i));
            dinv[i] = 1.0 / d;
        }

    double rz = 0.0;
    for (int i = 0; i < n; ++i) {
        z[i] = dinv[i] * r[i];
        rz += r[i] * z[i];
    }
    p = z;
    double res = inf_norm_masked(r, mask);
    int it = 0;
    while (res > tol && it < max_iter) {
        A.multiply(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask[i]) pAp += p[i] * Ap[i];
        if (pAp <= 0.0) throw SolverError("cg: matrix not positive definite on the free set");
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i)
            if (mask[i]) {
                u[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask[i]) {
                z[i] = dinv[i] * r[i];
                rz_new += r[i] * z[i];
            }
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = mask[i] ? z[i] + beta * p[i] : 0.0;
        res = inf_norm_masked(r, mask);
        ++it;
    }
    if (res > tol)
        throw SolverError("cg: no convergence after " + std::to_string(it) +
                          " iterations, residual " + std::to_string(res));
    return it;
}

double kkt_residual(const SparseMatrix& A, const std::vector<double>& f,
                    const std::vector<double>& lower, const std::vector<char>& free_mask,
                    const std::vector<double>& u) {
    int n = A.rows();
    std::vector<double> Au = A.multiply(u);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!free_mask[i]) continue;
        double lam = Au[i] - f[i];
        bool active = std::isfinite(lower[i]) && u[i] <= lower[i];
        if (active)
            res = std::max(res, std::max(0.0, -lam));
        else
            res = std::max(res, std::fabs(lam));
        res = std::max(res, std::max(0.0, lower[i] - u[i]));
    }
    return res;
}

SolveReport solve_box_qp_pdas(const BoxQP& qp, double tol, int max_iter) {
    check_qp(qp);
    const SparseMatrix& A = *qp.A;
    int n = A.rows();
    SolveReport rep;
    rep.u.assign(n, 0.0);
    rep.active_set.assign(n, 0);
    rep.multipliers.assign(n, 0.0);

    std::vector<char> active(n, 0), mask(n);
    std::vector<double> Au(n);
    for (int outer = 0; outer < max_iter; ++outer) {
        // fix active dofs at the bound, solve the reduced system on the rest
        for (int i = 0; i < n; ++i) {
            mask[i] = qp.free_mask[i] && !active[i];
            if (!qp.free_mask[i])
                rep.u[i] = 0.0;
            else if (active[i])
                rep.u[i] = qp.lower[i];
        }
        rep.iterations += solve_cg(A, qp.f, rep.u, mask, 0.01 * tol, 100 * n + 1000);
        A.multiply(rep.u, Au);
        for (int i = 0; i < n; ++i)
            rep.multipliers[i] = active[i] ? Au[i] - qp.f[i] : 0.0;

        // next active set; ties go inactive
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            char next = 0;
            if (qp.free_mask[i] && std::isfinite(qp.lower[i]))
                next = (rep.multipliers[i] + (qp.lower[i] - rep.u[i]) > 0.0) ? 1 : 0;
            if (next != active[i]) changed = true;
            active[i] = next;
        }
        double kkt = kkt_residual(A, qp.f, qp.lower, qp.free_mask, rep.u);
        if (!changed && kkt <= tol) {
            rep.active_set = active;
            rep.kkt_residual = kkt;
            return rep;
        }
    }
    throw SolverError("pdas: active set did not settle within " + std::to_string(max_iter) +
                      " outer iterations");
}

SolveReport solve_box_qp_psor(const BoxQP& qp, double tol, int max_iter, double omega) {
    check_qp(qp);
    if (omega <= 0.0 || omega >= 2.0) throw SolverError("psor: omega must lie in (0,2)");
    const SparseMatrix& A = *qp.A;
    int n = A.rows();
    SolveReport rep;
    rep.u.assign(n, 0.0);
    for (int sweep = 0; sweep < max_iter; ++sweep) {
        for (int i = 0; i < n; ++i) {
            if (!qp.free_mask[i]) continue;
            double gs = (qp.f[i] - A.row_dot_offdiag(i, rep.u)) / A.diagonal(i);
            double v = (1.0 - omega) * rep.u[i] + omega * gs;
            rep.u[i] = std::isfinite(qp.lower[i]) ? std::max(qp.lower[i], v) : v;
        }
        ++rep.iterations;
        double kkt = kkt_residual(A, qp.f, qp.lower, qp.free_mask, rep.u);
        if (kkt <= tol) {
            rep.kkt_residual = kkt;
            std::vector<double> Au = A.multiply(rep.u);
            rep.active_set.assign(n, 0);
            rep.multipliers.assign(n, 0.0);
            for (int i = 0; i < n; ++i)
                if (qp.free_mask[i] && std::isfinite(qp.lower[i]) &&
                    rep.u[i] - qp.lower[i] <= 10.0 * tol) {
                    rep.active_set[i] = 1;
                    rep.multipliers[i] = Au[i] - qp.f[i];
                }
            return rep;
        }
    }
    throw SolverError("psor: no convergence after " + std::to_string(max_iter) + " sweeps");
}

}  // namespace koitervi
