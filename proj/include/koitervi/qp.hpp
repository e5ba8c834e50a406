#pragma once

#include <stdexcept>
#include <vector>

#include "koitervi/sparse.hpp"

namespace koitervi {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// min (1/2) u'Au - f'u  subject to  u >= lower on constrained dofs.
/// Entries of lower may be -inf (unconstrained).  Dofs with free_mask 0 are
/// pinned to zero and must carry a unit row in A.
struct BoxQP {
    const SparseMatrix* A = nullptr;
    std::vector<double> f;
    std::vector<double> lower;
    std::vector<char> free_mask;
};

struct SolveReport {
    std::vector<double> u;
    std::vector<char> active_set;       // 1 where the bound is active
    std::vector<double> multipliers;    // lambda = Au - f
    int iterations = 0;
    double kkt_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients restricted to the dofs with
/// mask 1; entries with mask 0 stay at their input values.
int solve_cg(const SparseMatrix& A, const std::vector<double>& f, std::vector<double>& u,
             const std::vector<char>& mask, double tol, int max_iter);

/// max over inactive free dofs of |Au-f|, over active dofs of max(0,-lambda),
/// and everywhere of max(0, lower-u)
double kkt_residual(const SparseMatrix& A, const std::vector<double>& f,
                    const std::vector<double>& lower, const std::vector<char>& free_mask,
                    const std::vector<double>& u);

/// Primal-dual active set iteration; inner systems solved by CG at 0.01*tol.
SolveReport solve_box_qp_pdas(const BoxQP& qp, double tol, int max_iter);

/// Projected SOR sweep iteration, relaxation omega in (0,2).
SolveReport solve_box_qp_psor(const BoxQP& qp, double tol, int max_iter, double omega = 1.5);

}  // namespace koitervi
