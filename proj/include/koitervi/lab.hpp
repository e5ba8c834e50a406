#pragma once

#include "koitervi/fem.hpp"
#include "koitervi/qp.hpp"

namespace koitervi {

struct DegenerateKornError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Components of the V_M norm: H1 for the tangential pair, L2 for the
/// transverse component, plain Lebesgue measure.
struct ErrorNorms {
    double h1_tangential = 0.0;  // squared
    double l2_transverse = 0.0;  // squared
    double vm_norm = 0.0;
};

struct ShellSolveReport {
    SolveReport qp;
    SpaceKind space = SpaceKind::Membrane;
    double eps = 0.0;
    double objective = 0.0;        // (1/2) u'Au - f'u at the solution
    double min_feasibility = 0.0;  // min over nodes of eta3 + s
    int active_count = 0;
};

struct SweepReport {
    std::vector<double> epsilons;
    std::vector<ErrorNorms> errors;
    std::vector<int> iterations;
    std::vector<int> active_counts;
    ShellSolveReport membrane;
};

/// Membrane limit obstacle problem on the MEMBRANE space; elliptic charts only.
ShellSolveReport solve_membrane_limit(const Chart& chart, const Mesh& mesh,
                                      const LameConstants& lame, const GapField& gap,
                                      const std::array<FieldFn, 3>& p, double tol);

/// Koiter obstacle problem on the KOITER space, eps in (0, 0.3].  The leading
/// thickness factor is divided out, so the system is B_M + eps^2 B_F against
/// the loads themselves.
ShellSolveReport solve_koiter(const Chart& chart, const Mesh& mesh, const LameConstants& lame,
                              const GapField& gap, const std::array<FieldFn, 3>& p, double eps,
                              double tol);

/// One membrane solve plus one Koiter solve per eps; errors measured in the
/// shared Q1 nodal space.
SweepReport epsilon_sweep(const Chart& chart, const Mesh& mesh, const LameConstants& lame,
                          const GapField& gap, const std::array<FieldFn, 3>& p,
                          const std::vector<double>& eps_list, double tol);

/// V_M norms of a membrane-space coefficient vector, by direct quadrature.
ErrorNorms vm_norms(const Mesh& mesh, const DofMap& membrane_dofmap, const std::vector<double>& u);

/// Nodal restriction of a Koiter solution to the membrane space (tangential
/// values plus Hermite value dofs).
std::vector<double> restrict_to_membrane(const DofMap& koiter_dofmap,
                                         const DofMap& membrane_dofmap,
                                         const std::vector<double>& u);

struct KornResult {
    double lambda_min = 0.0;
    double c0_estimate = 0.0;
    int iterations = 0;
};

/// Smallest generalized eigenvalue of A_M u = lambda M u on the MEMBRANE
/// space (M the V_M Gram matrix), by inverse power iteration with CG inner
/// solves.  Non-elliptic charts raise DegenerateKornError.
KornResult korn_constant(const Chart& chart, const Mesh& mesh, const LameConstants& lame);

}  // namespace koitervi
