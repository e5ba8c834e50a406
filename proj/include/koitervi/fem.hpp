#pragma once

#include <functional>
#include <vector>

#include "koitervi/geometry.hpp"
#include "koitervi/mesh.hpp"
#include "koitervi/shell.hpp"
#include "koitervi/sparse.hpp"

namespace koitervi {

using FieldFn = std::function<double(double, double)>;

struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleGapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SpaceKind { Membrane, Koiter };

/// Discrete spaces over the structured grid.
///   Membrane: Q1 x Q1 x Q1, tangential components clamped on the boundary,
///   transverse dofs free everywhere (discrete stand-in for L^2).
///   Koiter: Q1 x Q1 x bicubic Hermite (BFS); tangential clamped on the
///   boundary, all four Hermite dofs clamped at boundary nodes.
struct DofMap {
    SpaceKind space_kind = SpaceKind::Membrane;
    int num_nodes = 0;
    int total_dofs = 0;
    std::vector<char> clamped_mask;
    std::vector<int> transverse_value_dofs;   // dofs carrying pointwise eta3 values
    std::vector<int> transverse_value_nodes;  // node of each such dof

    int tangential_dof(int comp, int node) const { return comp * num_nodes + node; }
    int transverse_dof(int node, int herm = 0) const {
        return space_kind == SpaceKind::Membrane ? 2 * num_nodes + node
                                                 : 2 * num_nodes + 4 * node + herm;
    }
    std::vector<char> free_mask() const;
};

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind);

struct GapField {
    FieldFn expr;
    std::vector<double> node_values;
};

GapField make_gap_field(const Mesh& mesh, FieldFn s);

// Bilinear form assembly.  With parallel=true the element matrices are
// computed cell-parallel and accumulated in deterministic cell order, so the
// result is independent of the thread count.
SparseMatrix assemble_membrane(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, bool parallel = true);
SparseMatrix assemble_flexural(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, bool parallel = true);

/// Gram matrix of the H1 x H1 x L2 norm (plain Lebesgue measure, no sqrt(a));
/// membrane space only.
SparseMatrix assemble_vm_gram(const Mesh& mesh, const DofMap& dofmap);

std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                                  const std::array<FieldFn, 3>& p);

/// lower[d] = -s(node(d)) at transverse value dofs, -inf elsewhere.
std::vector<double> assemble_gap_bounds(const DofMap& dofmap, const Mesh& mesh,
                                        const GapField& gap);

/// Row/column elimination with unit diagonal on clamped dofs; load entries zeroed.
void apply_boundary_conditions(SparseMatrix& A, std::vector<double>& f, const DofMap& dofmap);

// Direct quadrature-loop evaluation of the bilinear forms for two coefficient
// vectors; independent of the matrix path, used for Galerkin consistency checks.
double bilinear_membrane_value(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, const std::vector<double>& u,
                               const std::vector<double>& v);
double bilinear_flexural_value(const Mesh& mesh, const DofMap& dofmap, const Chart& chart,
                               const LameConstants& lame, const std::vector<double>& u,
                               const std::vector<double>& v);

// interpolation helpers
void set_tangential_nodal(const Mesh& mesh, const DofMap& dofmap, int comp, const FieldFn& f,
                          std::vector<double>& u);
void set_transverse_nodal(const Mesh& mesh, const DofMap& dofmap, const FieldFn& f,
                          std::vector<double>& u);
void set_transverse_hermite(const Mesh& mesh, const DofMap& dofmap, const FieldFn& f,
                            const FieldFn& fx, const FieldFn& fy, const FieldFn& fxy,
                            std::vector<double>& u);

/// Number of local dofs per cell for the space.
int local_dofs(SpaceKind kind);

}  // namespace koitervi
