#include "koitervi/fem.hpp"

namespace koitervi {

std::vector<char> DofMap::free_mask() const {
    std::vector<char> free(total_dofs, 1);
    for (int d = 0; d < total_dofs; ++d)
        if (clamped_mask[d]) free[d] = 0;
    return free;
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind) {
    DofMap dm;
    dm.space_kind = kind;
    dm.num_nodes = mesh.num_nodes();
    dm.total_dofs = kind == SpaceKind::Membrane ? 3 * dm.num_nodes : 6 * dm.num_nodes;
    dm.clamped_mask.assign(dm.total_dofs, 0);
    for (int node = 0; node < dm.num_nodes; ++node) {
        if (mesh.is_boundary[node]) {
            dm.clamped_mask[dm.tangential_dof(0, node)] = 1;
            dm.clamped_mask[dm.tangential_dof(1, node)] = 1;
            if (kind == SpaceKind::Koiter)
                for (int h = 0; h < 4; ++h) dm.clamped_mask[dm.transverse_dof(node, h)] = 1;
        }
        dm.transverse_value_dofs.push_back(dm.transverse_dof(node, 0));
        dm.transverse_value_nodes.push_back(node);
    }
    return dm;
}

GapField make_gap_field(const Mesh& mesh, FieldFn s) {
    GapField g;
    g.expr = std::move(s);
    g.node_values.reserve(mesh.num_nodes());
    for (const auto& p : mesh.nodes) g.node_values.push_back(g.expr(p[0], p[1]));
    return g;
}

int local_dofs(SpaceKind kind) { return kind == SpaceKind::Membrane ? 12 : 24; }

}  // namespace koitervi
