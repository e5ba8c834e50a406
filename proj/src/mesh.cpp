#include "koitervi/mesh.hpp"

#include <cstdio>
#include <stdexcept>

namespace koitervi {

Mesh build_mesh(const Chart& chart, int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("build_mesh: nx and ny must be >= 2");
    Mesh m;
    m.nx = nx;
    m.ny = ny;
    m.c = chart.half_width();
    m.nodes.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.nodes.push_back({-m.c + 2.0 * m.c * i / nx, -m.c + 2.0 * m.c * j / ny});
    m.cells.reserve(nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            m.cells.push_back({m.node_index(i, j), m.node_index(i + 1, j),
                               m.node_index(i + 1, j + 1), m.node_index(i, j + 1)});
    m.is_boundary.assign(m.nodes.size(), 0);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (i == 0 || i == nx || j == 0 || j == ny) {
                m.is_boundary[m.node_index(i, j)] = 1;
                m.boundary_nodes.push_back(m.node_index(i, j));
            }
    return m;
}

void Mesh::write_ascii(std::ostream& os) const {
    char buf[96];
    os << num_nodes() << " " << cells.size() << "\n";
    for (const auto& p : nodes) {
        std::snprintf(buf, sizeof(buf), "%.12e %.12e\n", p[0], p[1]);
        os << buf;
    }
    for (const auto& cell : cells)
        os << cell[0] << " " << cell[1] << " " << cell[2] << " " << cell[3] << "\n";
}

}  // namespace koitervi
