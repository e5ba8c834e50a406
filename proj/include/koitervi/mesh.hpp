#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "koitervi/geometry.hpp"

namespace koitervi {

/// Structured quadrilateral grid on (-c,c)^2, nodes ordered row-major
/// (j*(nx+1)+i), cells counterclockwise.
struct Mesh {
    int nx = 0, ny = 0;
    double c = 0.0;
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 4>> cells;
    std::vector<int> boundary_nodes;
    std::vector<char> is_boundary;

    int node_index(int i, int j) const { return j * (nx + 1) + i; }
    int num_nodes() const { return static_cast<int>(nodes.size()); }
    double hx() const { return 2.0 * c / nx; }
    double hy() const { return 2.0 * c / ny; }

    /// whitespace-separated node list then cell list, for debugging
    void write_ascii(std::ostream& os) const;
};

Mesh build_mesh(const Chart& chart, int nx, int ny);

}  // namespace koitervi
