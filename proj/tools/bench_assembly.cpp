#include <chrono>
#include <cmath>
#include <cstdio>

#include "koitervi/fem.hpp"

using namespace koitervi;

namespace {

double time_assembly(const Mesh& mesh, const DofMap& dm, const Chart& chart,
                     const LameConstants& lame, bool parallel, int reps) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        SparseMatrix A = assemble_membrane(mesh, dm, chart, lame, parallel);
        if (dm.space_kind == SpaceKind::Koiter) {
            SparseMatrix F = assemble_flexural(mesh, dm, chart, lame, parallel);
            (void)F;
        }
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

double matrix_diff(const SparseMatrix& a, const SparseMatrix& b) {
    double d = 0.0;
    for (size_t k = 0; k < a.values().size(); ++k)
        d = std::max(d, std::fabs(a.values()[k] - b.values()[k]));
    return d;
}

}  // namespace

int main() {
    Chart chart = Chart::sphere_graph(1.0, 0.5);
    LameConstants lame(1.0, 1.0);
    std::printf("%-8s %-10s %12s %12s %9s %12s\n", "space", "mesh", "serial[s]", "parallel[s]",
                "speedup", "max|diff|");
    for (int n : {16, 32, 64}) {
        Mesh mesh = build_mesh(chart, n, n);
        for (SpaceKind kind : {SpaceKind::Membrane, SpaceKind::Koiter}) {
            DofMap dm = build_dofmap(mesh, kind);
            double ts = time_assembly(mesh, dm, chart, lame, false, 3);
            double tp = time_assembly(mesh, dm, chart, lame, true, 3);
            SparseMatrix As = assemble_membrane(mesh, dm, chart, lame, false);
            SparseMatrix Ap = assemble_membrane(mesh, dm, chart, lame, true);
            std::printf("%-8s %3dx%-6d %12.4f %12.4f %8.2fx %12.3e\n",
                        kind == SpaceKind::Membrane ? "membrane" : "koiter", n, n, ts, tp, ts / tp,
                        matrix_diff(As, Ap));
        }
    }
    return 0;
}
