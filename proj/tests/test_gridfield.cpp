#include <cmath>
#include <random>

#include "doctest.h"
#include "koitervi/gridfield.hpp"
#include "koitervi/lab.hpp"

using namespace koitervi;

namespace {

GridField random_grid(int n, double h0, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    GridField g;
    g.ni = g.nj = n;
    g.ox = g.oy = -0.5;
    g.h0 = h0;
    g.v.resize(static_cast<size_t>(n) * n);
    for (double& x : g.v) x = U(rng);
    return g;
}

GridField pointwise_product(const GridField& a, const GridField& b) {
    GridField g = a;
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] = a.v[i] * b.v[i];
    return g;
}

}  // namespace

TEST_CASE("first quotients: linear and constant fields") {
    GridField lin = grid_from_fn(9, 9, -0.5, -0.5, 0.125, [](double y1, double) { return y1; });
    GridField cst = grid_from_fn(9, 9, -0.5, -0.5, 0.125, [](double, double) { return 3.0; });
    for (double h : {0.125, 0.25}) {
        GridField d = diff_forward(lin, 1, h);
        for (double v : d.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
        GridField z = diff_forward(cst, 2, h);
        for (double v : z.v) CHECK(v == 0.0);
    }
    GridField b = diff_backward(lin, 1, 0.125);
    CHECK(b.ox == doctest::Approx(-0.375));
    for (double v : b.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quotient argument guards") {
    GridField g = grid_from_fn(9, 9, -0.5, -0.5, 0.125, [](double y1, double y2) { return y1 * y2; });
    CHECK_THROWS_AS(diff_forward(g, 1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(diff_forward(g, 3, 0.125), std::invalid_argument);
    CHECK_THROWS_AS(diff_forward(g, 1, 0.125 * 9), std::domain_error);
    CHECK_THROWS_AS(diff_second(g, 1, 0.125 * 4.0 + 0.125), std::domain_error);
}

TEST_CASE("second quotients: polynomial exactness and concavity sign") {
    GridField q = grid_from_fn(17, 17, -0.5, -0.5, 0.0625,
                               [](double y1, double) { return y1 * y1; });
    for (double h : {0.0625, 0.125, 0.25}) {
        GridField d = diff_second(q, 1, h);
        for (double v : d.v) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
        GridField z = diff_second(q, 2, h);
        for (double v : z.v) CHECK(std::fabs(v) < 1e-12);
    }
    GridField aff = grid_from_fn(17, 17, -0.5, -0.5, 0.0625,
                                 [](double y1, double y2) { return 1.0 + 2 * y1 - 3 * y2; });
    for (int rho : {1, 2}) {
        GridField d = diff_second(aff, rho, 0.0625);
        for (double v : d.v) CHECK(std::fabs(v) < 1e-12);
    }
    GridField conc = grid_from_fn(17, 17, -0.5, -0.5, 0.0625,
                                  [](double y1, double y2) { return -(y1 * y1 + y2 * y2); });
    for (int rho : {1, 2}) {
        GridField d = diff_second(conc, rho, 0.125);
        for (double v : d.v) CHECK(v == doctest::Approx(-2.0).epsilon(1e-12));
    }
}

TEST_CASE("Leibniz rules and the second-quotient composition") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 12;
        double h0 = 1.0 / (n - 1);
        GridField v = random_grid(n, h0, rng), w = random_grid(n, h0, rng);
        GridField vw = pointwise_product(v, w);
        int k = 1 + trial % 3;
        double h = k * h0;

        // forward rule: D(vw) = (E w) Dv + v Dw
        GridField dvw = diff_forward(vw, 1, h);
        GridField dv = diff_forward(v, 1, h), dw = diff_forward(w, 1, h);
        for (int j = 0; j < dvw.nj; ++j)
            for (int i = 0; i < dvw.ni; ++i) {
                double rhs = w.at(i + k, j) * dv.at(i, j) + v.at(i, j) * dw.at(i, j);
                CHECK(dvw.at(i, j) == doctest::Approx(rhs).epsilon(1e-12));
            }

        // backward rule: D_b(vw)(y) = w(y-h) D_b v + v D_b w, valid at index i+k
        GridField bvw = diff_backward(vw, 2, h);
        GridField bv = diff_backward(v, 2, h), bw = diff_backward(w, 2, h);
        for (int j = 0; j < bvw.nj; ++j)
            for (int i = 0; i < bvw.ni; ++i) {
                double rhs = w.at(i, j) * bv.at(i, j) + v.at(i, j + k) * bw.at(i, j);
                CHECK(bvw.at(i, j) == doctest::Approx(rhs).epsilon(1e-12));
            }

        // second-order rule: delta(vw) = v delta w + w delta v + Dv Dw + D_b v D_b w
        GridField svw = diff_second(vw, 1, h);
        GridField sv = diff_second(v, 1, h), sw = diff_second(w, 1, h);
        GridField bv1 = diff_backward(v, 1, h), bw1 = diff_backward(w, 1, h);
        for (int j = 0; j < svw.nj; ++j)
            for (int i = 0; i < svw.ni; ++i) {
                double rhs = v.at(i + k, j) * sw.at(i, j) + w.at(i + k, j) * sv.at(i, j) +
                             dv.at(i + k, j) * dw.at(i + k, j) + bv1.at(i, j) * bw1.at(i, j);
                CHECK(svw.at(i, j) == doctest::Approx(rhs).epsilon(1e-12));
            }

        // composition: delta = D_b(D_f)
        GridField comp = diff_backward(diff_forward(v, 1, h), 1, h);
        CHECK(comp.ni == sv.ni);
        CHECK(comp.ox == doctest::Approx(sv.ox).epsilon(1e-14));
        for (size_t m = 0; m < comp.v.size(); ++m)
            CHECK(comp.v[m] == doctest::Approx(sv.v[m]).epsilon(1e-12));
    }
}

TEST_CASE("feasible perturbation: trivial, randomized, and guard cases") {
    int n = 21;
    double h0 = 1.0 / (n - 1);
    auto make_grids = [&](double a, double b, double c1, double c2) {
        GridField s = grid_from_fn(n, n, -0.5, -0.5, h0, [=](double y1, double y2) {
            return 2.0 - a * (y1 - c1) * (y1 - c1) - b * (y2 - c2) * (y2 - c2);
        });
        return s;
    };

    {
        GridField s = make_grids(1.0, 1.0, 0.0, 0.0);
        GridField zero = grid_from_fn(n, n, -0.5, -0.5, h0, [](double, double) { return 0.0; });
        GridField phi = grid_from_fn(n, n, -0.5, -0.5, h0, [](double y1, double y2) {
            return std::max(std::fabs(y1), std::fabs(y2)) < 0.3 ? 1.0 : 0.0;
        });
        GridField out = feasible_perturbation(zero, s, phi, 1, 2 * h0, h0 * h0);
        for (double v : out.v) CHECK(v == 0.0);
    }

    std::mt19937 rng(71);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        double a = 4.0 * U(rng), b = 4.0 * U(rng);
        double c1 = 0.4 * (U(rng) - 0.5), c2 = 0.4 * (U(rng) - 0.5);
        GridField s = make_grids(a, b, c1, c2);
        GridField eta = s;
        for (double& v : eta.v) v = -v;  // touching the obstacle everywhere
        int k = 1 + static_cast<int>(U(rng) * 3);
        double h = k * h0;
        double rc = U(rng) * 0.499 * h * h + 1e-12;
        int rho = 1 + (trial % 2);
        double supp = 0.5 - (k + 1) * h0;
        double amp = U(rng);
        GridField phi = grid_from_fn(n, n, -0.5, -0.5, h0, [=](double y1, double y2) {
            return std::max(std::fabs(y1), std::fabs(y2)) <= supp ? amp : 0.0;
        });
        GridField out = feasible_perturbation(eta, s, phi, rho, h, rc);
        for (size_t m = 0; m < out.v.size(); ++m)
            if (out.v[m] + s.v[m] < -1e-12) ++failures;
    }
    CHECK(failures == 0);

    {
        GridField convex = grid_from_fn(n, n, -0.5, -0.5, h0, [](double y1, double y2) {
            return y1 * y1 + y2 * y2 + 1.0;
        });
        GridField eta = convex;
        for (double& v : eta.v) v = -v;
        GridField phi = grid_from_fn(n, n, -0.5, -0.5, h0, [](double y1, double y2) {
            return std::max(std::fabs(y1), std::fabs(y2)) < 0.3 ? 1.0 : 0.0;
        });
        CHECK_THROWS_AS(feasible_perturbation(eta, convex, phi, 1, 2 * h0, h0 * h0),
                        std::domain_error);
        GridField s = make_grids(1.0, 1.0, 0.0, 0.0);
        GridField eta2 = s;
        for (double& v : eta2.v) v = -v;
        CHECK_THROWS_AS(feasible_perturbation(eta2, s, phi, 1, 2 * h0, 2.1 * h0 * h0),
                        std::invalid_argument);
    }
}

TEST_CASE("convexifier: constant, smooth, and bilinear gaps") {
    struct Case {
        SmoothField s;
        std::array<double, 2> y0;
    };
    SmoothField one{[](double, double) { return 1.0; },   [](double, double) { return 0.0; },
                    [](double, double) { return 0.0; },   [](double, double) { return 0.0; },
                    [](double, double) { return 0.0; },   [](double, double) { return 0.0; }};
    SmoothField sine{[](double y1, double) { return 2.0 + std::sin(y1); },
                     [](double y1, double) { return std::cos(y1); },
                     [](double, double) { return 0.0; },
                     [](double y1, double) { return -std::sin(y1); },
                     [](double, double) { return 0.0; },
                     [](double, double) { return 0.0; }};
    SmoothField bilin{[](double y1, double y2) { return 1.0 + 0.25 * y1 * y2; },
                      [](double, double y2) { return 0.25 * y2; },
                      [](double y1, double) { return 0.25 * y1; },
                      [](double, double) { return 0.0; },
                      [](double, double) { return 0.25; },
                      [](double, double) { return 0.0; }};
    Case cases[] = {{one, {0.0, 0.0}}, {sine, {0.3, 0.0}}, {bilin, {0.1, 0.1}}};
    for (const Case& c : cases) {
        Convexifier cx = build_convexifier(c.s, c.y0, 0.5);
        CHECK(cx.B0 == 0.25);
        CHECK(cx.T > 0.0);
        CHECK(cx.U_halfwidth <= std::log(1.5) / (2.0 * cx.r) + 1e-15);
        double min_eig = 1e30, gmin = 1e30, gmax = -1e30;
        for (int j = 0; j < 33; ++j)
            for (int i = 0; i < 33; ++i) {
                double x = c.y0[0] + cx.U_halfwidth * (2.0 * i / 32.0 - 1.0);
                double y = c.y0[1] + cx.U_halfwidth * (2.0 * j / 32.0 - 1.0);
                double g = convexifier_g(cx, x, y);
                gmin = std::min(gmin, g);
                gmax = std::max(gmax, g);
                Mat2 H = convexifier_hessian(cx, c.s, x, y);
                double tr = H[0][0] + H[1][1];
                double disc = std::sqrt((H[0][0] - H[1][1]) * (H[0][0] - H[1][1]) +
                                        4.0 * H[0][1] * H[0][1]);
                min_eig = std::min(min_eig, 0.5 * (tr - disc));
            }
        CHECK(gmin >= 0.25 - 1e-12);
        CHECK(gmax <= 1.0);
        CHECK(min_eig >= -1e-10);
    }

    SmoothField neg{[](double y1, double) { return y1; }, [](double, double) { return 1.0; },
                    [](double, double) { return 0.0; },   [](double, double) { return 0.0; },
                    [](double, double) { return 0.0; },   [](double, double) { return 0.0; }};
    CHECK_THROWS_AS(build_convexifier(neg, {0.0, 0.0}, 0.5), std::invalid_argument);
}

TEST_CASE("density approximant: margins and convergence") {
    int n = 65;
    double h0 = 1.0 / (n - 1);
    GridField s = grid_from_fn(n, n, -0.5, -0.5, h0, [](double, double) { return 0.5; });

    GridField zero = grid_from_fn(n, n, -0.5, -0.5, h0, [](double, double) { return 0.0; });
    GridField az = density_approximant(zero, 16, s, 0.5);
    for (double v : az.v) CHECK(v == 0.0);

    // k=1 cuts everything for c <= 0.5
    GridField some = grid_from_fn(n, n, -0.5, -0.5, h0,
                                  [](double y1, double y2) { return 0.2 + 0.1 * y1 * y2; });
    GridField a1 = density_approximant(some, 1, s, 0.5);
    for (double v : a1.v) CHECK(v == 0.0);

    // random feasible transverse field: smooth bumps kept above -s
    GridField eta = grid_from_fn(n, n, -0.5, -0.5, h0, [](double y1, double y2) {
        return -0.45 * std::cos(3.141592653589793 * y1) * std::cos(3.141592653589793 * y2) +
               0.04 * std::sin(7 * y1) * std::cos(5 * y2);
    });
    for (size_t m = 0; m < eta.v.size(); ++m) REQUIRE(eta.v[m] + s.v[m] >= 0.0);

    double err8 = 0.0, err64 = 0.0;
    for (int k : {8, 16, 32, 64}) {
        GridField ak = density_approximant(eta, k, s, 0.5);
        double margin = 1e30;
        for (size_t m = 0; m < ak.v.size(); ++m) margin = std::min(margin, ak.v[m] + s.v[m]);
        CHECK(margin >= 0.5 / k - 1e-12);
        GridField diff = ak;
        for (size_t m = 0; m < diff.v.size(); ++m) diff.v[m] -= eta.v[m];
        double err = std::sqrt(grid_l2_sq(diff));
        if (k == 8) err8 = err;
        if (k == 64) err64 = err;
    }
    CHECK(err64 < 0.5 * err8);

    GridField sbad = grid_from_fn(n, n, -0.5, -0.5, h0, [](double, double) { return 0.0; });
    CHECK_THROWS_AS(density_approximant(eta, 8, sbad, 0.5), std::domain_error);
    CHECK_THROWS_AS(density_approximant(eta, 0, s, 0.5), std::invalid_argument);
}

TEST_CASE("interior regularity probe: bounded quotients on a smooth solve") {
    Chart chart = Chart::sphere_graph(1.0, 0.5);
    Mesh mesh = build_mesh(chart, 64, 64);
    LameConstants lame(1.0, 1.0);
    DofMap dm = build_dofmap(mesh, SpaceKind::Membrane);

    auto cutoff = [](double y1, double y2) {
        double a = std::cos(2.0 * 3.141592653589793 * y1);
        double b = std::cos(2.0 * 3.141592653589793 * y2);
        double f1 = std::fabs(y1) < 0.25 ? a * a : 0.0;
        double f2 = std::fabs(y2) < 0.25 ? b * b : 0.0;
        return f1 * f2;
    };

    std::vector<double> zero(dm.total_dofs, 0.0);
    auto rows0 = interior_regularity_probe(mesh, dm, zero, 0.25, cutoff, 3);
    CHECK(rows0.size() == 6);
    for (const ProbeRow& r : rows0) {
        CHECK(r.norm_h1_tan == 0.0);
        CHECK(r.norm_l2_trans == 0.0);
    }

    GapField gap = make_gap_field(mesh, [](double, double) { return 1000.0; });
    auto p3 = [](double y1, double y2) {
        double g1 = std::cos(3.141592653589793 * y1);
        double g2 = std::cos(3.141592653589793 * y2);
        return -g1 * g1 * g2 * g2;
    };
    std::array<FieldFn, 3> p = {[](double, double) { return 0.0; },
                                [](double, double) { return 0.0; }, p3};
    ShellSolveReport sol = solve_membrane_limit(chart, mesh, lame, gap, p, 1e-11);
    auto rows = interior_regularity_probe(mesh, dm, sol.qp.u, 0.25, cutoff, 3);
    for (int rho = 1; rho <= 2; ++rho) {
        double lo_t = 1e30, hi_t = 0.0, lo_l = 1e30, hi_l = 0.0;
        for (const ProbeRow& r : rows)
            if (r.rho == rho) {
                lo_t = std::min(lo_t, r.norm_h1_tan);
                hi_t = std::max(hi_t, r.norm_h1_tan);
                lo_l = std::min(lo_l, r.norm_l2_trans);
                hi_l = std::max(hi_l, r.norm_l2_trans);
            }
        CHECK(hi_t / lo_t < 1.2);
        CHECK(hi_l / lo_l < 1.2);
    }

    CHECK_THROWS_AS(interior_regularity_probe(mesh, dm, sol.qp.u, 0.45, cutoff, 3),
                    std::domain_error);
    DofMap dk = build_dofmap(mesh, SpaceKind::Koiter);
    std::vector<double> w(dk.total_dofs, 0.0);
    CHECK_THROWS_AS(interior_regularity_probe(mesh, dk, w, 0.25, cutoff, 3), ContractError);
}

TEST_CASE("grid norms against closed forms") {
    int n = 33;
    double h0 = 1.0 / (n - 1);
    GridField cst = grid_from_fn(n, n, -0.5, -0.5, h0, [](double, double) { return 2.0; });
    CHECK(grid_l2_sq(cst) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(grid_h1_sq(cst) == doctest::Approx(4.0).epsilon(1e-12));
    GridField lin = grid_from_fn(n, n, -0.5, -0.5, h0, [](double y1, double) { return y1; });
    // int y1^2 = 1/12, int |grad|^2 = 1
    CHECK(grid_l2_sq(lin) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(grid_h1_sq(lin) == doctest::Approx(1.0 / 12.0 + 1.0).epsilon(1e-12));
}
