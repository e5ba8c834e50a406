#include "koitervi/shell.hpp"

namespace koitervi {

ElasticityTensor2D elasticity_tensor(const GeometryPointData& geom, const LameConstants& lame) {
    const Mat2& ac = geom.a_con_form;
    double c0 = 4.0 * lame.lambda * lame.mu / (lame.lambda + 2.0 * lame.mu);
    ElasticityTensor2D t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int s = 0; s < 2; ++s)
                for (int tau = 0; tau < 2; ++tau)
                    t.comp[a][b][s][tau] = c0 * (ac[a][b] * ac[s][tau]) +
                                           2.0 * lame.mu * (ac[a][s] * ac[b][tau] + ac[a][tau] * ac[b][s]);
    return t;
}

StrainPointValues gamma_ab(const GeometryPointData& geom, const std::array<double, 3>& eta_vals,
                           const Mat2& eta_grads) {
    StrainPointValues out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double v = 0.5 * (eta_grads[a][b] + eta_grads[b][a]) - geom.b_cov[a][b] * eta_vals[2];
            for (int s = 0; s < 2; ++s) v -= geom.christoffel[s][a][b] * eta_vals[s];
            out.gamma[a][b] = v;
        }
    return out;
}

StrainPointValues rho_ab(const GeometryPointData& geom, const GeometryDerivs& derivs,
                         const std::array<double, 3>& eta_vals, const Mat2& eta_grads,
                         const std::array<double, 2>& eta3_grad, const Mat2& eta3_hess) {
    StrainPointValues out;
    const auto& b = geom.b_cov;
    const auto& bm = geom.b_mixed;  // bm[a][t] = b^t_a
    const auto& G = geom.christoffel;
    Mat2 r{};
    for (int a = 0; a < 2; ++a)
        for (int be = 0; be < 2; ++be) {
            double v = eta3_hess[a][be];
            for (int s = 0; s < 2; ++s) v -= G[s][a][be] * eta3_grad[s];
            double bb = 0.0;
            for (int s = 0; s < 2; ++s) bb += bm[a][s] * b[s][be];
            v -= bb * eta_vals[2];
            for (int s = 0; s < 2; ++s) {
                double cov = eta_grads[s][be];
                for (int t = 0; t < 2; ++t) cov -= G[t][be][s] * eta_vals[t];
                v += bm[a][s] * cov;
            }
            for (int t = 0; t < 2; ++t) {
                double cov = eta_grads[t][a];
                for (int s = 0; s < 2; ++s) cov -= G[s][a][t] * eta_vals[s];
                v += bm[be][t] * cov;
            }
            for (int t = 0; t < 2; ++t) {
                double cb = derivs.d_b_mixed[a][be][t];  // d_a b^t_be
                for (int s = 0; s < 2; ++s)
                    cb += G[t][a][s] * bm[be][s] - G[s][a][be] * bm[s][t];
                v += cb * eta_vals[t];
            }
            r[a][be] = v;
        }
    // Codazzi makes this symmetric analytically; enforce it against rounding
    out.rho[0][0] = r[0][0];
    out.rho[1][1] = r[1][1];
    out.rho[0][1] = out.rho[1][0] = 0.5 * (r[0][1] + r[1][0]);
    return out;
}

std::array<double, 2> energy_densities(const ElasticityTensor2D& tensor,
                                       const StrainPointValues& s1, const StrainPointValues& s2) {
    double em = 0.0, ef = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t) {
                    em += tensor.comp[a][b][s][t] * s1.gamma[s][t] * s2.gamma[a][b];
                    ef += tensor.comp[a][b][s][t] * s1.rho[s][t] * s2.rho[a][b];
                }
    return {em, ef / 3.0};
}

}  // namespace koitervi
