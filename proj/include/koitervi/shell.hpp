#pragma once

#include "koitervi/geometry.hpp"

namespace koitervi {

/// Pointwise components a^{abst}.
struct ElasticityTensor2D {
    double comp[2][2][2][2];
};

struct StrainPointValues {
    Mat2 gamma{};  // change of metric
    Mat2 rho{};    // change of curvature
};

/// a^{abst} = (4*lambda*mu/(lambda+2*mu)) a^{ab} a^{st}
///          + 2*mu (a^{as} a^{bt} + a^{at} a^{bs})
ElasticityTensor2D elasticity_tensor(const GeometryPointData& geom, const LameConstants& lame);

/// gamma_ab(eta) = (d_b eta_a + d_a eta_b)/2 - Gamma^s_ab eta_s - b_ab eta3.
/// eta_grads[a][b] = d_b eta_a for the tangential components only.
StrainPointValues gamma_ab(const GeometryPointData& geom, const std::array<double, 3>& eta_vals,
                           const Mat2& eta_grads);

/// Koiter change-of-curvature tensor
///   rho_ab(eta) = d_ab eta3 - Gamma^s_ab d_s eta3 - b^s_a b_sb eta3
///               + b^s_a (d_b eta_s - Gamma^t_bs eta_t)
///               + b^t_b (d_a eta_t - Gamma^s_at eta_s)
///               + (d_a b^t_b + Gamma^t_as b^s_b - Gamma^s_ab b^t_s) eta_t
/// eta_grads holds the tangential gradients, eta3_grad[s] = d_s eta3 and
/// eta3_hess[a][b] = d_ab eta3.
StrainPointValues rho_ab(const GeometryPointData& geom, const GeometryDerivs& derivs,
                         const std::array<double, 3>& eta_vals, const Mat2& eta_grads,
                         const std::array<double, 2>& eta3_grad, const Mat2& eta3_hess);

/// (membrane density a^{abst} gamma_st(s1) gamma_ab(s2),
///  flexural density (1/3) a^{abst} rho_st(s1) rho_ab(s2))
std::array<double, 2> energy_densities(const ElasticityTensor2D& tensor,
                                       const StrainPointValues& s1, const StrainPointValues& s2);

}  // namespace koitervi
