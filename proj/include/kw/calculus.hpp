#ifndef KW_CALCULUS_HPP
#define KW_CALCULUS_HPP

#include "kw/forms.hpp"

// Discrete covariant exterior calculus on the periodic grid.  The partial
// derivative stencils are exactly antisymmetric, so covariant_codiff is the
// exact L2 adjoint of covariant_d (summation by parts holds to roundoff).

namespace kw {

/// covariant exterior derivative d_A w with antisymmetrized components
/// (d_A w)_K = sum_{j in K} sgn (d_j w_{K\j} + [A_j, w_{K\j}])
AdjointForm covariant_d(const AdjointForm &A, const AdjointForm &w);
ComplexAdjointForm covariant_d(const AdjointForm &A, const ComplexAdjointForm &w);

/// d_A with the complex connection A + i phi (used by the complex Bianchi identity)
ComplexAdjointForm covariant_d_complex(const Configuration &cfg, const ComplexAdjointForm &w);

/// exact discrete adjoint of covariant_d
AdjointForm covariant_codiff(const AdjointForm &A, const AdjointForm &w);
ComplexAdjointForm covariant_codiff(const AdjointForm &A, const ComplexAdjointForm &w);

/// F_A with components d_j A_k - d_k A_j + [A_j, A_k]
AdjointForm curvature(const AdjointForm &A);

/// two-form with components [phi_j, phi_k]  (the value of (1/2)[phi ^ phi])
AdjointForm half_phi_wedge_phi(const AdjointForm &phi);

/// [a ^ b]_{jk} = [a_j, b_k] - [a_k, b_j] for one-forms
AdjointForm bracket_wedge(const AdjointForm &a, const AdjointForm &b);

/// F_C = F_A - (1/2)[phi^phi] + i D_A phi
ComplexAdjointForm complex_curvature(const Configuration &cfg);

/// contraction of a two-form against a one-form: out_k = sum_j [T_{jk}, phi_j]
AdjointForm contract_two_form(const AdjointForm &t, const AdjointForm &phi);

/// pointwise contraction sum_j [a_j, b_j] (a zero-form)
AdjointForm contract_one_forms(const AdjointForm &a, const AdjointForm &b);

/// Full covariant derivative (nabla_A phi)_{j,k} = d_j phi_k + [A_j, phi_k],
/// stored row-major per site (dim x dim algebra values).
struct FullGradient {
    TorusGrid grid;
    std::vector<AlgebraElement> data;

    FullGradient() = default;
    FullGradient(const TorusGrid &g)
        : grid(g), data(static_cast<size_t>(g.sites()) * g.dim * g.dim) {}

    AlgebraElement &at(long site, int j, int k) {
        return data[(static_cast<size_t>(site) * grid.dim + j) * grid.dim + k];
    }
    const AlgebraElement &at(long site, int j, int k) const {
        return data[(static_cast<size_t>(site) * grid.dim + j) * grid.dim + k];
    }

    double l2_norm_sq() const;
};

FullGradient nabla(const AdjointForm &A, const AdjointForm &phi);

/// rough Laplacian nabla^* nabla phi assembled with the exact discrete adjoint
AdjointForm rough_laplacian(const AdjointForm &A, const AdjointForm &phi);

/// plain scalar Laplacian sum_j d_j d_j applied to a scalar grid function
std::vector<double> scalar_laplacian(const TorusGrid &g, const std::vector<double> &f);

} // namespace kw

#endif
