#include "kw/moment_geometry.hpp"

namespace kw {

double kahler_pairing(const TangentPair &t1, const TangentPair &t2) {
    detail::check_same_grid(t1.grid(), t2.grid());
    return l2_inner(t1.B, t2.psi) - l2_inner(t2.B, t1.psi);
}

AdjointForm moment_map(const Configuration &cfg) {
    return covariant_codiff(cfg.A, cfg.phi);
}

TangentPair gauge_direction(const Configuration &cfg, const AdjointForm &V) {
    detail::check_same_grid(cfg.grid(), V.grid());
    if (V.degree() != 0) throw std::invalid_argument("gauge generator must be a zero-form");
    TangentPair t(cfg.grid());
    t.B = covariant_d(cfg.A, V);
    for (long i = 0; i < cfg.phi.sites(); ++i)
        for (int j = 0; j < cfg.grid().dim; ++j)
            t.psi.at(i, j) = bracket(cfg.phi.at(i, j), V.at(i, 0));
    return t;
}

double moment_identity_check(const Configuration &cfg, const AdjointForm &V,
                             const TangentPair &t) {
    detail::check_same_grid(cfg.grid(), V.grid());
    detail::check_same_grid(cfg.grid(), t.grid());

    // dH(t): H = <D_A^* phi, V>; the A-dependence of D_A^* contributes
    // -sum_j [B_j, phi_j], the phi-dependence contributes D_A^* psi.
    AdjointForm dmu = covariant_codiff(cfg.A, t.psi) - contract_one_forms(t.B, cfg.phi);
    double dH = l2_inner(dmu, V);

    double omega_side = kahler_pairing(gauge_direction(cfg, V), t);
    return std::abs(dH - omega_side);
}

} // namespace kw
