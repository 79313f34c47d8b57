#include "kw/functionals.hpp"

#include <numbers>

#include <json.hpp>

namespace kw {

EnergyBreakdown energies(const Configuration &cfg, double theta) {
    const TorusGrid &g = cfg.grid();
    EnergyBreakdown e;

    AdjointForm F = curvature(cfg.A);
    e.ym = l2_norm_sq(F);

    AdjointForm flat = F - half_phi_wedge_phi(cfg.phi);
    AdjointForm dphi = covariant_d(cfg.A, cfg.phi);
    e.flat_part = l2_norm_sq(flat);
    e.dphi_part = l2_norm_sq(dphi);
    e.cym = e.flat_part + e.dphi_part;

    AdjointForm mu = covariant_codiff(cfg.A, cfg.phi);
    e.moment_part = l2_norm_sq(mu);
    e.augmented = e.cym + e.moment_part;

    if (g.dim == 4) {
        ComplexAdjointForm fc = combine(flat, dphi);
        ComplexAdjointForm rotated = cplx{std::cos(theta), std::sin(theta)} * fc;
        e.sd_defect_part = 2.0 * l2_norm_sq(project_pm(rotated, -1));
        cplx topo = wedge_tr_integral(fc, fc);
        e.topo_part = topo;
        e.k_estimate_part = topo.real() / (8.0 * std::numbers::pi * std::numbers::pi);
    }
    return e;
}

cplx chern_simons(const Configuration &cfg3) {
    const TorusGrid &g = cfg3.grid();
    if (g.dim != 3) throw std::domain_error("Chern-Simons requires a 3-torus");
    ComplexAdjointForm a = combine(cfg3.A, cfg3.phi);
    // plain exterior derivative: covariant d with zero connection
    AdjointForm zero(g, 1);
    ComplexAdjointForm da = covariant_d(zero, a);
    cplx quadratic = 0.5 * wedge_tr_integral(a, da);
    cplx cubic = (1.0 / 3.0) * wedge_tr3_integral(a, a, a);
    return quadratic + cubic;
}

cplx chern_simons_derivative(const Configuration &cfg3, const TangentPair &t) {
    if (cfg3.grid().dim != 3) throw std::domain_error("Chern-Simons requires a 3-torus");
    detail::check_same_grid(cfg3.grid(), t.grid());
    ComplexAdjointForm fc = complex_curvature(cfg3);
    return wedge_tr_integral(fc, combine(t.B, t.psi));
}

cplx topological_pairing(const Configuration &cfg) {
    if (cfg.grid().dim != 4)
        throw std::domain_error("topological pairing requires a 4-torus");
    ComplexAdjointForm fc = complex_curvature(cfg);
    return wedge_tr_integral(fc, fc);
}

std::string to_json(const EnergyBreakdown &e) {
    nlohmann::json j;
    j["ym"] = e.ym;
    j["cym"] = e.cym;
    j["augmented"] = e.augmented;
    j["flat_part"] = e.flat_part;
    j["dphi_part"] = e.dphi_part;
    j["moment_part"] = e.moment_part;
    if (e.sd_defect_part) j["sd_defect"] = *e.sd_defect_part;
    if (e.topo_part) {
        j["topo_re"] = e.topo_part->real();
        j["topo_im"] = e.topo_part->imag();
    }
    if (e.k_estimate_part) j["k_estimate"] = *e.k_estimate_part;
    return j.dump();
}

DecompositionReport decomposition_identity(const AdjointForm &A) {
    if (A.grid().dim != 4)
        throw std::domain_error("self-dual decomposition requires a 4-torus");
    AdjointForm F = curvature(A);
    DecompositionReport r{};
    r.ym = l2_norm_sq(F);
    r.sd_sq = 2.0 * l2_norm_sq(project_pm(F, +1));
    r.asd_sq = 2.0 * l2_norm_sq(project_pm(F, -1));
    r.trFF = -wedge_tr_integral(F, F);
    r.defect_plus = std::abs(r.ym - (r.sd_sq - r.trFF));
    r.defect_minus = std::abs(r.ym - (r.asd_sq + r.trFF));
    return r;
}

} // namespace kw
