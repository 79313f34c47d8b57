#include "kw/kw_systems.hpp"

#include <limits>

#include "fft_util.hpp"

namespace kw {

namespace {

void require_dim4(const Configuration &cfg, const char *what) {
    if (cfg.grid().dim != 4)
        throw std::domain_error(std::string(what) + " requires a 4-torus");
}

// [phi_j, mu] pointwise, mu a zero-form
AdjointForm bracket_phi_scalar(const AdjointForm &phi, const AdjointForm &mu) {
    AdjointForm out(phi.grid(), 1);
    for (long i = 0; i < phi.sites(); ++i)
        for (int j = 0; j < phi.grid().dim; ++j)
            out.at(i, j) = bracket(phi.at(i, j), mu.at(i, 0));
    return out;
}

} // namespace

KWResidual kw_residual(const Configuration &cfg, ThetaParameter theta) {
    require_dim4(cfg, "kw_residual");
    double ct = std::cos(theta.radians), st = std::sin(theta.radians);

    AdjointForm flat = curvature(cfg.A) - half_phi_wedge_phi(cfg.phi);
    AdjointForm dphi = covariant_d(cfg.A, cfg.phi);

    KWResidual r{project_pm(ct * flat - st * dphi, +1),
                 project_pm(st * flat + ct * dphi, -1),
                 covariant_codiff(cfg.A, cfg.phi)};
    r.r_plus_norm = l2_norm(r.r_plus);
    r.r_minus_norm = l2_norm(r.r_minus);
    r.r_moment_norm = l2_norm(r.r_moment);

    ComplexAdjointForm rotated = cplx{ct, st} * combine(flat, dphi);
    r.succinct_sq = l2_norm_sq(project_pm(rotated, +1));
    r.opposite_sq = l2_norm_sq(project_pm(rotated, -1));
    return r;
}

double kw_alt_check(const Configuration &cfg, ThetaParameter theta) {
    require_dim4(cfg, "kw_alt_check");
    if (theta.alt_form_pole())
        throw std::domain_error("alt form undefined at theta = 0 or pi/2 (mod pi)");
    double cot2 = std::cos(2.0 * theta.radians) / std::sin(2.0 * theta.radians);
    double csc2 = 1.0 / std::sin(2.0 * theta.radians);

    AdjointForm flat = curvature(cfg.A) - half_phi_wedge_phi(cfg.phi);
    AdjointForm dphi = covariant_d(cfg.A, cfg.phi);
    AdjointForm defect = flat + cot2 * dphi - csc2 * hodge_star(dphi);
    return l2_norm(defect);
}

ELResidual el_residual(const Configuration &cfg) {
    AdjointForm flat = curvature(cfg.A) - half_phi_wedge_phi(cfg.phi);
    AdjointForm dphi = covariant_d(cfg.A, cfg.phi);

    ELResidual r;
    r.grad_A = 2.0 * (covariant_codiff(cfg.A, flat) + contract_two_form(dphi, cfg.phi));
    r.grad_phi = 2.0 * (covariant_codiff(cfg.A, dphi) - contract_two_form(flat, cfg.phi));
    r.norm_A = l2_norm(r.grad_A);
    r.norm_phi = l2_norm(r.grad_phi);
    return r;
}

WeitzenbockReport weitzenbock_check(const Configuration &cfg) {
    const TorusGrid &g = cfg.grid();
    const AdjointForm &A = cfg.A;
    const AdjointForm &phi = cfg.phi;

    AdjointForm F = curvature(A);
    AdjointForm lap = rough_laplacian(A, phi);
    AdjointForm dphi = covariant_d(A, phi);
    AdjointForm mu = covariant_codiff(A, phi);

    // [F_A, phi]_k = sum_j [F_{kj}, phi_j] = -contract(F, phi)
    AdjointForm FtimesPhi = -1.0 * contract_two_form(F, phi);

    AdjointForm hodge_side = covariant_codiff(A, dphi) + covariant_d(A, mu);
    AdjointForm w2_defect = (lap - FtimesPhi) - hodge_side;

    WeitzenbockReport rep{};
    rep.r_weitz = l2_norm(w2_defect);

    // triple bracket (1/2)[[phi,phi],phi]_k = sum_j [[phi_k,phi_j],phi_j]
    AdjointForm triple(g, 1);
    for (long i = 0; i < g.sites(); ++i)
        for (int k = 0; k < g.dim; ++k) {
            AlgebraElement acc{};
            for (int j = 0; j < g.dim; ++j)
                acc += bracket(bracket(phi.at(i, k), phi.at(i, j)), phi.at(i, j));
            triple.at(i, k) = acc;
        }

    // Exact linear combination: the reduced equation equals the Weitzenboch
    // defect plus the second Euler-Lagrange line plus D_A(D_A^* phi),
    // independent of whether cfg solves anything.
    AdjointForm flat = F - half_phi_wedge_phi(phi);
    AdjointForm el2 = covariant_codiff(A, dphi) - contract_two_form(flat, phi);
    AdjointForm reduced = lap - triple;
    AdjointForm combo = w2_defect + el2 + covariant_d(A, mu);
    rep.r_cym_reduced = l2_norm(reduced - combo);

    // ric2 scalar field: (1/2) Lap |phi|^2 - |nabla phi|^2 - |[phi,phi]|^2
    std::vector<double> phisq(g.sites());
    for (long i = 0; i < g.sites(); ++i) {
        double s = 0.0;
        for (int j = 0; j < g.dim; ++j) s += norm_sq(phi.at(i, j));
        phisq[i] = s;
    }
    std::vector<double> lap_phisq = scalar_laplacian(g, phisq);
    FullGradient grad = nabla(A, phi);
    rep.ric2_field.resize(g.sites());
    double mn = std::numeric_limits<double>::infinity();
    for (long i = 0; i < g.sites(); ++i) {
        double gradsq = 0.0;
        for (int j = 0; j < g.dim; ++j)
            for (int k = 0; k < g.dim; ++k) gradsq += norm_sq(grad.at(i, j, k));
        double brsq = 0.0;
        for (int j = 0; j < g.dim; ++j)
            for (int k = 0; k < g.dim; ++k)
                brsq += norm_sq(bracket(phi.at(i, j), phi.at(i, k)));
        double v = 0.5 * lap_phisq[i] - gradsq - brsq;
        rep.ric2_field[i] = v;
        mn = std::min(mn, v);
    }
    rep.ric2_min = mn;
    return rep;
}

GaugeFixResult coulomb_gauge_fix(const AdjointForm &A, double tol, int max_iter) {
    if (A.degree() != 1) throw std::invalid_argument("gauge fixing expects a one-form");
    const TorusGrid &g = A.grid();
    AdjointForm zero(g, 1);

    GaugeFixResult res;
    res.gauge = GaugeField(g);
    res.A_fixed = A;

    GridFft fft(g);
    // precompute the stencil Laplacian symbol; zero modes stay untouched
    std::vector<double> inv_symbol(g.sites());
    for (long m = 0; m < g.sites(); ++m) {
        auto mx = g.coords(m);
        double lam = 0.0;
        for (int j = 0; j < g.dim; ++j) {
            double s = stencil_symbol(g, mx[j]);
            lam -= s * s;
        }
        inv_symbol[m] = (std::abs(lam) > 1e-14) ? 1.0 / lam : 0.0;
    }

    for (int it = 0; it < max_iter; ++it) {
        AdjointForm dstar = covariant_codiff(zero, res.A_fixed); // d*A, zero-form
        res.final_divergence = l2_norm(dstar);
        res.iterations = it;
        if (res.final_divergence <= tol) return res;
        if (!std::isfinite(res.final_divergence)) break;

        // solve Lap u = div A = -d*A per algebra coefficient, gauge by exp(u)
        AdjointForm u(g, 0);
        for (int a = 0; a < 3; ++a) {
            auto &buf = fft.buffer();
            for (long i = 0; i < g.sites(); ++i) buf[i] = {-dstar.at(i, 0).c[a], 0.0};
            fft.forward();
            for (long m = 0; m < g.sites(); ++m) buf[m] *= inv_symbol[m];
            fft.backward();
            double scale = 1.0 / static_cast<double>(g.sites());
            for (long i = 0; i < g.sites(); ++i) u.at(i, 0).c[a] = scale * buf[i].real();
        }
        GaugeField step = exp_gauge(u);
        Configuration tmp(res.A_fixed, zero);
        res.A_fixed = apply_gauge(tmp, step).A;
        for (long i = 0; i < g.sites(); ++i) res.gauge.g[i] = step.g[i] * res.gauge.g[i];
    }

    AdjointForm dstar = covariant_codiff(zero, res.A_fixed);
    res.final_divergence = l2_norm(dstar);
    res.iterations = max_iter;
    if (res.final_divergence <= tol) return res;
    throw DivergenceError("gauge fixing did not converge (field too large)");
}

QSplitReport q_split(const Configuration &cfg, ThetaParameter theta) {
    require_dim4(cfg, "q_split");
    const TorusGrid &g = cfg.grid();
    double ct = std::cos(theta.radians), st = std::sin(theta.radians);
    const AdjointForm &A = cfg.A;
    const AdjointForm &phi = cfg.phi;

    QSplitReport rep{ct * A - st * phi, st * A + ct * phi, 0.0, {0, 0, 0, 0}, 0.0};
    rep.rotation_defect = std::abs((l2_norm_sq(rep.q1) + l2_norm_sq(rep.q2)) -
                                   (l2_norm_sq(A) + l2_norm_sq(phi)));

    AdjointForm zero1(g, 1);
    AdjointForm quadAA = half_phi_wedge_phi(A);
    AdjointForm quadPP = half_phi_wedge_phi(phi);
    AdjointForm quadAP = bracket_wedge(A, phi);
    AdjointForm contrAP = contract_one_forms(A, phi);

    AdjointForm L1 = project_pm(covariant_d(zero1, rep.q1) + ct * (quadAA - quadPP) - st * quadAP, +1);
    AdjointForm L2 = covariant_codiff(zero1, rep.q1) + st * contrAP;
    AdjointForm L3 = project_pm(covariant_d(zero1, rep.q2) + st * (quadAA - quadPP) + ct * quadAP, -1);
    AdjointForm L4 = covariant_codiff(zero1, rep.q2) - ct * contrAP;

    rep.residual_norms[0] = l2_norm(L1);
    rep.residual_norms[1] = l2_norm(L2);
    rep.residual_norms[2] = l2_norm(L3);
    rep.residual_norms[3] = l2_norm(L4);

    // exact repackaging: (L1, L3) are the family lines, (L2, L4) the rotation
    // of (d*A, moment map)
    KWResidual kw = kw_residual(cfg, theta);
    AdjointForm dstarA = covariant_codiff(zero1, A);
    AdjointForm mu = covariant_codiff(cfg.A, phi);
    double d = 0.0;
    d = std::max(d, l2_norm(L1 - kw.r_plus));
    d = std::max(d, l2_norm(L3 - kw.r_minus));
    d = std::max(d, l2_norm(L2 - (ct * dstarA - st * mu)));
    d = std::max(d, l2_norm(L4 - (st * dstarA + ct * mu)));
    rep.repackaging_defect = d;
    return rep;
}

ResidualValue kw_residual_functional(const Configuration &cfg, ThetaParameter theta,
                                     TangentPair *grad) {
    require_dim4(cfg, "kw residual functional");
    double ct = std::cos(theta.radians), st = std::sin(theta.radians);
    const AdjointForm &A = cfg.A;
    const AdjointForm &phi = cfg.phi;

    AdjointForm flat = curvature(A) - half_phi_wedge_phi(phi);
    AdjointForm dphi = covariant_d(A, phi);
    AdjointForm rp = project_pm(ct * flat - st * dphi, +1);
    AdjointForm rm = project_pm(st * flat + ct * dphi, -1);
    AdjointForm mu = covariant_codiff(A, phi);

    ResidualValue v;
    v.r_plus_sq = l2_norm_sq(rp);
    v.r_minus_sq = l2_norm_sq(rm);
    v.moment_sq = l2_norm_sq(mu);
    v.R = v.r_plus_sq + v.r_minus_sq + v.moment_sq;

    if (grad) {
        AdjointForm dp = covariant_codiff(A, rp);
        AdjointForm dm = covariant_codiff(A, rm);
        AdjointForm cp = contract_two_form(rp, phi);
        AdjointForm cm = contract_two_form(rm, phi);
        AdjointForm dmu = covariant_d(A, mu);
        AdjointForm bmu = bracket_phi_scalar(phi, mu);
        grad->B = 2.0 * (ct * dp + st * dm - st * cp + ct * cm - bmu);
        grad->psi = 2.0 * (-st * dp + ct * dm - ct * cp - st * cm + dmu);
    }
    return v;
}

namespace {

double tangent_inner(const TangentPair &a, const TangentPair &b) {
    return l2_inner(a.B, b.B) + l2_inner(a.psi, b.psi);
}

Configuration step_config(const Configuration &x, const TangentPair &dir, double alpha) {
    Configuration out(x.grid());
    out.A = x.A - alpha * dir.B;
    out.phi = x.phi - alpha * dir.psi;
    return out;
}

} // namespace

MinimizeResult minimize_kw(const Configuration &cfg0, ThetaParameter theta,
                           const MinimizeOptions &opt) {
    MinimizeResult res;
    res.cfg = cfg0;

    TangentPair grad(cfg0.grid());
    ResidualValue v = kw_residual_functional(res.cfg, theta, &grad);
    res.log.push_back({0, v.R, std::sqrt(v.r_plus_sq), std::sqrt(v.r_minus_sq),
                       std::sqrt(v.moment_sq), 0.0});
    if (v.R <= opt.tol) {
        res.converged = true;
        res.status = "converged";
        res.final_R = v.R;
        return res;
    }

    double alpha = opt.step0;
    TangentPair prev_grad = grad;
    double prev_alpha = 0.0;

    for (int it = 1; it <= opt.max_iter; ++it) {
        double gnorm_sq = tangent_inner(grad, grad);
        if (gnorm_sq == 0.0) break;

        double trial = alpha;
        if (opt.step_rule == "bb" && prev_alpha > 0.0) {
            // s = -prev_alpha * g_prev, y = g - g_prev; alpha_bb = <s,s>/<s,y>
            TangentPair y(res.cfg.grid());
            y.B = grad.B - prev_grad.B;
            y.psi = grad.psi - prev_grad.psi;
            double ss = prev_alpha * prev_alpha * tangent_inner(prev_grad, prev_grad);
            double sy = -prev_alpha * tangent_inner(prev_grad, y);
            if (sy > 0.0 && std::isfinite(ss / sy)) trial = ss / sy;
        }

        bool accepted = false;
        ResidualValue vn;
        Configuration next(res.cfg.grid());
        for (int bt = 0; bt < opt.max_backtracks; ++bt) {
            next = step_config(res.cfg, grad, trial);
            vn = kw_residual_functional(next, theta, nullptr);
            if (vn.R <= v.R - 1e-4 * trial * gnorm_sq) {
                accepted = true;
                break;
            }
            trial *= 0.5;
        }
        if (!accepted) {
            res.status = "stalled";
            res.final_R = v.R;
            return res;
        }

        prev_grad = grad;
        prev_alpha = trial;
        res.cfg = std::move(next);
        v = kw_residual_functional(res.cfg, theta, &grad);
        alpha = trial;
        res.log.push_back({it, v.R, std::sqrt(v.r_plus_sq), std::sqrt(v.r_minus_sq),
                           std::sqrt(v.moment_sq), trial});
        if (v.R <= opt.tol) {
            res.converged = true;
            res.status = "converged";
            res.final_R = v.R;
            return res;
        }
    }
    res.status = res.converged ? "converged" : "max_iter";
    res.final_R = v.R;
    return res;
}

} // namespace kw
