#include "kw/cs_flow.hpp"

namespace kw {

namespace {

void require_dim3(const Configuration &cfg) {
    if (cfg.grid().dim != 3) throw std::domain_error("the flow lives on a 3-torus");
}

Configuration cfg_axpy(const Configuration &x, double a, const TangentPair &d) {
    Configuration out(x.grid());
    out.A = x.A + a * d.B;
    out.phi = x.phi + a * d.psi;
    return out;
}

double cfg_norm(const Configuration &x) {
    return std::sqrt(l2_norm_sq(x.A) + l2_norm_sq(x.phi));
}

// composite Simpson, 3/8 tail when the interval count is odd
double simpson(const std::vector<double> &f, double dt) {
    size_t m = f.size();
    if (m < 2) return 0.0;
    if (m == 2) return 0.5 * dt * (f[0] + f[1]);
    size_t intervals = m - 1;
    double total = 0.0;
    size_t even_end = intervals;
    if (intervals % 2 == 1) even_end = intervals - 3;
    for (size_t i = 0; i + 2 <= even_end; i += 2)
        total += dt / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (intervals % 2 == 1) {
        // odd interval counts end with a 3/8 block (intervals >= 3 here)
        size_t i = even_end;
        total += 3.0 * dt / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
    return total;
}

} // namespace

TangentPair flow_rhs(const Configuration &cfg3, double theta) {
    require_dim3(cfg3);
    ComplexAdjointForm fc = complex_curvature(cfg3);
    ComplexAdjointForm rotated = cplx{std::cos(2.0 * theta), std::sin(2.0 * theta)} * fc;
    TangentPair rhs(cfg3.grid());
    rhs.B = hodge_star(real_part(rotated));
    rhs.psi = -1.0 * hodge_star(imag_part(rotated));
    return rhs;
}

FlowState integrate_flow(const Configuration &cfg0, double theta, const FlowOptions &opt) {
    require_dim3(cfg0);
    const TorusGrid &g = cfg0.grid();
    if (opt.dt > opt.cfl * g.spacing() * (1.0 + 1e-12))
        throw std::invalid_argument("time step violates the stability guard dt <= cfl * h");
    if (opt.steps < 1) throw std::invalid_argument("flow needs at least one step");

    FlowState st;
    st.cfg = cfg0;
    st.t = 0.0;

    const cplx phase{std::cos(2.0 * theta), std::sin(2.0 * theta)};
    double blowup = opt.blowup_factor * cfg_norm(cfg0);

    auto record = [&](const TangentPair &rhs) {
        cplx cs = phase * chern_simons(st.cfg);
        double gsq = l2_norm_sq(rhs.B) + l2_norm_sq(rhs.psi);
        double mu = l2_norm(covariant_codiff(st.cfg.A, st.cfg.phi));
        st.history.push_back({st.t, cs.real(), cs.imag(), gsq, mu});
        if (opt.record_states) {
            st.states.push_back(st.cfg);
            st.rhs_samples.push_back(rhs);
        }
    };

    for (int step = 0; step < opt.steps; ++step) {
        TangentPair k1 = flow_rhs(st.cfg, theta);
        record(k1);

        Configuration next(g);
        if (opt.scheme == FlowScheme::euler) {
            next = cfg_axpy(st.cfg, opt.dt, k1);
        } else {
            TangentPair k2 = flow_rhs(cfg_axpy(st.cfg, 0.5 * opt.dt, k1), theta);
            TangentPair k3 = flow_rhs(cfg_axpy(st.cfg, 0.5 * opt.dt, k2), theta);
            TangentPair k4 = flow_rhs(cfg_axpy(st.cfg, opt.dt, k3), theta);
            next = st.cfg;
            next.A += (opt.dt / 6.0) * (k1.B + 2.0 * k2.B + 2.0 * k3.B + k4.B);
            next.phi += (opt.dt / 6.0) * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
        }

        st.cfg = std::move(next);
        st.t += opt.dt;

        double norm = cfg_norm(st.cfg);
        if (!std::isfinite(norm) || (blowup > 0.0 && norm > blowup)) {
            st.diverged = true;
            st.divergence_message = "flow diverged at t=" + std::to_string(st.t);
            return st;
        }
    }
    record(flow_rhs(st.cfg, theta));
    return st;
}

FlowDiagnostics flow_diagnostics(const FlowState &state) {
    if (state.history.size() < 2)
        throw std::invalid_argument("flow diagnostics need at least two history rows");
    const auto &h = state.history;
    double dt = h[1].t - h[0].t;

    FlowDiagnostics d{};
    d.cs_difference = cplx{h.front().cs_re - h.back().cs_re,
                           h.front().cs_im - h.back().cs_im};

    // |rhs|^2 equals int |F_C(3d)|^2 (the star is an isometry), so the
    // history already carries the energy density of the chain rule
    std::vector<double> e3(h.size());
    for (size_t i = 0; i < h.size(); ++i) e3[i] = h[i].grad_sq;
    d.energy_quadrature = simpson(e3, dt);
    d.chain_rule_defect = std::abs(d.cs_difference - cplx{d.energy_quadrature, 0.0});

    // spacetime reconstruction from state differences, when available
    d.spacetime_quadrature = d.energy_quadrature;
    if (state.states.size() >= 2) {
        double total = 0.0;
        for (size_t k = 0; k + 1 < state.states.size(); ++k) {
            const Configuration &a = state.states[k];
            const Configuration &b = state.states[k + 1];
            AdjointForm adot = (1.0 / dt) * (b.A - a.A);
            AdjointForm pdot = (1.0 / dt) * (b.phi - a.phi);
            double temporal = l2_norm_sq(adot) + l2_norm_sq(pdot);
            double spatial = 0.5 * (l2_norm_sq(complex_curvature(a)) +
                                    l2_norm_sq(complex_curvature(b)));
            total += 0.5 * dt * (spatial + temporal);
        }
        d.spacetime_quadrature = total;
    }

    double mu0 = h.front().moment_norm;
    double drift = 0.0;
    for (const auto &row : h) drift = std::max(drift, row.moment_norm - mu0);
    d.moment_drift = drift;
    return d;
}

double succinct_form_defect(const FlowState &state, double theta) {
    if (state.states.size() < 2)
        throw std::invalid_argument("succinct-form check needs recorded states");
    const TorusGrid &g = state.states.front().grid();
    double dt = state.history.size() > 1 ? state.history[1].t - state.history[0].t : 0.0;
    const cplx eith{std::cos(theta), std::sin(theta)};
    double dv = g.cell_volume();

    // 4d two-form slots: 0:(t1) 1:(t2) 2:(t3) 3:(12) 4:(13) 5:(23);
    // *conj pairs: (t1)<->(23)+, (t2)<->(13)-, (t3)<->(12)+
    const int dual[6] = {5, 4, 3, 2, 1, 0};
    const double sgn[6] = {1.0, -1.0, 1.0, 1.0, -1.0, 1.0};

    double worst = 0.0;
    for (size_t k = 0; k + 1 < state.states.size(); ++k) {
        const Configuration &a = state.states[k];
        const Configuration &b = state.states[k + 1];
        AdjointForm adot = (1.0 / dt) * (b.A - a.A);
        AdjointForm pdot = (1.0 / dt) * (b.phi - a.phi);
        ComplexAdjointForm fc3 = complex_curvature(a); // spatial comps (12),(13),(23)

        double acc = reduce_sites(g.sites(), [&](long i) {
            std::array<ComplexAlgebraElement, 6> T;
            for (int j = 0; j < 3; ++j)
                T[j] = eith * ComplexAlgebraElement{adot.at(i, j), pdot.at(i, j)};
            for (int c = 0; c < 3; ++c) T[3 + c] = eith * fc3.at(i, c);
            double s = 0.0;
            for (int c = 0; c < 6; ++c) {
                ComplexAlgebraElement defect = T[c] - sgn[c] * conj(T[dual[c]]);
                s += norm_sq(defect);
            }
            return s;
        });
        worst = std::max(worst, std::sqrt(dv * acc));
    }
    return worst;
}

} // namespace kw
