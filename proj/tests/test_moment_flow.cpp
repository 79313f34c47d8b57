#include <doctest.h>

#include "kw/cs_flow.hpp"
#include "kw/gauge.hpp"
#include "kw/moment_geometry.hpp"
#include "kw/random_fields.hpp"

using namespace kw;

namespace {
AlgebraElement e(int a) {
    AlgebraElement x;
    x.c[a] = 1.0;
    return x;
}
} // namespace

TEST_CASE("Kahler pairing: antisymmetry and the sign convention") {
    TorusGrid g(3, 8);
    TangentPair t1(g), t2(g);
    t1.B = random_pointwise_form(g, 1, 1);
    t1.psi = random_pointwise_form(g, 2, 1);
    t2.B = random_pointwise_form(g, 3, 1);
    t2.psi = random_pointwise_form(g, 4, 1);

    CHECK(kahler_pairing(t1, t1) == 0.0);
    CHECK(kahler_pairing(t1, t2) == doctest::Approx(-kahler_pairing(t2, t1)).epsilon(1e-15));

    // t1 = (B, 0), t2 = (0, psi) with B = psi: omega = +|B|^2
    TangentPair a(g), b(g);
    a.B = t1.B;
    b.psi = t1.B;
    CHECK(kahler_pairing(a, b) == doctest::Approx(l2_norm_sq(t1.B)).epsilon(1e-14));

    // the flat structure never references a base configuration: the pairing
    // is a function of the tangents alone
    CHECK(kahler_pairing(t1, t2) == kahler_pairing(t1, t2));
}

TEST_CASE("moment map examples") {
    TorusGrid g(3, 8);
    Configuration c(g);
    c.A = random_one_form(g, 5, 0.2, 2);
    CHECK(l2_norm(moment_map(c)) == 0.0); // phi = 0

    // A = 0, phi = e1 sin(x1) dx1 -> mu = -e1 cos(x1) up to the symbol factor
    Configuration cp(g);
    for (long i = 0; i < g.sites(); ++i)
        cp.phi.at(i, 0) = std::sin(g.coordinate(i, 0)) * e(0);
    AdjointForm mu = moment_map(cp);
    double sym = std::sin(g.spacing()) / g.spacing();
    double worst = 0.0;
    for (long i = 0; i < g.sites(); ++i) {
        AlgebraElement want = -sym * std::cos(g.coordinate(i, 0)) * e(0);
        worst = std::max(worst, std::sqrt(norm_sq(mu.at(i, 0) - want)));
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("moment map is gauge covariant to O(h^2)") {
    double prev = 0.0;
    for (int n : {8, 16}) {
        TorusGrid g(4, n);
        Configuration c = random_configuration(g, 6, 0.2, 1);
        GaugeField gf = exp_gauge(random_zero_form(g, 7, 0.2, 1));
        double d = l2_norm(moment_map(apply_gauge(c, gf)) -
                           adjoint_transform(moment_map(c), gf));
        if (prev > 0.0) CHECK(prev / d > 3.4);
        prev = d;
    }
}

TEST_CASE("Hamiltonian identity holds to roundoff on both torus dimensions") {
    for (int dim : {3, 4}) {
        TorusGrid g(dim, 8);
        for (std::uint64_t s = 0; s < 5; ++s) {
            Configuration c = random_configuration(g, 100 + s, 0.3, 2);
            AdjointForm V = random_pointwise_form(g, 200 + s, 0);
            TangentPair t(g);
            t.B = random_pointwise_form(g, 300 + s, 1);
            t.psi = random_pointwise_form(g, 400 + s, 1);
            CHECK(moment_identity_check(c, V, t) < 1e-10);

            // dH along the gauge direction itself is omega(gv, gv) = 0
            TangentPair gv = gauge_direction(c, V);
            CHECK(moment_identity_check(c, V, gv) < 1e-10);
        }
    }
}

TEST_CASE("flow right-hand side") {
    TorusGrid g(3, 8);
    TangentPair rhs0 = flow_rhs(Configuration(g), 0.4);
    CHECK(l2_norm(rhs0.B) == 0.0);
    CHECK(l2_norm(rhs0.psi) == 0.0);

    // phi = 0, theta = 0: Adot = *F_A, phidot = 0 (real flow recovered)
    Configuration c(g);
    c.A = random_one_form(g, 8, 0.2, 2);
    TangentPair rhs = flow_rhs(c, 0.0);
    CHECK(l2_norm(rhs.B - hodge_star(curvature(c.A))) == 0.0);
    CHECK(l2_norm(rhs.psi) == 0.0);

    CHECK_THROWS_AS(flow_rhs(Configuration(TorusGrid(4, 4)), 0.0), std::domain_error);

    // abelian closed form: F_C = dA + i d phi, rhs from the exact derivative
    double prev = 0.0;
    for (int n : {8, 16}) {
        TorusGrid gn(3, n);
        Configuration cn(gn);
        for (long i = 0; i < gn.sites(); ++i) {
            double x = gn.coordinate(i, 0);
            cn.A.at(i, 1) = std::sin(x) * e(0);
            cn.phi.at(i, 2) = std::cos(x) * e(0);
        }
        double th = 0.3;
        TangentPair r = flow_rhs(cn, th);
        // exact curvature: F_01 = cos(x) e1, (D phi)_02 = -sin(x) e1; with
        // W = e^{2 i th} F_C and the 3d star *(01) = dx2, *(02) = -dx1:
        //   Adot  =  cos2th cos(x) dx2 - sin2th sin(x) dx1
        //   phidot = -sin2th cos(x) dx2 - cos2th sin(x) dx1
        TangentPair want(gn);
        double c2 = std::cos(2 * th), s2 = std::sin(2 * th);
        for (long i = 0; i < gn.sites(); ++i) {
            double x = gn.coordinate(i, 0);
            want.B.at(i, 2) = c2 * std::cos(x) * e(0);
            want.B.at(i, 1) = -s2 * std::sin(x) * e(0);
            want.psi.at(i, 2) = -s2 * std::cos(x) * e(0);
            want.psi.at(i, 1) = -c2 * std::sin(x) * e(0);
        }
        double d = l2_norm(r.B - want.B) + l2_norm(r.psi - want.psi);
        if (prev > 0.0) CHECK(prev / d > 3.4);
        prev = d;
    }
}

TEST_CASE("flow integration basics") {
    TorusGrid g(3, 8);

    SUBCASE("zero initial data is a fixed point") {
        FlowOptions opt;
        opt.dt = 0.05;
        opt.steps = 10;
        FlowState st = integrate_flow(Configuration(g), 0.25 * std::numbers::pi, opt);
        CHECK(!st.diverged);
        CHECK(st.history.size() == 11);
        for (const auto &row : st.history) {
            CHECK(row.cs_re == 0.0);
            CHECK(row.grad_sq == 0.0);
        }
        CHECK(l2_norm(st.cfg.A) == 0.0);
    }
    SUBCASE("stability guard rejects large steps") {
        FlowOptions opt;
        opt.dt = 0.5; // > 0.2 h for n = 8
        CHECK_THROWS_AS(integrate_flow(Configuration(g), 0.0, opt), std::invalid_argument);
    }
    SUBCASE("history is strictly increasing in t") {
        FlowOptions opt;
        opt.dt = 0.05;
        opt.steps = 8;
        Configuration c0 = random_configuration(g, 9, 0.05, 2);
        FlowState st = integrate_flow(c0, 0.1, opt);
        for (size_t i = 1; i < st.history.size(); ++i)
            CHECK(st.history[i].t > st.history[i - 1].t);
    }
}

TEST_CASE("rk4 step halving shows fourth-order history convergence") {
    TorusGrid g(3, 8);
    Configuration c0 = random_configuration(g, 10, 0.05, 2);
    double theta = 0.25 * std::numbers::pi;

    auto final_cs = [&](double dt, int steps) {
        FlowOptions opt;
        opt.dt = dt;
        opt.steps = steps;
        FlowState st = integrate_flow(c0, theta, opt);
        REQUIRE(!st.diverged);
        return cplx{st.history.back().cs_re, st.history.back().cs_im};
    };
    cplx a = final_cs(0.08, 8), b = final_cs(0.04, 16), c = final_cs(0.02, 32);
    double e1 = std::abs(a - c), e2 = std::abs(b - c);
    // (e1 - e2)/e2 ratio for dt-halving of a 4th order scheme ~ 16
    CHECK(e1 / e2 > 11.0);

    // euler drops to first order
    auto final_cs_euler = [&](double dt, int steps) {
        FlowOptions opt;
        opt.dt = dt;
        opt.steps = steps;
        opt.scheme = FlowScheme::euler;
        FlowState st = integrate_flow(c0, theta, opt);
        REQUIRE(!st.diverged);
        return cplx{st.history.back().cs_re, st.history.back().cs_im};
    };
    cplx ae = final_cs_euler(0.08, 8), be = final_cs_euler(0.04, 16), ce = final_cs_euler(0.02, 32);
    double r = std::abs(ae - ce) / std::abs(be - ce);
    CHECK(r > 1.6);
    CHECK(r < 4.0);
}

TEST_CASE("flow diagnostics: chain rule, drift, succinct form") {
    TorusGrid g(3, 8);
    Configuration c0 = random_configuration(g, 11, 0.05, 2);
    c0.phi = AdjointForm(g, 1); // mu(0) = 0 exactly
    double theta = 0.3;

    FlowOptions opt;
    opt.dt = 0.02;
    opt.steps = 25;
    opt.record_states = true;
    FlowState st = integrate_flow(c0, theta, opt);
    REQUIRE(!st.diverged);
    CHECK(st.history.front().moment_norm == 0.0);

    FlowDiagnostics d = flow_diagnostics(st);
    double scale = std::max(1.0, std::abs(d.energy_quadrature));
    CHECK(d.chain_rule_defect / scale < 20.0 * std::pow(opt.dt, 4));
    CHECK(d.moment_drift >= 0.0);
    CHECK(d.moment_drift < 10.0 * g.spacing() * g.spacing());
    // rhs-based and state-difference reconstructions of the spacetime energy
    // agree at O(dt)
    CHECK(std::abs(d.spacetime_quadrature - d.energy_quadrature) <
          10.0 * opt.dt * std::max(1.0, d.energy_quadrature));

    double sd = succinct_form_defect(st, theta);
    CHECK(sd < 10.0 * (opt.dt + g.spacing() * g.spacing()));

    // zero trajectory: all diagnostics vanish
    FlowState z = integrate_flow(Configuration(g), theta, opt);
    FlowDiagnostics dz = flow_diagnostics(z);
    CHECK(dz.chain_rule_defect == 0.0);
    CHECK(dz.moment_drift == 0.0);
    CHECK(succinct_form_defect(z, theta) == 0.0);
}

TEST_CASE("flow blowup guard returns partial history") {
    TorusGrid g(3, 4);
    Configuration c0 = random_configuration(g, 12, 0.05, 1);
    FlowOptions opt;
    opt.dt = 0.2 * g.spacing();
    opt.steps = 50;
    opt.blowup_factor = 1e-6; // threshold far below the field norm: trips at once
    FlowState st = integrate_flow(c0, 0.25 * std::numbers::pi, opt);
    REQUIRE(st.diverged);
    CHECK(st.history.size() >= 1);
    CHECK(st.divergence_message.find("flow diverged at t=") == 0);
    CHECK(st.t < opt.steps * opt.dt);
}
