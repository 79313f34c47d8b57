#include <doctest.h>

#include <random>

#include "kw/algebra.hpp"
#include "kw/random_fields.hpp"
#include "oracle.hpp"

using namespace kw;

namespace {

AlgebraElement e(int a) {
    AlgebraElement x;
    x.c[a] = 1.0;
    return x;
}

AlgebraElement random_elem(std::mt19937_64 &rng, double scale = 1.0) {
    return {scale * uniform_pm1(rng), scale * uniform_pm1(rng), scale * uniform_pm1(rng)};
}

ComplexAlgebraElement random_celem(std::mt19937_64 &rng, double scale = 1.0) {
    return {random_elem(rng, scale), random_elem(rng, scale)};
}

} // namespace

TEST_CASE("bracket structure constants") {
    CHECK(pairing(bracket(e(0), e(1)) - e(2), bracket(e(0), e(1)) - e(2)) == 0.0);
    std::mt19937_64 rng(7);
    AlgebraElement x = random_elem(rng);
    CHECK(norm_sq(bracket(x, x)) == 0.0); // antisymmetry on the diagonal
}

TEST_CASE("complex bracket against the dense matrix commutator") {
    // (e1 + i e2, e2): expected from the 2x2 commutator oracle
    ComplexAlgebraElement x{e(0), e(1)};
    ComplexAlgebraElement y{e(1), {}};
    ComplexAlgebraElement got = bracket(x, y);
    ComplexAlgebraElement want =
        oracle::extract(oracle::commutator(oracle::embed(x), oracle::embed(y)));
    CHECK(oracle::dist(got, want) < 1e-14);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        ComplexAlgebraElement a = random_celem(rng), b = random_celem(rng);
        ComplexAlgebraElement viamat =
            oracle::extract(oracle::commutator(oracle::embed(a), oracle::embed(b)));
        CHECK(oracle::dist(bracket(a, b), viamat) < 1e-12);
    }
}

TEST_CASE("pairing is -2 tr(XY) and the basis is orthonormal") {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(pairing(e(a), e(b)) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-15));

    // (e1 + i e3, e1) via the matrix-trace oracle
    ComplexAlgebraElement x{e(0), e(2)};
    ComplexAlgebraElement y{e(0), {}};
    cplx got = pairing(x, y);
    oracle::C want = oracle::C{-2, 0} *
                     oracle::trace(oracle::mul(oracle::embed(x), oracle::embed(y)));
    CHECK(std::abs(got - cplx{want.real(), want.imag()}) < 1e-14);

    std::mt19937_64 rng(13);
    for (int k = 0; k < 200; ++k) {
        ComplexAlgebraElement a = random_celem(rng), b = random_celem(rng);
        oracle::C tr = oracle::trace(oracle::mul(oracle::embed(a), oracle::embed(b)));
        CHECK(std::abs(pairing(a, b) - cplx{-2.0 * tr.real(), -2.0 * tr.imag()}) < 1e-12);
    }
}

TEST_CASE("exp_map against the series oracle") {
    // identity at zero
    GroupElement g0 = exp_map({});
    CHECK(g0.w == 1.0);
    CHECK(g0.x == 0.0);

    // angle pi about axis 3
    GroupElement gpi = exp_map(std::numbers::pi * e(2));
    oracle::M2 want = oracle::exp_series(oracle::embed(std::numbers::pi * e(2)));
    CHECK(oracle::dist(oracle::to_oracle(gpi), want) < 1e-13);

    // |X| = 2 pi lands on -identity (spin cover)
    GroupElement g2pi = exp_map(2.0 * std::numbers::pi * e(1));
    CHECK(std::abs(g2pi.w + 1.0) < 1e-13);
    CHECK(std::abs(g2pi.x) + std::abs(g2pi.y) + std::abs(g2pi.z) < 1e-12);

    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) {
        AlgebraElement x = random_elem(rng, 2.0);
        GroupElement g = exp_map(x);
        CHECK(oracle::dist(oracle::to_oracle(g), oracle::exp_series(oracle::embed(x))) < 1e-12);
        GroupElement gg = g * exp_map(-1.0 * x);
        CHECK(std::abs(gg.w - 1.0) + std::abs(gg.x) + std::abs(gg.y) + std::abs(gg.z) < 1e-12);
        CHECK(std::abs(g.quat_norm_sq() - 1.0) < 1e-12);
    }
}

TEST_CASE("adjoint action: rotation, isometry, matrix oracle") {
    AlgebraElement x = e(0);
    GroupElement g = exp_map(0.5 * std::numbers::pi * e(2));
    AlgebraElement rot = adjoint_action(g, x); // e1 rotated toward e2
    CHECK(std::abs(rot.c[1] - 1.0) < 1e-13);
    CHECK(std::abs(rot.c[0]) + std::abs(rot.c[2]) < 1e-13);
    CHECK(std::abs(std::sqrt(norm_sq(rot)) - 1.0) < 1e-13); // isometry

    // identity fixes everything
    AlgebraElement same = adjoint_action(GroupElement{}, x);
    CHECK(norm_sq(same - x) == 0.0);

    std::mt19937_64 rng(19);
    for (int k = 0; k < 100; ++k) {
        AlgebraElement u = random_elem(rng);
        AlgebraElement v = random_elem(rng);
        GroupElement h = exp_map(random_elem(rng, 3.0));
        // pairing invariance under the real group
        CHECK(pairing(adjoint_action(h, u), adjoint_action(h, v)) ==
              doctest::Approx(pairing(u, v)).epsilon(1e-12));
        // against dense conjugation
        oracle::M2 m = oracle::mul(oracle::mul(oracle::to_oracle(h), oracle::embed(u)),
                                   oracle::inverse(oracle::to_oracle(h)));
        ComplexAlgebraElement want = oracle::extract(m);
        CHECK(oracle::dist(ComplexAlgebraElement{adjoint_action(h, u)}, want) < 1e-12);
    }
}

TEST_CASE("complex adjoint action and degenerate elements") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 50; ++k) {
        ComplexAlgebraElement x = random_celem(rng);
        ComplexGroupElement g = to_matrix(random_celem(rng)); // traceless, not unimodular
        g.a += cplx{1.0, 0.0};
        g.d += cplx{1.0, 0.0};
        cplx det = g.det();
        if (std::abs(det) < 0.1) continue;
        ComplexAlgebraElement got = adjoint_action(g, x);
        oracle::M2 gm{g.a, g.b, g.c, g.d};
        ComplexAlgebraElement want =
            oracle::extract(oracle::mul(oracle::mul(gm, oracle::embed(x)), oracle::inverse(gm)));
        CHECK(oracle::dist(got, want) < 1e-11);
    }

    ComplexGroupElement singular{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
    CHECK_THROWS_WITH_AS(adjoint_action(singular, ComplexAlgebraElement{e(0)}),
                         "degenerate group element", std::domain_error);
}

TEST_CASE("Jacobi, ad-invariance, conj anti-involution") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 300; ++k) {
        ComplexAlgebraElement x = random_celem(rng), y = random_celem(rng), z = random_celem(rng);
        ComplexAlgebraElement jac =
            bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        CHECK(std::sqrt(norm_sq(jac)) < 1e-12);

        cplx adinv = pairing(bracket(z, x), y) + pairing(x, bracket(z, y));
        CHECK(std::abs(adinv) < 1e-12);

        ComplexAlgebraElement lhs = conj(bracket(x, y));
        ComplexAlgebraElement rhs = bracket(conj(x), conj(y));
        CHECK(oracle::dist(lhs, rhs) == 0.0);
        ComplexAlgebraElement cc = conj(conj(x));
        CHECK(oracle::dist(cc, x) == 0.0);
    }
}
