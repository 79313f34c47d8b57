#include "kw/calculus.hpp"

namespace kw {

namespace {

struct Shifter {
    int dim, n;
    std::array<long, 4> stride{1, 1, 1, 1};

    explicit Shifter(const TorusGrid &g) : dim(g.dim), n(g.n) {
        stride[dim - 1] = 1;
        for (int j = dim - 2; j >= 0; --j) stride[j] = stride[j + 1] * n;
    }
    // |step| <= 2 and n >= 4, so one wrap is enough
    long at(long i, const std::array<int, 4> &x, int axis, int step) const {
        int xn = x[axis] + step;
        if (xn >= n) xn -= n;
        else if (xn < 0) xn += n;
        return i + static_cast<long>(xn - x[axis]) * stride[axis];
    }
};

template <typename Body>
void sweep(const TorusGrid &g, Body &&body) {
    for_site_ranges(g.sites(), [&](long b, long e) {
        std::array<int, 4> x = g.coords(b);
        for (long i = b; i < e; ++i) {
            body(i, x);
            for (int j = g.dim - 1; j >= 0; --j) {
                if (++x[j] < g.n) break;
                x[j] = 0;
            }
        }
    });
}

// central difference of an arbitrary indexed accessor
template <typename E, typename Get>
E stencil_deriv(const TorusGrid &g, const Shifter &sh, const Get &get, long i,
                const std::array<int, 4> &x, int axis) {
    double h = g.spacing();
    if (g.stencil == Stencil::central2) {
        return (1.0 / (2.0 * h)) * (get(sh.at(i, x, axis, 1)) - get(sh.at(i, x, axis, -1)));
    }
    E d1 = get(sh.at(i, x, axis, 1)) - get(sh.at(i, x, axis, -1));
    E d2 = get(sh.at(i, x, axis, 2)) - get(sh.at(i, x, axis, -2));
    return (1.0 / (12.0 * h)) * (8.0 * d1 - d2);
}

struct Term {
    int axis, comp;
    double sign;
};

std::vector<std::vector<Term>> d_terms(int dim, int p) {
    const FormIndex &fin = form_index(dim, p);
    const FormIndex &fout = form_index(dim, p + 1);
    std::vector<std::vector<Term>> terms(fout.count());
    for (int co = 0; co < fout.count(); ++co) {
        unsigned K = fout.masks[co];
        for (int j = 0; j < dim; ++j)
            if (K & (1u << j)) {
                unsigned J = K & ~(1u << j);
                terms[co].push_back({j, fin.position[J],
                                     static_cast<double>(FormIndex::insertion_sign(J, j))});
            }
    }
    return terms;
}

std::vector<std::vector<Term>> codiff_terms(int dim, int p) {
    const FormIndex &fin = form_index(dim, p);
    const FormIndex &fout = form_index(dim, p - 1);
    std::vector<std::vector<Term>> terms(fout.count());
    for (int co = 0; co < fout.count(); ++co) {
        unsigned J = fout.masks[co];
        for (int j = 0; j < dim; ++j)
            if (!(J & (1u << j))) {
                unsigned K = J | (1u << j);
                terms[co].push_back({j, fin.position[K],
                                     static_cast<double>(FormIndex::insertion_sign(J, j))});
            }
    }
    return terms;
}

template <typename E>
FormField<E> covariant_d_impl(const AdjointForm &A, const FormField<E> &w) {
    const TorusGrid &g = w.grid();
    detail::check_same_grid(A.grid(), g);
    if (w.degree() >= g.dim) throw std::invalid_argument("degree overflow in covariant_d");
    auto terms = d_terms(g.dim, w.degree());
    FormField<E> out(g, w.degree() + 1);
    Shifter sh(g);
    sweep(g, [&](long i, const std::array<int, 4> &x) {
        for (size_t co = 0; co < terms.size(); ++co) {
            E acc{};
            for (const Term &t : terms[co]) {
                auto get = [&](long s) { return w.at(s, t.comp); };
                E v = stencil_deriv<E>(g, sh, get, i, x, t.axis) +
                      bracket(A.at(i, t.axis), w.at(i, t.comp));
                acc += t.sign * v;
            }
            out.at(i, static_cast<int>(co)) = acc;
        }
    });
    return out;
}

template <typename E>
FormField<E> covariant_codiff_impl(const AdjointForm &A, const FormField<E> &w) {
    const TorusGrid &g = w.grid();
    detail::check_same_grid(A.grid(), g);
    if (w.degree() < 1) throw std::invalid_argument("degree underflow in covariant_codiff");
    auto terms = codiff_terms(g.dim, w.degree());
    FormField<E> out(g, w.degree() - 1);
    Shifter sh(g);
    sweep(g, [&](long i, const std::array<int, 4> &x) {
        for (size_t co = 0; co < terms.size(); ++co) {
            E acc{};
            for (const Term &t : terms[co]) {
                auto get = [&](long s) { return w.at(s, t.comp); };
                E v = stencil_deriv<E>(g, sh, get, i, x, t.axis) +
                      bracket(A.at(i, t.axis), w.at(i, t.comp));
                acc -= t.sign * v;
            }
            out.at(i, static_cast<int>(co)) = acc;
        }
    });
    return out;
}

} // namespace

AdjointForm covariant_d(const AdjointForm &A, const AdjointForm &w) {
    return covariant_d_impl(A, w);
}
ComplexAdjointForm covariant_d(const AdjointForm &A, const ComplexAdjointForm &w) {
    return covariant_d_impl(A, w);
}
AdjointForm covariant_codiff(const AdjointForm &A, const AdjointForm &w) {
    return covariant_codiff_impl(A, w);
}
ComplexAdjointForm covariant_codiff(const AdjointForm &A, const ComplexAdjointForm &w) {
    return covariant_codiff_impl(A, w);
}

ComplexAdjointForm covariant_d_complex(const Configuration &cfg, const ComplexAdjointForm &w) {
    const TorusGrid &g = w.grid();
    detail::check_same_grid(cfg.grid(), g);
    if (w.degree() >= g.dim) throw std::invalid_argument("degree overflow in covariant_d");
    auto terms = d_terms(g.dim, w.degree());
    ComplexAdjointForm out(g, w.degree() + 1);
    Shifter sh(g);
    sweep(g, [&](long i, const std::array<int, 4> &x) {
        for (size_t co = 0; co < terms.size(); ++co) {
            ComplexAlgebraElement acc{};
            for (const Term &t : terms[co]) {
                auto get = [&](long s) { return w.at(s, t.comp); };
                ComplexAlgebraElement conn{cfg.A.at(i, t.axis), cfg.phi.at(i, t.axis)};
                ComplexAlgebraElement v =
                    stencil_deriv<ComplexAlgebraElement>(g, sh, get, i, x, t.axis) +
                    bracket(conn, w.at(i, t.comp));
                acc += t.sign * v;
            }
            out.at(i, static_cast<int>(co)) = acc;
        }
    });
    return out;
}

AdjointForm curvature(const AdjointForm &A) {
    const TorusGrid &g = A.grid();
    const FormIndex &f2 = form_index(g.dim, 2);
    AdjointForm out(g, 2);
    Shifter sh(g);
    sweep(g, [&](long i, const std::array<int, 4> &x) {
        for (int c = 0; c < f2.count(); ++c) {
            auto axes = FormIndex::axes_of(f2.masks[c], g.dim);
            int j = axes[0], k = axes[1];
            auto getk = [&](long s) { return A.at(s, k); };
            auto getj = [&](long s) { return A.at(s, j); };
            out.at(i, c) = stencil_deriv<AlgebraElement>(g, sh, getk, i, x, j) -
                           stencil_deriv<AlgebraElement>(g, sh, getj, i, x, k) +
                           bracket(A.at(i, j), A.at(i, k));
        }
    });
    return out;
}

AdjointForm half_phi_wedge_phi(const AdjointForm &phi) {
    const TorusGrid &g = phi.grid();
    const FormIndex &f2 = form_index(g.dim, 2);
    AdjointForm out(g, 2);
    for_site_ranges(g.sites(), [&](long b, long e) {
        for (long i = b; i < e; ++i)
            for (int c = 0; c < f2.count(); ++c) {
                auto axes = FormIndex::axes_of(f2.masks[c], g.dim);
                out.at(i, c) = bracket(phi.at(i, axes[0]), phi.at(i, axes[1]));
            }
    });
    return out;
}

AdjointForm bracket_wedge(const AdjointForm &a, const AdjointForm &b) {
    detail::check_same_grid(a.grid(), b.grid());
    const TorusGrid &g = a.grid();
    const FormIndex &f2 = form_index(g.dim, 2);
    AdjointForm out(g, 2);
    for_site_ranges(g.sites(), [&](long b0, long e) {
        for (long i = b0; i < e; ++i)
            for (int c = 0; c < f2.count(); ++c) {
                auto axes = FormIndex::axes_of(f2.masks[c], g.dim);
                int j = axes[0], k = axes[1];
                out.at(i, c) = bracket(a.at(i, j), b.at(i, k)) - bracket(a.at(i, k), b.at(i, j));
            }
    });
    return out;
}

ComplexAdjointForm complex_curvature(const Configuration &cfg) {
    AdjointForm re = curvature(cfg.A);
    re -= half_phi_wedge_phi(cfg.phi);
    AdjointForm im = covariant_d(cfg.A, cfg.phi);
    return combine(re, im);
}

AdjointForm contract_two_form(const AdjointForm &t, const AdjointForm &phi) {
    detail::check_same_grid(t.grid(), phi.grid());
    if (t.degree() != 2 || phi.degree() != 1)
        throw std::invalid_argument("contract_two_form expects a two-form and a one-form");
    const TorusGrid &g = t.grid();
    const FormIndex &f2 = form_index(g.dim, 2);
    // (j,k) -> antisymmetric component lookup
    struct Slot {
        int comp;
        double sign;
    };
    std::array<std::array<Slot, 4>, 4> lut{};
    for (int j = 0; j < g.dim; ++j)
        for (int k = 0; k < g.dim; ++k) {
            if (j == k) {
                lut[j][k] = {0, 0.0};
                continue;
            }
            unsigned m = (1u << j) | (1u << k);
            lut[j][k] = {f2.position[m], j < k ? 1.0 : -1.0};
        }
    AdjointForm out(g, 1);
    for_site_ranges(g.sites(), [&](long b, long e) {
        for (long i = b; i < e; ++i)
            for (int k = 0; k < g.dim; ++k) {
                AlgebraElement acc{};
                for (int j = 0; j < g.dim; ++j) {
                    if (j == k) continue;
                    const Slot &s = lut[j][k];
                    acc += s.sign * bracket(t.at(i, s.comp), phi.at(i, j));
                }
                out.at(i, k) = acc;
            }
    });
    return out;
}

AdjointForm contract_one_forms(const AdjointForm &a, const AdjointForm &b) {
    detail::check_same_grid(a.grid(), b.grid());
    const TorusGrid &g = a.grid();
    AdjointForm out(g, 0);
    for_site_ranges(g.sites(), [&](long b0, long e) {
        for (long i = b0; i < e; ++i) {
            AlgebraElement acc{};
            for (int j = 0; j < g.dim; ++j) acc += bracket(a.at(i, j), b.at(i, j));
            out.at(i, 0) = acc;
        }
    });
    return out;
}

double FullGradient::l2_norm_sq() const {
    double dv = grid.cell_volume();
    int nc = grid.dim * grid.dim;
    double s = reduce_sites(grid.sites(), [&](long i) {
        double acc = 0.0;
        for (int c = 0; c < nc; ++c) acc += norm_sq(data[static_cast<size_t>(i) * nc + c]);
        return acc;
    });
    return dv * s;
}

FullGradient nabla(const AdjointForm &A, const AdjointForm &phi) {
    detail::check_same_grid(A.grid(), phi.grid());
    const TorusGrid &g = A.grid();
    FullGradient out(g);
    Shifter sh(g);
    sweep(g, [&](long i, const std::array<int, 4> &x) {
        for (int j = 0; j < g.dim; ++j)
            for (int k = 0; k < g.dim; ++k) {
                auto get = [&](long s) { return phi.at(s, k); };
                out.at(i, j, k) = stencil_deriv<AlgebraElement>(g, sh, get, i, x, j) +
                                  bracket(A.at(i, j), phi.at(i, k));
            }
    });
    return out;
}

AdjointForm rough_laplacian(const AdjointForm &A, const AdjointForm &phi) {
    const TorusGrid &g = A.grid();
    FullGradient grad = nabla(A, phi);
    AdjointForm out(g, 1);
    Shifter sh(g);
    const int d = g.dim;
    sweep(g, [&](long i, const std::array<int, 4> &x) {
        for (int k = 0; k < d; ++k) {
            AlgebraElement acc{};
            for (int j = 0; j < d; ++j) {
                auto get = [&](long s) { return grad.at(s, j, k); };
                acc += stencil_deriv<AlgebraElement>(g, sh, get, i, x, j) +
                       bracket(A.at(i, j), grad.at(i, j, k));
            }
            out.at(i, k) = -1.0 * acc;
        }
    });
    return out;
}

std::vector<double> scalar_laplacian(const TorusGrid &g, const std::vector<double> &f) {
    if (static_cast<long>(f.size()) != g.sites())
        throw std::invalid_argument("scalar field size mismatch");
    std::vector<double> out(f.size(), 0.0);
    Shifter sh(g);
    for (int axis = 0; axis < g.dim; ++axis) {
        std::vector<double> df(f.size());
        sweep(g, [&](long i, const std::array<int, 4> &x) {
            auto get = [&](long s) { return f[s]; };
            df[i] = stencil_deriv<double>(g, sh, get, i, x, axis);
        });
        sweep(g, [&](long i, const std::array<int, 4> &x) {
            auto get = [&](long s) { return df[s]; };
            out[i] += stencil_deriv<double>(g, sh, get, i, x, axis);
        });
    }
    return out;
}

} // namespace kw
