#include "kw/forms.hpp"

namespace kw {

template <typename E>
double l2_inner(const FormField<E> &a, const FormField<E> &b) {
    detail::check_same_grid(a.grid(), b.grid());
    if (a.degree() != b.degree()) throw std::invalid_argument("form degree mismatch");
    const int nc = a.components();
    double dv = a.grid().cell_volume();
    double s = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (int c = 0; c < nc; ++c) acc += hermitian_dot(a.at(i, c), b.at(i, c));
        return acc;
    });
    return dv * s;
}

template <typename E>
double l2_norm_sq(const FormField<E> &a) {
    const int nc = a.components();
    double dv = a.grid().cell_volume();
    double s = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (int c = 0; c < nc; ++c) acc += norm_sq(a.at(i, c));
        return acc;
    });
    return dv * s;
}

template <typename E>
double sup_norm(const FormField<E> &a) {
    double m = 0.0;
    for (const auto &v : a.raw()) m = std::max(m, norm_sq(v));
    return std::sqrt(m);
}

template <typename E>
FormField<E> hodge_star(const FormField<E> &w) {
    const TorusGrid &g = w.grid();
    const FormIndex &fi = form_index(g.dim, w.degree());
    const FormIndex &fo = form_index(g.dim, g.dim - w.degree());
    const unsigned full = (1u << g.dim) - 1u;
    FormField<E> out(g, g.dim - w.degree());
    std::vector<std::pair<int, double>> map(fi.count());
    for (int c = 0; c < fi.count(); ++c) {
        unsigned m = fi.masks[c];
        unsigned mc = full & ~m;
        map[c] = {fo.position[mc], static_cast<double>(FormIndex::merge_sign(m, mc, g.dim))};
    }
    for_site_ranges(w.sites(), [&](long b, long e) {
        for (long i = b; i < e; ++i)
            for (int c = 0; c < fi.count(); ++c)
                out.at(i, map[c].first) = map[c].second * w.at(i, c);
    });
    return out;
}

ComplexAdjointForm project_pm(const ComplexAdjointForm &t, int sign) {
    if (t.grid().dim != 4 || t.degree() != 2)
        throw std::invalid_argument("self-dual projection requires a two-form in dimension 4");
    ComplexAdjointForm sc = hodge_star(conj(t));
    ComplexAdjointForm out = t;
    double s = sign >= 0 ? 1.0 : -1.0;
    for (size_t i = 0; i < out.size(); ++i) {
        out.raw()[i] += s * sc.raw()[i];
        out.raw()[i] *= 0.5;
    }
    return out;
}

AdjointForm project_pm(const AdjointForm &t, int sign) {
    if (t.grid().dim != 4 || t.degree() != 2)
        throw std::invalid_argument("self-dual projection requires a two-form in dimension 4");
    AdjointForm st = hodge_star(t);
    AdjointForm out = t;
    double s = sign >= 0 ? 1.0 : -1.0;
    for (size_t i = 0; i < out.size(); ++i) {
        out.raw()[i] += s * st.raw()[i];
        out.raw()[i] *= 0.5;
    }
    return out;
}

namespace {

// complementary-pair table for the wedge of a p-form and a (dim-p)-form
struct WedgePair {
    int ca, cb;
    double sign;
};

std::vector<WedgePair> wedge_pairs(int dim, int pa) {
    const FormIndex &fa = form_index(dim, pa);
    const FormIndex &fb = form_index(dim, dim - pa);
    const unsigned full = (1u << dim) - 1u;
    std::vector<WedgePair> pairs;
    for (int c = 0; c < fa.count(); ++c) {
        unsigned m = fa.masks[c];
        unsigned mc = full & ~m;
        pairs.push_back({c, fb.position[mc],
                         static_cast<double>(FormIndex::merge_sign(m, mc, dim))});
    }
    return pairs;
}

} // namespace

cplx wedge_tr_integral(const ComplexAdjointForm &a, const ComplexAdjointForm &b) {
    detail::check_same_grid(a.grid(), b.grid());
    if (a.degree() + b.degree() != a.grid().dim)
        throw std::invalid_argument("wedge degrees must sum to the dimension");
    auto pairs = wedge_pairs(a.grid().dim, a.degree());
    double dv = a.grid().cell_volume();
    double re = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (const auto &p : pairs) acc += p.sign * tr2(a.at(i, p.ca), b.at(i, p.cb)).real();
        return acc;
    });
    double im = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (const auto &p : pairs) acc += p.sign * tr2(a.at(i, p.ca), b.at(i, p.cb)).imag();
        return acc;
    });
    return dv * cplx{re, im};
}

double wedge_tr_integral(const AdjointForm &a, const AdjointForm &b) {
    detail::check_same_grid(a.grid(), b.grid());
    if (a.degree() + b.degree() != a.grid().dim)
        throw std::invalid_argument("wedge degrees must sum to the dimension");
    auto pairs = wedge_pairs(a.grid().dim, a.degree());
    double dv = a.grid().cell_volume();
    double s = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (const auto &p : pairs) acc += p.sign * tr2(a.at(i, p.ca), b.at(i, p.cb));
        return acc;
    });
    return dv * s;
}

cplx wedge_tr3_integral(const ComplexAdjointForm &a, const ComplexAdjointForm &b,
                        const ComplexAdjointForm &c) {
    detail::check_same_grid(a.grid(), b.grid());
    detail::check_same_grid(a.grid(), c.grid());
    if (a.grid().dim != 3 || a.degree() != 1 || b.degree() != 1 || c.degree() != 1)
        throw std::invalid_argument("triple wedge needs three one-forms in dimension 3");
    // all permutations (j,k,l) of (0,1,2) with Levi-Civita sign
    static const int perm[6][4] = {{0, 1, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, +1},
                                   {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1}};
    double dv = a.grid().cell_volume();
    double re = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (const auto &p : perm)
            acc += p[3] * tr3(a.at(i, p[0]), b.at(i, p[1]), c.at(i, p[2])).real();
        return acc;
    });
    double im = reduce_sites(a.sites(), [&](long i) {
        double acc = 0.0;
        for (const auto &p : perm)
            acc += p[3] * tr3(a.at(i, p[0]), b.at(i, p[1]), c.at(i, p[2])).imag();
        return acc;
    });
    return dv * cplx{re, im};
}

template double l2_inner<AlgebraElement>(const AdjointForm &, const AdjointForm &);
template double l2_inner<ComplexAlgebraElement>(const ComplexAdjointForm &, const ComplexAdjointForm &);
template double l2_norm_sq<AlgebraElement>(const AdjointForm &);
template double l2_norm_sq<ComplexAlgebraElement>(const ComplexAdjointForm &);
template double sup_norm<AlgebraElement>(const AdjointForm &);
template double sup_norm<ComplexAlgebraElement>(const ComplexAdjointForm &);
template AdjointForm hodge_star<AlgebraElement>(const AdjointForm &);
template ComplexAdjointForm hodge_star<ComplexAlgebraElement>(const ComplexAdjointForm &);

} // namespace kw
