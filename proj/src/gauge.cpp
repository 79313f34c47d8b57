#include "kw/gauge.hpp"

namespace kw {

namespace {

// quaternion linear combination (group elements form a linear space here:
// the difference quotient of a gauge field is taken entrywise)
GroupElement axpy(double a, const GroupElement &x, double b, const GroupElement &y) {
    return {a * x.w + b * y.w, a * x.x + b * y.x, a * x.y + b * y.y, a * x.z + b * y.z};
}

template <typename G, typename Combine>
G field_deriv(const TorusGrid &grid, long i, int axis, const Combine &comb) {
    double h = grid.spacing();
    if (grid.stencil == Stencil::central2) {
        return comb({{grid.shift(i, axis, 1), 1.0 / (2.0 * h)},
                     {grid.shift(i, axis, -1), -1.0 / (2.0 * h)}});
    }
    return comb({{grid.shift(i, axis, 1), 8.0 / (12.0 * h)},
                 {grid.shift(i, axis, -1), -8.0 / (12.0 * h)},
                 {grid.shift(i, axis, 2), -1.0 / (12.0 * h)},
                 {grid.shift(i, axis, -2), 1.0 / (12.0 * h)}});
}

} // namespace

double GaugeField::unitarity_defect() const {
    double worst = 0.0;
    for (const auto &q : g) worst = std::max(worst, std::abs(q.quat_norm_sq() - 1.0));
    return worst;
}

double ComplexGaugeField::det_defect() const {
    double worst = 0.0;
    for (const auto &m : g) worst = std::max(worst, std::abs(m.det() - cplx{1.0, 0.0}));
    return worst;
}

GaugeField exp_gauge(const AdjointForm &chi) {
    if (chi.degree() != 0) throw std::invalid_argument("gauge generator must be a zero-form");
    GaugeField out(chi.grid());
    for (long i = 0; i < chi.sites(); ++i) out.g[i] = exp_map(chi.at(i, 0));
    return out;
}

ComplexGaugeField exp_gauge_complex(const AdjointForm &chi1, const AdjointForm &chi2) {
    detail::check_same_grid(chi1.grid(), chi2.grid());
    if (chi1.degree() != 0) throw std::invalid_argument("gauge generator must be a zero-form");
    ComplexGaugeField out(chi1.grid());
    for (long i = 0; i < chi1.sites(); ++i) {
        ComplexGroupElement x = to_matrix(ComplexAlgebraElement{chi1.at(i, 0), chi2.at(i, 0)});
        // scaling-and-squaring free series; |chi| is O(1) at most in our use
        ComplexGroupElement acc;       // identity
        ComplexGroupElement term = acc;
        for (int k = 1; k <= 24; ++k) {
            term = (cplx{1.0 / k, 0.0}) * (term * x);
            acc = acc + term;
        }
        out.g[i] = acc;
    }
    return out;
}

Configuration apply_gauge(const Configuration &cfg, const GaugeField &g) {
    detail::check_same_grid(cfg.grid(), g.grid);
    const TorusGrid &grid = cfg.grid();
    Configuration out(grid);
    for_site_ranges(grid.sites(), [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            GroupElement gi = g.g[i];
            GroupElement ginv = gi.inverse();
            for (int j = 0; j < grid.dim; ++j) {
                auto comb = [&](std::initializer_list<std::pair<long, double>> terms) {
                    GroupElement acc{0.0, 0.0, 0.0, 0.0};
                    for (const auto &[s, w] : terms) acc = axpy(1.0, acc, w, g.g[s]);
                    return acc;
                };
                GroupElement dg = field_deriv<GroupElement>(grid, i, j, comb);
                // (dg) g^-1: vector (u-basis) part, rescaled to e-basis coefficients
                GroupElement m = dg * ginv;
                AlgebraElement inhom{2.0 * m.x, 2.0 * m.y, 2.0 * m.z};
                out.A.at(i, j) = adjoint_action(gi, cfg.A.at(i, j)) - inhom;
                out.phi.at(i, j) = adjoint_action(gi, cfg.phi.at(i, j));
            }
        }
    });
    return out;
}

Configuration apply_gauge(const Configuration &cfg, const ComplexGaugeField &g) {
    detail::check_same_grid(cfg.grid(), g.grid);
    const TorusGrid &grid = cfg.grid();
    Configuration out(grid);
    for_site_ranges(grid.sites(), [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            const ComplexGroupElement &gi = g.g[i];
            ComplexGroupElement ginv = gi.inverse();
            for (int j = 0; j < grid.dim; ++j) {
                auto comb = [&](std::initializer_list<std::pair<long, double>> terms) {
                    ComplexGroupElement acc{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
                    for (const auto &[s, w] : terms) acc = acc + cplx{w, 0.0} * g.g[s];
                    return acc;
                };
                ComplexGroupElement dg = field_deriv<ComplexGroupElement>(grid, i, j, comb);
                ComplexAlgebraElement conn{cfg.A.at(i, j), cfg.phi.at(i, j)};
                ComplexAlgebraElement transformed =
                    adjoint_action(gi, conn) - from_matrix(dg * ginv);
                out.A.at(i, j) = transformed.re;
                out.phi.at(i, j) = transformed.im;
            }
        }
    });
    return out;
}

AdjointForm adjoint_transform(const AdjointForm &w, const GaugeField &g) {
    detail::check_same_grid(w.grid(), g.grid);
    AdjointForm out(w.grid(), w.degree());
    for_site_ranges(w.sites(), [&](long b, long e) {
        for (long i = b; i < e; ++i)
            for (int c = 0; c < w.components(); ++c)
                out.at(i, c) = adjoint_action(g.g[i], w.at(i, c));
    });
    return out;
}

} // namespace kw
