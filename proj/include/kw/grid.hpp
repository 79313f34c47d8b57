#ifndef KW_GRID_HPP
#define KW_GRID_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace kw {

/// numerical blow-up distinct from ordinary check failures (exit code 4)
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Stencil { central2, central4 };

inline int stencil_order(Stencil s) { return s == Stencil::central2 ? 2 : 4; }

/// Flat periodic torus, n sites per axis, physical period `length`.
struct TorusGrid {
    int dim = 4;
    int n = 8;
    double length = 2.0 * std::numbers::pi;
    Stencil stencil = Stencil::central2;

    TorusGrid() = default;
    TorusGrid(int dim_, int n_, double length_ = 2.0 * std::numbers::pi,
              Stencil st = Stencil::central2)
        : dim(dim_), n(n_), length(length_), stencil(st) {
        if (dim != 3 && dim != 4)
            throw std::invalid_argument("grid dimension must be 3 or 4");
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("grid size must be even and >= 4");
        if (length <= 0.0)
            throw std::invalid_argument("grid period must be positive");
    }

    double spacing() const { return length / n; }
    long sites() const {
        long s = 1;
        for (int j = 0; j < dim; ++j) s *= n;
        return s;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int j = 0; j < dim; ++j) v *= spacing();
        return v;
    }

    // lexicographic site index: coordinate 0 slowest, last axis fastest
    long index(const std::array<int, 4> &x) const {
        long idx = 0;
        for (int j = 0; j < dim; ++j) idx = idx * n + x[j];
        return idx;
    }
    std::array<int, 4> coords(long idx) const {
        std::array<int, 4> x{0, 0, 0, 0};
        for (int j = dim - 1; j >= 0; --j) {
            x[j] = static_cast<int>(idx % n);
            idx /= n;
        }
        return x;
    }
    // site shifted by `step` along axis, periodic
    long shift(long idx, int axis, int step) const {
        std::array<int, 4> x = coords(idx);
        x[axis] = (x[axis] + step % n + n) % n;
        return index(x);
    }
    double coordinate(long idx, int axis) const {
        return coords(idx)[axis] * spacing();
    }

    bool operator==(const TorusGrid &o) const {
        return dim == o.dim && n == o.n && length == o.length && stencil == o.stencil;
    }
    bool operator!=(const TorusGrid &o) const { return !(*this == o); }
};

inline int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Strictly increasing multi-indices of degree p in `dim` axes, as bitmasks,
/// with position lookup and the permutation signs needed by wedge and star.
struct FormIndex {
    int dim = 0, p = 0;
    std::vector<unsigned> masks;       // increasing-order component masks
    std::array<int, 16> position{};    // mask -> component slot (-1 if degree mismatch)

    FormIndex() = default;
    FormIndex(int dim_, int p_) : dim(dim_), p(p_) {
        position.fill(-1);
        for (unsigned m = 0; m < (1u << dim); ++m) {
            if (std::popcount(m) == p) {
                position[m] = static_cast<int>(masks.size());
                masks.push_back(m);
            }
        }
    }

    int count() const { return static_cast<int>(masks.size()); }

    static std::vector<int> axes_of(unsigned mask, int dim) {
        std::vector<int> a;
        for (int j = 0; j < dim; ++j)
            if (mask & (1u << j)) a.push_back(j);
        return a;
    }

    // sign of inserting axis j in front of the increasing set `mask`:
    // (-1)^{number of set axes below j}.  0 if j already present.
    static int insertion_sign(unsigned mask, int j) {
        if (mask & (1u << j)) return 0;
        int below = std::popcount(mask & ((1u << j) - 1u));
        return (below % 2 == 0) ? 1 : -1;
    }

    // sign of the permutation (axes of a, axes of b) relative to increasing
    // order; 0 if the sets overlap
    static int merge_sign(unsigned a, unsigned b, int dim) {
        if (a & b) return 0;
        int sign = 1;
        // count inversions between the two increasing blocks
        for (int i = 0; i < dim; ++i)
            if (b & (1u << i)) {
                int above = std::popcount(a >> (i + 1));
                if (above % 2) sign = -sign;
            }
        return sign;
    }
};

inline const FormIndex &form_index(int dim, int p) {
    static const std::array<std::array<FormIndex, 5>, 5> table = [] {
        std::array<std::array<FormIndex, 5>, 5> t;
        for (int d = 3; d <= 4; ++d)
            for (int q = 0; q <= d; ++q) t[d][q] = FormIndex(d, q);
        return t;
    }();
    if (dim < 3 || dim > 4 || p < 0 || p > dim)
        throw std::out_of_range("form degree out of range for dimension " + std::to_string(dim));
    return table[dim][p];
}

/// Fixed-order pairwise tree sum; result is independent of how callers
/// parallelize, as long as the slot layout is the same.
inline double tree_sum(std::vector<double> &v) {
    if (v.empty()) return 0.0;
    size_t len = v.size();
    while (len > 1) {
        size_t half = (len + 1) / 2;
        for (size_t i = 0; i + half < len; ++i) v[i] += v[i + half];
        len = half;
    }
    return v[0];
}

int kernel_threads();

/// Site-parallel map: body(begin, end) over disjoint ranges. Honors KW_THREADS.
void for_site_ranges(long sites, const std::function<void(long, long)> &body);

/// Deterministic site reduction: term(i) accumulated in fixed chunked order.
double reduce_sites(long sites, const std::function<double(long)> &term);

} // namespace kw

#endif
