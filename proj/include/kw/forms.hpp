#ifndef KW_FORMS_HPP
#define KW_FORMS_HPP

#include <vector>

#include "kw/algebra.hpp"
#include "kw/grid.hpp"

namespace kw {

namespace detail {
inline void check_same_grid(const TorusGrid &a, const TorusGrid &b) {
    if (a != b) throw std::invalid_argument("grid mismatch");
}
} // namespace detail

/// p-form with su(2) coefficients on every site, one value per strictly
/// increasing multi-index. Storage: site-major, components innermost.
template <typename Elem>
class FormField {
  public:
    FormField() = default;
    FormField(const TorusGrid &grid, int degree)
        : grid_(grid), degree_(degree),
          ncomp_(form_index(grid.dim, degree).count()),
          data_(static_cast<size_t>(grid.sites()) * ncomp_) {}

    const TorusGrid &grid() const { return grid_; }
    int degree() const { return degree_; }
    int components() const { return ncomp_; }
    long sites() const { return grid_.sites(); }
    size_t size() const { return data_.size(); }

    Elem &at(long site, int comp) { return data_[static_cast<size_t>(site) * ncomp_ + comp]; }
    const Elem &at(long site, int comp) const { return data_[static_cast<size_t>(site) * ncomp_ + comp]; }

    std::vector<Elem> &raw() { return data_; }
    const std::vector<Elem> &raw() const { return data_; }

    FormField &operator+=(const FormField &o) {
        detail::check_same_grid(grid_, o.grid_);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    FormField &operator-=(const FormField &o) {
        detail::check_same_grid(grid_, o.grid_);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    FormField &operator*=(double s) {
        for (auto &v : data_) v *= s;
        return *this;
    }

  private:
    TorusGrid grid_;
    int degree_ = 0;
    int ncomp_ = 0;
    std::vector<Elem> data_;
};

using AdjointForm = FormField<AlgebraElement>;
using ComplexAdjointForm = FormField<ComplexAlgebraElement>;

template <typename E>
FormField<E> operator+(FormField<E> a, const FormField<E> &b) { return a += b; }
template <typename E>
FormField<E> operator-(FormField<E> a, const FormField<E> &b) { return a -= b; }
template <typename E>
FormField<E> operator*(double s, FormField<E> a) { return a *= s; }

inline ComplexAdjointForm operator*(cplx s, ComplexAdjointForm a) {
    for (auto &v : a.raw()) v *= s;
    return a;
}

inline ComplexAdjointForm conj(ComplexAdjointForm a) {
    for (auto &v : a.raw()) v.im = -v.im;
    return a;
}

inline ComplexAdjointForm complexify(const AdjointForm &re) {
    ComplexAdjointForm c(re.grid(), re.degree());
    for (size_t i = 0; i < re.size(); ++i) c.raw()[i].re = re.raw()[i];
    return c;
}

inline ComplexAdjointForm combine(const AdjointForm &re, const AdjointForm &im) {
    detail::check_same_grid(re.grid(), im.grid());
    ComplexAdjointForm c(re.grid(), re.degree());
    for (size_t i = 0; i < re.size(); ++i) {
        c.raw()[i].re = re.raw()[i];
        c.raw()[i].im = im.raw()[i];
    }
    return c;
}

inline AdjointForm real_part(const ComplexAdjointForm &a) {
    AdjointForm r(a.grid(), a.degree());
    for (size_t i = 0; i < a.size(); ++i) r.raw()[i] = a.raw()[i].re;
    return r;
}

inline AdjointForm imag_part(const ComplexAdjointForm &a) {
    AdjointForm r(a.grid(), a.degree());
    for (size_t i = 0; i < a.size(); ++i) r.raw()[i] = a.raw()[i].im;
    return r;
}

/// L2 inner product <a,b> = h^dim sum_sites sum_{increasing J} <a_J, b_J>.
template <typename E>
double l2_inner(const FormField<E> &a, const FormField<E> &b);

template <typename E>
double l2_norm_sq(const FormField<E> &a);

template <typename E>
double l2_norm(const FormField<E> &a) { return std::sqrt(l2_norm_sq(a)); }

/// sup over sites/components of the pointwise algebra norm
template <typename E>
double sup_norm(const FormField<E> &a);

/// Flat Euclidean Hodge star; exact coefficient transfer with permutation sign.
template <typename E>
FormField<E> hodge_star(const FormField<E> &w);

/// T+- = (T +- *conj(T))/2 on complex two-forms in dimension 4.
ComplexAdjointForm project_pm(const ComplexAdjointForm &t, int sign);

/// Real-form self-dual / anti-self-dual projection (T +- *T)/2, dim 4.
AdjointForm project_pm(const AdjointForm &t, int sign);

/// The pair (A, phi): a point of the complexified configuration space.
struct Configuration {
    AdjointForm A;
    AdjointForm phi;

    Configuration() = default;
    Configuration(const TorusGrid &grid) : A(grid, 1), phi(grid, 1) {}
    Configuration(AdjointForm a, AdjointForm p) : A(std::move(a)), phi(std::move(p)) {
        detail::check_same_grid(A.grid(), phi.grid());
        if (A.degree() != 1 || phi.degree() != 1)
            throw std::invalid_argument("configuration fields must be one-forms");
    }

    const TorusGrid &grid() const { return A.grid(); }
};

/// Variation (B, psi) of a configuration, the tangent vector B + i psi.
struct TangentPair {
    AdjointForm B;
    AdjointForm psi;

    TangentPair() = default;
    TangentPair(const TorusGrid &grid) : B(grid, 1), psi(grid, 1) {}
    TangentPair(AdjointForm b, AdjointForm p) : B(std::move(b)), psi(std::move(p)) {
        detail::check_same_grid(B.grid(), psi.grid());
    }

    const TorusGrid &grid() const { return B.grid(); }
};

/// integral of the wedge-trace tr(a ^ b), deg a + deg b = dim;
/// tr normalized as in algebra.hpp (2x fundamental trace).
cplx wedge_tr_integral(const ComplexAdjointForm &a, const ComplexAdjointForm &b);
double wedge_tr_integral(const AdjointForm &a, const AdjointForm &b);

/// integral of tr(a ^ b ^ c) for three one-forms, dim 3
cplx wedge_tr3_integral(const ComplexAdjointForm &a, const ComplexAdjointForm &b,
                        const ComplexAdjointForm &c);

} // namespace kw

#endif
