#ifndef KW_GAUGE_HPP
#define KW_GAUGE_HPP

#include "kw/forms.hpp"

namespace kw {

/// Per-site SU(2) gauge transform.
struct GaugeField {
    TorusGrid grid;
    std::vector<GroupElement> g;

    GaugeField() = default;
    explicit GaugeField(const TorusGrid &grid_) : grid(grid_), g(grid_.sites()) {}

    /// largest violation of unitarity/determinant over all sites
    double unitarity_defect() const;
};

/// Per-site SL(2,C) gauge transform.
struct ComplexGaugeField {
    TorusGrid grid;
    std::vector<ComplexGroupElement> g;

    ComplexGaugeField() = default;
    explicit ComplexGaugeField(const TorusGrid &grid_) : grid(grid_), g(grid_.sites()) {}

    double det_defect() const;
};

/// pointwise exponential of a gauge-algebra scalar
GaugeField exp_gauge(const AdjointForm &chi);

/// complex exponential exp(chi1 + i chi2) via the 2x2 matrix series
ComplexGaugeField exp_gauge_complex(const AdjointForm &chi1, const AdjointForm &chi2);

/// A -> g A g^-1 - (dg) g^-1, phi -> g phi g^-1; dg by the shared central stencil
Configuration apply_gauge(const Configuration &cfg, const GaugeField &g);

/// complex mode: A + i phi transforms jointly under SL(2,C)
Configuration apply_gauge(const Configuration &cfg, const ComplexGaugeField &g);

/// gauge action on an adjoint p-form (pointwise conjugation, no derivative term)
AdjointForm adjoint_transform(const AdjointForm &w, const GaugeField &g);

} // namespace kw

#endif
