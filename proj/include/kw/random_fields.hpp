#ifndef KW_RANDOM_FIELDS_HPP
#define KW_RANDOM_FIELDS_HPP

#include <cstdint>
#include <random>

#include "kw/forms.hpp"

namespace kw {

/// bit-reproducible uniform double in [-1, 1)
inline double uniform_pm1(std::mt19937_64 &rng) {
    return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
}

/// Band-limited random configuration: every component of A and phi is a real
/// trigonometric polynomial with integer frequencies |k_j| <= band, rescaled
/// so the sup of the pointwise algebra norm equals `amplitude`.
/// Deterministic in (seed, band, dim); the same seed yields samples of the
/// same continuum field on every grid size.
Configuration random_configuration(const TorusGrid &grid, std::uint64_t seed,
                                   double amplitude, int band);

/// one band-limited random adjoint one-form (same determinism contract)
AdjointForm random_one_form(const TorusGrid &grid, std::uint64_t seed,
                            double amplitude, int band);

/// band-limited random gauge-algebra scalar (p = 0), for gauge generators
AdjointForm random_zero_form(const TorusGrid &grid, std::uint64_t seed,
                             double amplitude, int band);

/// pointwise (non-smooth) random fields, for pure-algebra property tests
AdjointForm random_pointwise_form(const TorusGrid &grid, std::uint64_t seed, int degree,
                                  double scale = 1.0);
ComplexAdjointForm random_pointwise_complex_form(const TorusGrid &grid, std::uint64_t seed,
                                                 int degree, double scale = 1.0);

} // namespace kw

#endif
