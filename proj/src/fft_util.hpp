#ifndef KW_FFT_UTIL_HPP
#define KW_FFT_UTIL_HPP

#include <complex>
#include <vector>

#include <fftw3.h>

#include "kw/grid.hpp"

namespace kw {

/// Thin RAII wrapper over an in-place c2c FFTW transform on the grid.
class GridFft {
  public:
    explicit GridFft(const TorusGrid &g) : sites_(g.sites()), buf_(static_cast<size_t>(sites_)) {
        int dims[4];
        for (int j = 0; j < g.dim; ++j) dims[j] = g.n;
        auto *p = reinterpret_cast<fftw_complex *>(buf_.data());
        fwd_ = fftw_plan_dft(g.dim, dims, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(g.dim, dims, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~GridFft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    GridFft(const GridFft &) = delete;
    GridFft &operator=(const GridFft &) = delete;

    std::vector<std::complex<double>> &buffer() { return buf_; }
    long sites() const { return sites_; }

    void forward() { fftw_execute(fwd_); }
    // unnormalized inverse; caller divides by sites() when needed
    void backward() { fftw_execute(bwd_); }

  private:
    long sites_;
    std::vector<std::complex<double>> buf_;
    fftw_plan fwd_, bwd_;
};

/// derivative symbol of the grid stencil at integer mode m (one axis)
inline double stencil_symbol(const TorusGrid &g, int m) {
    double th = 2.0 * std::numbers::pi * m / g.n;
    double h = g.spacing();
    if (g.stencil == Stencil::central2) return std::sin(th) / h;
    return (8.0 * std::sin(th) - std::sin(2.0 * th)) / (6.0 * h);
}

} // namespace kw

#endif
