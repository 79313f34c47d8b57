#include "kw/random_fields.hpp"

#include "fft_util.hpp"

namespace kw {

namespace {

// integer frequency vectors with |k_j| <= band, one per +-k pair:
// k = 0 or first nonzero component positive, in fixed lexicographic order
std::vector<std::array<int, 4>> mode_set(int dim, int band) {
    std::vector<std::array<int, 4>> modes;
    std::array<int, 4> k{0, 0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim) {
            int first = 0;
            for (int j = 0; j < dim; ++j)
                if (k[j] != 0) {
                    first = k[j];
                    break;
                }
            if (first >= 0) modes.push_back(k);
            return;
        }
        for (int v = -band; v <= band; ++v) {
            k[axis] = v;
            rec(axis + 1);
        }
    };
    rec(0);
    return modes;
}

struct TrigCoeff {
    std::array<int, 4> k;
    double c, s;
};

// draw coefficients for one scalar function, fixed order, n-independent
std::vector<TrigCoeff> draw_scalar(std::mt19937_64 &rng,
                                   const std::vector<std::array<int, 4>> &modes) {
    std::vector<TrigCoeff> out;
    out.reserve(modes.size());
    for (const auto &k : modes) {
        double c = uniform_pm1(rng);
        double s = uniform_pm1(rng);
        out.push_back({k, c, s});
    }
    return out;
}

// exact synthesis of the trig polynomial on the grid via backward FFT
void synthesize(const TorusGrid &g, GridFft &fft, const std::vector<TrigCoeff> &coeffs,
                std::vector<double> &out) {
    auto &buf = fft.buffer();
    std::fill(buf.begin(), buf.end(), std::complex<double>{0.0, 0.0});
    for (const auto &tc : coeffs) {
        bool zero = true;
        std::array<int, 4> kp{0, 0, 0, 0}, km{0, 0, 0, 0};
        for (int j = 0; j < g.dim; ++j) {
            int kj = ((tc.k[j] % g.n) + g.n) % g.n;
            kp[j] = kj;
            km[j] = (g.n - kj) % g.n;
            if (tc.k[j] != 0) zero = false;
        }
        if (zero) {
            buf[g.index(kp)] += std::complex<double>{tc.c, 0.0};
        } else {
            buf[g.index(kp)] += 0.5 * std::complex<double>{tc.c, -tc.s};
            buf[g.index(km)] += 0.5 * std::complex<double>{tc.c, tc.s};
        }
    }
    fft.backward();
    out.resize(buf.size());
    for (size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
}

AdjointForm random_form_banded(const TorusGrid &g, std::mt19937_64 &rng, int degree,
                               double amplitude, int band) {
    if (band < 0 || band >= g.n / 2) throw std::invalid_argument("unresolvable frequency");
    if (amplitude < 0.0) throw std::invalid_argument("amplitude must be >= 0");
    auto modes = mode_set(g.dim, band);
    AdjointForm f(g, degree);
    GridFft fft(g);
    std::vector<double> scalar;
    for (int c = 0; c < f.components(); ++c)
        for (int a = 0; a < 3; ++a) {
            auto coeffs = draw_scalar(rng, modes);
            synthesize(g, fft, coeffs, scalar);
            for (long i = 0; i < f.sites(); ++i) f.at(i, c).c[a] = scalar[i];
        }
    double sup = sup_norm(f);
    double scale = sup > 0.0 ? amplitude / sup : 0.0;
    f *= scale;
    return f;
}

} // namespace

Configuration random_configuration(const TorusGrid &grid, std::uint64_t seed,
                                   double amplitude, int band) {
    std::mt19937_64 rng(seed);
    AdjointForm A = random_form_banded(grid, rng, 1, amplitude, band);
    AdjointForm phi = random_form_banded(grid, rng, 1, amplitude, band);
    return Configuration(std::move(A), std::move(phi));
}

AdjointForm random_one_form(const TorusGrid &grid, std::uint64_t seed, double amplitude,
                            int band) {
    std::mt19937_64 rng(seed);
    return random_form_banded(grid, rng, 1, amplitude, band);
}

AdjointForm random_zero_form(const TorusGrid &grid, std::uint64_t seed, double amplitude,
                             int band) {
    std::mt19937_64 rng(seed);
    return random_form_banded(grid, rng, 0, amplitude, band);
}

AdjointForm random_pointwise_form(const TorusGrid &grid, std::uint64_t seed, int degree,
                                  double scale) {
    std::mt19937_64 rng(seed);
    AdjointForm f(grid, degree);
    for (auto &v : f.raw())
        for (int a = 0; a < 3; ++a) v.c[a] = scale * uniform_pm1(rng);
    return f;
}

ComplexAdjointForm random_pointwise_complex_form(const TorusGrid &grid, std::uint64_t seed,
                                                 int degree, double scale) {
    std::mt19937_64 rng(seed);
    ComplexAdjointForm f(grid, degree);
    for (auto &v : f.raw())
        for (int a = 0; a < 3; ++a) {
            v.re.c[a] = scale * uniform_pm1(rng);
            v.im.c[a] = scale * uniform_pm1(rng);
        }
    return f;
}

} // namespace kw
