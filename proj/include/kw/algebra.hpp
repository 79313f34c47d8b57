#ifndef KW_ALGEBRA_HPP
#define KW_ALGEBRA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

// su(2), SU(2) and their complexifications.
//
// Basis convention: e_a = -(i/2) sigma_a, so [e_a,e_b] = eps_abc e_c and the
// bracket of coefficient vectors is the ordinary cross product.  The invariant
// pairing is <X,Y> = -2 tr(XY), which makes {e_1,e_2,e_3} orthonormal.  The
// wedge-trace used by all functional integrals is tr2/tr3 below, normalized as
// 2x the fundamental 2x2 trace so that it is the negative of the pairing.

namespace kw {

using cplx = std::complex<double>;

struct AlgebraElement {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    AlgebraElement() = default;
    AlgebraElement(double c1, double c2, double c3) : c{c1, c2, c3} {}

    AlgebraElement &operator+=(const AlgebraElement &o) {
        c[0] += o.c[0]; c[1] += o.c[1]; c[2] += o.c[2];
        return *this;
    }
    AlgebraElement &operator-=(const AlgebraElement &o) {
        c[0] -= o.c[0]; c[1] -= o.c[1]; c[2] -= o.c[2];
        return *this;
    }
    AlgebraElement &operator*=(double s) {
        c[0] *= s; c[1] *= s; c[2] *= s;
        return *this;
    }
};

inline AlgebraElement operator+(AlgebraElement a, const AlgebraElement &b) { return a += b; }
inline AlgebraElement operator-(AlgebraElement a, const AlgebraElement &b) { return a -= b; }
inline AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
inline AlgebraElement operator*(AlgebraElement a, double s) { return a *= s; }
inline AlgebraElement operator-(const AlgebraElement &a) { return {-a.c[0], -a.c[1], -a.c[2]}; }

// [X,Y]: cross product of coefficients in the orthonormal basis
inline AlgebraElement bracket(const AlgebraElement &x, const AlgebraElement &y) {
    return {x.c[1] * y.c[2] - x.c[2] * y.c[1],
            x.c[2] * y.c[0] - x.c[0] * y.c[2],
            x.c[0] * y.c[1] - x.c[1] * y.c[0]};
}

// <X,Y> = -2 tr(XY)
inline double pairing(const AlgebraElement &x, const AlgebraElement &y) {
    return x.c[0] * y.c[0] + x.c[1] * y.c[1] + x.c[2] * y.c[2];
}

inline double norm_sq(const AlgebraElement &x) { return pairing(x, x); }

/// Value re + i*im in sl(2,C) = su(2) (x) C.
struct ComplexAlgebraElement {
    AlgebraElement re, im;

    ComplexAlgebraElement() = default;
    ComplexAlgebraElement(const AlgebraElement &r) : re(r) {}
    ComplexAlgebraElement(const AlgebraElement &r, const AlgebraElement &i) : re(r), im(i) {}

    cplx coeff(int a) const { return {re.c[a], im.c[a]}; }

    ComplexAlgebraElement &operator+=(const ComplexAlgebraElement &o) {
        re += o.re; im += o.im;
        return *this;
    }
    ComplexAlgebraElement &operator-=(const ComplexAlgebraElement &o) {
        re -= o.re; im -= o.im;
        return *this;
    }
    ComplexAlgebraElement &operator*=(double s) {
        re *= s; im *= s;
        return *this;
    }
    ComplexAlgebraElement &operator*=(cplx z) {
        AlgebraElement r = re * z.real() - im * z.imag();
        AlgebraElement i = re * z.imag() + im * z.real();
        re = r; im = i;
        return *this;
    }
};

inline ComplexAlgebraElement operator+(ComplexAlgebraElement a, const ComplexAlgebraElement &b) { return a += b; }
inline ComplexAlgebraElement operator-(ComplexAlgebraElement a, const ComplexAlgebraElement &b) { return a -= b; }
inline ComplexAlgebraElement operator*(double s, ComplexAlgebraElement a) { return a *= s; }
inline ComplexAlgebraElement operator*(cplx z, ComplexAlgebraElement a) { return a *= z; }
inline ComplexAlgebraElement operator-(const ComplexAlgebraElement &a) { return {-a.re, -a.im}; }

inline ComplexAlgebraElement conj(const ComplexAlgebraElement &x) { return {x.re, -x.im}; }

inline ComplexAlgebraElement bracket(const ComplexAlgebraElement &x, const ComplexAlgebraElement &y) {
    return {bracket(x.re, y.re) - bracket(x.im, y.im),
            bracket(x.re, y.im) + bracket(x.im, y.re)};
}

inline ComplexAlgebraElement bracket(const AlgebraElement &x, const ComplexAlgebraElement &y) {
    return {bracket(x, y.re), bracket(x, y.im)};
}
inline ComplexAlgebraElement bracket(const ComplexAlgebraElement &x, const AlgebraElement &y) {
    return {bracket(x.re, y), bracket(x.im, y)};
}

// complex-bilinear extension of -2 tr(XY)
inline cplx pairing(const ComplexAlgebraElement &x, const ComplexAlgebraElement &y) {
    return {pairing(x.re, y.re) - pairing(x.im, y.im),
            pairing(x.re, y.im) + pairing(x.im, y.re)};
}

// hermitian norm: |re|^2 + |im|^2
inline double norm_sq(const ComplexAlgebraElement &x) {
    return norm_sq(x.re) + norm_sq(x.im);
}

// real part of the hermitian pairing <X, conj(Y)>
inline double hermitian_dot(const AlgebraElement &x, const AlgebraElement &y) {
    return pairing(x, y);
}
inline double hermitian_dot(const ComplexAlgebraElement &x, const ComplexAlgebraElement &y) {
    return pairing(x.re, y.re) + pairing(x.im, y.im);
}

// Wedge-trace scalars, normalized as 2x the fundamental trace:
//   tr2(X,Y)   =  2 tr(XY)   = -<X,Y>
//   tr3(X,Y,Z) =  2 tr(XYZ)  = -<[X,Y],Z>/2
inline double tr2(const AlgebraElement &x, const AlgebraElement &y) { return -pairing(x, y); }
inline cplx tr2(const ComplexAlgebraElement &x, const ComplexAlgebraElement &y) { return -pairing(x, y); }
inline double tr3(const AlgebraElement &x, const AlgebraElement &y, const AlgebraElement &z) {
    return -0.5 * pairing(bracket(x, y), z);
}
inline cplx tr3(const ComplexAlgebraElement &x, const ComplexAlgebraElement &y, const ComplexAlgebraElement &z) {
    return -0.5 * pairing(bracket(x, y), z);
}

/// SU(2) element stored as a unit quaternion w + x u1 + y u2 + z u3 with
/// u_a = -i sigma_a = 2 e_a.
struct GroupElement {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    GroupElement() = default;
    GroupElement(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    GroupElement inverse() const { return {w, -x, -y, -z}; }
    double quat_norm_sq() const { return w * w + x * x + y * y + z * z; }
};

inline GroupElement operator*(const GroupElement &a, const GroupElement &b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

/// Rodrigues / quaternion closed form of exp: X = sum c_a e_a maps to
/// cos(|c|/2) + sin(|c|/2) c_hat . u.
inline GroupElement exp_map(const AlgebraElement &xa) {
    double n = std::sqrt(norm_sq(xa));
    double half = 0.5 * n;
    double s;
    if (n < 1e-12) {
        // sin(n/2)/n expanded to keep exp smooth through 0
        s = 0.5 - n * n / 48.0;
    } else {
        s = std::sin(half) / n;
    }
    return {std::cos(half), s * xa.c[0], s * xa.c[1], s * xa.c[2]};
}

/// g X g^-1 for real g: rotation of the coefficient vector.
inline AlgebraElement adjoint_action(const GroupElement &g, const AlgebraElement &xa) {
    // q * (0,v) * q^-1 with v = c/2 scales back to c; pure-vector sandwich
    double vx = xa.c[0], vy = xa.c[1], vz = xa.c[2];
    double tw = -g.x * vx - g.y * vy - g.z * vz;
    double tx = g.w * vx + g.y * vz - g.z * vy;
    double ty = g.w * vy + g.z * vx - g.x * vz;
    double tz = g.w * vz + g.x * vy - g.y * vx;
    return {tw * -g.x + tx * g.w - ty * g.z + tz * g.y,
            tw * -g.y + tx * g.z + ty * g.w - tz * g.x,
            tw * -g.z - tx * g.y + ty * g.x + tz * g.w};
}

/// 2x2 complex matrix; the storage form of SL(2,C) gauge values.
struct ComplexGroupElement {
    // row-major entries a b / c d
    cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    cplx det() const { return a * d - b * c; }
    ComplexGroupElement inverse() const {
        cplx dt = det();
        if (std::abs(dt) < 1e-14)
            throw std::domain_error("degenerate group element");
        cplx inv = 1.0 / dt;
        return {d * inv, -b * inv, -c * inv, a * inv};
    }
};

inline ComplexGroupElement operator*(const ComplexGroupElement &l, const ComplexGroupElement &r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

inline ComplexGroupElement operator+(const ComplexGroupElement &l, const ComplexGroupElement &r) {
    return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d};
}

inline ComplexGroupElement operator*(cplx s, const ComplexGroupElement &m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
}

/// Matrix of X = sum z_a e_a, e_a = -(i/2) sigma_a.
inline ComplexGroupElement to_matrix(const ComplexAlgebraElement &xa) {
    cplx z1 = xa.coeff(0), z2 = xa.coeff(1), z3 = xa.coeff(2);
    const cplx mi{0.0, -1.0};
    // -(i/2) [ z3, z1 - i z2 ; z1 + i z2, -z3 ]
    return {0.5 * mi * z3, 0.5 * mi * (z1 + mi * z2),
            0.5 * mi * (z1 - mi * z2), -0.5 * mi * z3};
}

inline ComplexGroupElement to_matrix(const GroupElement &g) {
    // w I + x u1 + y u2 + z u3, u_a = -i sigma_a
    return {{g.w, -g.z}, {-g.y, -g.x}, {g.y, -g.x}, {g.w, g.z}};
}

/// Coefficients of a (traceless part of a) matrix: z_a = -2 tr(M e_a).
inline ComplexAlgebraElement from_matrix(const ComplexGroupElement &m) {
    const cplx i{0.0, 1.0};
    cplx z1 = i * (m.b + m.c);
    cplx z2 = m.c - m.b;
    cplx z3 = i * (m.a - m.d);
    return {{z1.real(), z2.real(), z3.real()}, {z1.imag(), z2.imag(), z3.imag()}};
}

/// g X g^-1 for complex g.
inline ComplexAlgebraElement adjoint_action(const ComplexGroupElement &g, const ComplexAlgebraElement &xa) {
    return from_matrix(g * to_matrix(xa) * g.inverse());
}

} // namespace kw

#endif
