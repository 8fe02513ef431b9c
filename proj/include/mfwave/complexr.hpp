#pragma once

#include <cmath>
#include <ostream>

#include "mfwave/precision.hpp"

namespace mfwave {

/// Minimal complex type usable with both double and multiprecision reals.
/// std::complex is specified for builtin floating types only, hence this.
/// pow/log use the principal branch -pi < arg <= pi.
template <class R>
struct Cx {
    R re{};
    R im{};

    Cx() = default;
    Cx(R r) : re(std::move(r)), im(R(0)) {}
    Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
    Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
    Cx& operator*=(const Cx& o) {
        R r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
};

template <class R> Cx<R> operator+(Cx<R> a, const Cx<R>& b) { a += b; return a; }
template <class R> Cx<R> operator-(Cx<R> a, const Cx<R>& b) { a -= b; return a; }
template <class R> Cx<R> operator-(const Cx<R>& a) { return Cx<R>(-a.re, -a.im); }
template <class R> Cx<R> operator*(Cx<R> a, const Cx<R>& b) { a *= b; return a; }
template <class R> Cx<R> operator*(const R& s, Cx<R> a) { a.re *= s; a.im *= s; return a; }
template <class R> Cx<R> operator*(Cx<R> a, const R& s) { a.re *= s; a.im *= s; return a; }

template <class R>
Cx<R> conj(const Cx<R>& a) { return Cx<R>(a.re, -a.im); }

template <class R>
R norm2(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }

template <class R>
R abs(const Cx<R>& a) {
    using std::sqrt;
    return sqrt(norm2(a));
}

template <class R>
R arg(const Cx<R>& a) {
    using std::atan2;
    return atan2(a.im, a.re);
}

template <class R>
Cx<R> operator/(const Cx<R>& a, const Cx<R>& b) {
    R d = norm2(b);
    return Cx<R>((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
}

template <class R>
Cx<R> operator/(const Cx<R>& a, const R& s) { return Cx<R>(a.re / s, a.im / s); }

template <class R>
Cx<R> recip(const Cx<R>& a) {
    R d = norm2(a);
    return Cx<R>(a.re / d, -a.im / d);
}

template <class R>
Cx<R> exp(const Cx<R>& a) {
    using std::exp;
    using std::sin;
    using std::cos;
    R e = exp(a.re);
    return Cx<R>(e * cos(a.im), e * sin(a.im));
}

template <class R>
Cx<R> log(const Cx<R>& a) {
    using std::log;
    return Cx<R>(log(abs(a)), arg(a));
}

/// Principal-branch complex power with real exponent.
template <class R>
Cx<R> pow(const Cx<R>& a, const R& p) {
    using std::log;
    R lm = log(abs(a));
    return exp(Cx<R>(p * lm, p * arg(a)));
}

/// Integer power by repeated squaring (single-valued, no branch concerns).
template <class R>
Cx<R> pow_int(Cx<R> a, long n) {
    bool inv = n < 0;
    unsigned long m = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Cx<R> r(R(1), R(0));
    while (m) {
        if (m & 1) r *= a;
        a *= a;
        m >>= 1;
    }
    return inv ? recip(r) : r;
}

template <class R>
std::ostream& operator<<(std::ostream& os, const Cx<R>& a) {
    return os << "(" << a.re << (a.im < 0 ? "" : "+") << a.im << "i)";
}

using CxD = Cx<double>;
using CxR = Cx<Real>;

} // namespace mfwave
