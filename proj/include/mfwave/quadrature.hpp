#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "mfwave/complexr.hpp"

namespace mfwave {

/// Fixed-precision real for quadrature. boost's Gauss-Kronrod caches its
/// abscissae statically at the precision seen on first use, so a variable
/// precision type must not be handed to it; 40 digits covers the worst
/// cancellation we meet (about 9 digits for Delta at s = 11).
using QReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<40>>;
using CxQ = Cx<QReal>;

/// Adaptive Gauss-Kronrod of a complex-valued integrand over [lo, hi],
/// real and imaginary parts integrated separately.
template <class R, class F>
Cx<R> integrate_complex(F&& f, const R& lo, const R& hi, unsigned depth, const R& tol) {
    using boost::math::quadrature::gauss_kronrod;
    R re = gauss_kronrod<R, 61>::integrate(
        [&](const R& t) -> R { return f(t).re; }, lo, hi, depth, tol);
    R im = gauss_kronrod<R, 61>::integrate(
        [&](const R& t) -> R { return f(t).im; }, lo, hi, depth, tol);
    return Cx<R>(re, im);
}

/// Oscillatory tail integral I = int_X^inf e^{i omega t} (c1 t + c0)^{-rho} dt
/// by m steps of integration by parts:
///   I(rho) = -e^{i omega X} (c1 X + c0)^{-rho} / (i omega)
///            + (rho c1 / (i omega)) I(rho + 1).
/// Requires omega != 0 and a path c1 t + c0 that stays off the branch cut
/// (true here: |Im c0| = 1 and c1 is real). If rem_bound is non-null it
/// receives a bound on the dropped remainder, assuming |c1 t + c0| >= |c1| t
/// on the tail (holds for |c1| = 1, purely imaginary c0).
template <class R>
Cx<R> osc_tail(const R& omega, const R& rho, const R& c1, const Cx<R>& c0,
               const R& X, int m = 10, R* rem_bound = nullptr) {
    using std::abs;
    using std::pow;
    Cx<R> i_omega(R(0), omega);
    Cx<R> inv_iw = recip(i_omega);
    Cx<R> eiwX = exp(Cx<R>(R(0), omega * X));
    Cx<R> base = Cx<R>(c1 * X) + c0;
    Cx<R> sum(R(0));
    Cx<R> factor(R(1));     // prod_{l<j} (rho + l) c1 / (i omega)
    R factor_mag(1);
    for (int j = 0; j < m; ++j) {
        R rj = rho + R(j);
        R neg_rj = -rj;
        sum += factor * (-(eiwX * pow(base, neg_rj)) * inv_iw);
        factor *= Cx<R>(rj * c1) * inv_iw;
        factor_mag *= rj / abs(omega);
    }
    if (rem_bound) {
        // |remainder| <= factor_mag * int_X^inf (|c1| t)^{-(rho+m)} dt
        R p = rho + R(m) - R(1);
        R neg_rm = -(rho + R(m));
        R neg_p = -p;
        *rem_bound = factor_mag * pow(abs(c1), neg_rm) * pow(X, neg_p) / p;
    }
    return sum;
}

} // namespace mfwave
