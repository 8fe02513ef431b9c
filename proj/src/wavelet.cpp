#include "mfwave/wavelet.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mfwave/quadrature.hpp"

namespace mfwave {

namespace {

/// Same certifiability gate as eval_series (the quadrature oracle has its
/// own truncation control, but the spec of the transform requires the series
/// itself to be certifiable).
void require_certifiable(const SeriesSpec& spec) {
    if (!spec.form) throw std::invalid_argument("cwt_quadrature: null form");
    const int k = spec.form->weight;
    const double s = static_cast<double>(spec.s);
    const double conv = spec.form->is_cusp ? k / 2.0 : static_cast<double>(k);
    if (s <= conv) throw NonConvergent("cwt_quadrature: s below the convergence threshold");
    if (spec.form->is_cusp && s <= k && !spec.deligne_heuristic)
        throw NotCertifiable("cwt_quadrature: cusp form with s <= k needs the deligne_heuristic flag");
}

} // namespace

Real real_gamma(const Real& x) {
    Real r(0);
    mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

WaveletParams make_wavelet_params(const Real& s) {
    if (s <= 1) throw std::invalid_argument("make_wavelet_params: need s > 1");
    WaveletParams p;
    p.s = s;
    p.m_max = static_cast<int>(std::ceil(static_cast<double>(s))) - 1;
    p.admissibility_value = admissibility(s);
    return p;
}

CxR c_tilde(const Real& rho) {
    Real half = real_pi() * rho / 2;
    Real mag = 2 * real_pi() / real_gamma(rho);
    return CxR(mag * cos(half), mag * sin(half));
}

CxR chat(const Real& s) {
    Real half = real_pi() * s / 2;
    Real mag = pow(2 * real_pi(), s) * real_pi() / real_gamma(s + 1);
    return CxR(mag * cos(half), mag * sin(half));
}

CxR psi(const Real& s, const Real& x) {
    return recip(pow(CxR(x, Real(1)), s + Real(1)));
}

CxR psi_hat(const Real& s, const Real& xi) {
    if (xi < 0) return CxR(Real(0));
    if (xi == 0) throw std::invalid_argument("psi_hat: xi must be nonzero");
    Real ph = -real_pi() * (s + 1);
    CxR phase(cos(ph), sin(ph));
    Real mag = pow(xi, s) * exp(Real(-xi));
    return phase * c_tilde(s + 1) * mag;
}

Real admissibility(const Real& s) {
    if (s <= 1) throw std::invalid_argument("admissibility: need s > 1");
    Real ct = 2 * real_pi() / real_gamma(s + 1); // |c~(s+1)|
    return ct * ct * pow(Real(2), -2 * s) * real_gamma(2 * s);
}

double admissibility_numeric(double s) {
    if (s <= 1) throw std::invalid_argument("admissibility_numeric: need s > 1");
    double ct = 2 * M_PI / std::tgamma(s + 1);
    boost::math::quadrature::exp_sinh<double> integ;
    double integral = integ.integrate([&](double xi) -> double {
        double e = std::exp(-2 * xi);
        if (e == 0) return 0; // guard: pow(xi, big) * 0 would make inf*0
        return std::pow(xi, 2 * s - 1) * e;
    });
    return ct * ct * integral;
}

double moment_residual(double s, int m) {
    if (m < 0) throw std::invalid_argument("moment_residual: m >= 0 required");
    if (m >= s) throw NonIntegrable("moment_residual: need m < s");
    // x = tan(theta): int x^m psi_s dx =
    //   e^{-i pi (s+1)/2} int_{-pi/2}^{pi/2} e^{i(s+1)theta}
    //                         sin^m(theta) cos^{s-1-m}(theta) dtheta
    boost::math::quadrature::tanh_sinh<double> integ;
    double rho = s + 1;
    auto part = [&](bool imag) -> double {
        return integ.integrate([&](double th) -> double {
            double c = std::cos(th);
            if (c <= 0) return 0;
            double amp = std::pow(std::sin(th), m) * std::pow(c, s - 1 - m);
            double ph = rho * th - M_PI * rho / 2;
            return amp * (imag ? std::sin(ph) : std::cos(ph));
        }, -M_PI / 2, M_PI / 2);
    };
    double re = part(false), im = part(true);
    return std::hypot(re, im);
}

CxD psi_hat_numeric(double s, double xi, double X) {
    if (xi == 0) throw std::invalid_argument("psi_hat_numeric: xi must be nonzero");
    double rho = s + 1;
    CxD main = integrate_complex([&](double x) -> CxD {
        return exp(CxD(0, -xi * x)) * pow(CxD(x, 1), -rho);
    }, -X, X, 12u, 1e-12);
    // x > X tail, then x < -X via x = -u
    CxD pos = osc_tail(-xi, rho, 1.0, CxD(0, 1), X, 6);
    CxD neg = osc_tail(xi, rho, -1.0, CxD(0, 1), X, 6);
    return main + pos + neg;
}

WaveletCoefficient cwt_closed(const ModularForm& form, const Real& s,
                              const Real& a, const Real& b, const Real& eps,
                              SeriesFlavor flavor) {
    if (a <= 0 || a >= 1) throw std::invalid_argument("cwt_closed: need a in (0,1)");
    CxR mval = eval_form(form, UHPoint(b, a), eps);
    CxR centered = mval - CxR(Real(form.coeffs[0]));
    WaveletCoefficient w;
    w.a = a;
    w.b = b;
    w.s = s;
    w.form_id = form.id;
    w.method = CwtMethod::ClosedForm;
    w.value = chat(s) * pow(CxR(a), s) * centered;
    if (flavor == SeriesFlavor::Cosine) w.value = CxR(Real(0), Real(1)) * w.value;
    return w;
}

WaveletCoefficient cwt_quadrature(const SeriesSpec& spec, const Real& a,
                                  const Real& b, const CwtQuadOptions& opt) {
    if (a <= 0 || a >= 1) throw std::invalid_argument("cwt_quadrature: need a in (0,1)");
    require_certifiable(spec);
    const ModularForm& form = *spec.form;
    const int k = form.weight;
    QReal s(static_cast<double>(spec.s)); // s is a double-friendly parameter
    QReal rho = s + 1;
    QReal aq(a);
    QReal two_pi = 2 * boost::math::constants::pi<QReal>();
    QReal omega1 = two_pi * aq;

    // Natural magnitude scale of the transform, used as the absolute error
    // target. The form-value magnitude is estimated by a cheap direct
    // partial sum of the q-series at b+ia (only the target depends on it,
    // not the computed value), because e.g. |Delta~| near the real axis is
    // orders of magnitude below 1.
    double s_d = static_cast<double>(spec.s);
    double chat_mag = std::pow(2 * M_PI, s_d) * M_PI / std::tgamma(s_d + 1);
    double a_d = static_cast<double>(a);
    double b_d = static_cast<double>(periodize(b));
    std::complex<double> qz = std::exp(std::complex<double>(-2 * M_PI * a_d, 2 * M_PI * b_d));
    std::complex<double> qpow(1, 0), msum(0, 0);
    for (int n = 1; n <= std::min(300, form.max_index()); ++n) {
        qpow *= qz;
        msum += static_cast<double>(Real(form.coeffs[n])) * qpow;
    }
    double m_scale = std::max(std::abs(msum), 1e-12);
    QReal abs_target = QReal(opt.rel_target * chat_mag * m_scale) * pow(aq, s);
    double abs_target_d = opt.rel_target * chat_mag * m_scale * std::pow(a_d, s_d);
    QReal gk_tol(std::max(1e-35, std::min(1e-24, abs_target_d * 1e-4)));

    // Contour-shift cutoff bound: |int e^{i omega u} (u-i)^{-rho} du| <=
    // e^{-0.8 omega} * int |u - 0.2 i|^{-rho} du <= 3 * 0.2^{1-rho} e^{-0.8 omega}.
    double C_h = 3 * std::pow(0.2, 1 - static_cast<double>(rho));
    double env = 0; // max |r_n| / n^{k-1} over the table (envelope constant)
    for (int n = 1; n <= form.max_index(); ++n) {
        double rn = std::abs(static_cast<double>(Real(form.coeffs[n])));
        env = std::max(env, rn / std::pow(n, k - 1));
    }

    CxQ acc(QReal(0));
    CxQ half_over_i(QReal(0), QReal("-0.5")); // 1/(2i)
    double decay = std::exp(-0.8 * static_cast<double>(omega1));
    int terms = 0;
    for (int n = 1;; ++n) {
        if (n > opt.max_terms)
            throw QuadratureBudgetExceeded("cwt_quadrature: term budget exhausted");
        if (opt.force_terms > 0 && n > opt.force_terms) break;
        if (opt.force_terms == 0) {
            // bound the remaining sum by the envelope-decay geometric tail
            double env_next = env * std::pow(n + 1.0, k - 1 - s_d) * C_h *
                              std::pow(decay, n + 1);
            double ratio = std::pow((n + 1.0) / n, k - 1 - s_d) * decay;
            if (n >= 2 && ratio < 1 && QReal(env_next / (1 - ratio)) < abs_target / 2)
                break;
        }
        if (n > form.max_index())
            throw TailBoundFailure("cwt_quadrature: coefficient table too short");
        if (form.coeffs[n] == 0) continue;
        QReal omega = omega1 * n;
        // Per-term window: far enough out that the by-parts tail contracts
        // (each step multiplies by ~(rho+j)/(omega X)).
        QReal X = 2 * (rho + 10) / omega;
        if (X < 20) X = 20;
        QReal neg_rho = -rho;
        QReal neg_X = -X;
        auto F = [&](const QReal& w) -> CxQ {
            CxQ mid = integrate_complex([&](const QReal& u) -> CxQ {
                return exp(CxQ(QReal(0), w * u)) * pow(CxQ(u, QReal(-1)), neg_rho);
            }, neg_X, X, opt.depth, gk_tol);
            QReal neg_w = -w;
            CxQ pos = osc_tail(w, rho, QReal(1), CxQ(QReal(0), QReal(-1)), X, 12);
            CxQ neg = osc_tail(neg_w, rho, QReal(-1), CxQ(QReal(0), QReal(-1)), X, 12);
            return mid + pos + neg;
        };
        QReal neg_omega = -omega;
        CxQ Fp = F(omega);
        // F(-omega) vanishes by closing the contour in the lower half-plane
        // (the integrand is analytic there and decays like |u|^{-rho}); it is
        // still computed numerically once per call, at n = 1, as a live check.
        CxQ Fm = (n == 1 || terms == 0) ? F(neg_omega) : CxQ(QReal(0));
        QReal theta = two_pi * QReal(periodize(Real(n) * b));
        CxQ eip = exp(CxQ(QReal(0), theta));
        CxQ In;
        if (spec.flavor == SeriesFlavor::Sine)
            In = (eip * Fp - conj(eip) * Fm) * half_over_i;
        else
            In = (eip * Fp + conj(eip) * Fm) * QReal("0.5");
        acc += QReal(Rat(form.coeffs[n])) / pow(QReal(n), s) * In;
        terms = n;
    }
    (void)terms;

    WaveletCoefficient wres;
    wres.a = a;
    wres.b = b;
    wres.s = spec.s;
    wres.form_id = form.id;
    wres.method = CwtMethod::Quadrature;
    wres.value = CxR(Real(acc.re), Real(acc.im));
    return wres;
}

std::string cwt_grid_csv(const std::vector<WaveletCoefficient>& grid) {
    std::ostringstream os;
    os << "a,b,log10_a,re,im,abs,method\n";
    for (const auto& w : grid) {
        os << static_cast<double>(w.a) << "," << static_cast<double>(w.b) << ","
           << static_cast<double>(log10(w.a)) << ","
           << static_cast<double>(w.value.re) << "," << static_cast<double>(w.value.im) << ","
           << static_cast<double>(abs(w.value)) << ","
           << (w.method == CwtMethod::ClosedForm ? "closed_form" : "quadrature") << "\n";
    }
    return os.str();
}

} // namespace mfwave
