#include "mfwave/series.hpp"

#include <cmath>

namespace mfwave {

namespace {

struct Envelope {
    double exponent;   // |r_n| <= C n^exponent
    double C;
    bool heuristic;
};

double envelope_constant(const ModularForm& f, double exponent) {
    double best = 0;
    for (int n = 1; n <= f.max_index(); ++n) {
        double rn = std::abs(static_cast<double>(Real(f.coeffs[n])));
        best = std::max(best, rn / std::pow(static_cast<double>(n), exponent));
    }
    return 2.0 * best;
}

Envelope pick_envelope(const SeriesSpec& spec) {
    if (!spec.form) throw std::invalid_argument("eval_series: null form");
    const int k = spec.form->weight;
    const double s = static_cast<double>(spec.s);
    const double conv_threshold = spec.form->is_cusp ? k / 2.0 : static_cast<double>(k);
    if (s <= conv_threshold)
        throw NonConvergent("eval_series: s below the convergence threshold for this form");
    if (!spec.form->is_cusp || (s > k && !spec.deligne_heuristic)) {
        // trivial envelope exponent k-1, needs s > k
        if (s <= k) throw NotCertifiable("eval_series: crude envelope needs s > k");
        return {static_cast<double>(k - 1), envelope_constant(*spec.form, k - 1), false};
    }
    // cusp form, s <= k or heuristic requested
    if (!spec.deligne_heuristic)
        throw NotCertifiable(
            "eval_series: cusp form with s <= k has no certified envelope; "
            "set deligne_heuristic for the uncertified fast-tail mode");
    const double e = (k - 1) / 2.0 + 0.1;
    if (s <= e + 1)
        throw NotCertifiable("eval_series: s too small even for the heuristic envelope");
    return {e, envelope_constant(*spec.form, e), true};
}

long truncation_point(const Envelope& env, const Real& s, const Real& tol) {
    // tail sum_{n>N} C n^{e-s} <= C N^{-(s-e-1)} / (s-e-1) <= tol/2
    PrecisionGuard guard(60);
    Real p = s - env.exponent - 1;   // > 0 by pick_envelope
    Real N = pow(2 * Real(env.C) / (Real(tol) * p), 1 / p);
    if (N > Real(1e15)) throw TailBoundFailure("eval_series: truncation point beyond 1e15");
    long n = static_cast<long>(static_cast<double>(N)) + 1;
    return std::max(n, 1L);
}

} // namespace

Real periodize(const Real& x) {
    Real f = x - floor(x);
    if (f < 0) f += 1;       // guard against rounding at negative integers
    if (f >= 1) f -= 1;
    return f;
}

long required_terms(const SeriesSpec& spec) {
    Envelope env = pick_envelope(spec);
    return truncation_point(env, spec.s, spec.tol);
}

SeriesResult eval_series(const SeriesSpec& spec, const Real& x) {
    Envelope env = pick_envelope(spec);
    long N = truncation_point(env, spec.s, spec.tol);
    if (N > spec.form->max_index())
        throw TailBoundFailure("eval_series: coefficient table shorter than required truncation point (need n <= " +
                               std::to_string(N) + ")");

    // working precision: caller's, plus room for the frac(n x) reduction and
    // the summation length
    unsigned base_bits = bits_for_digits10(boost::multiprecision::mpfr_float::default_precision());
    unsigned extra = static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(N) + 2))) + 32;
    unsigned work_digits = digits10_for_bits(base_bits + extra);
    PrecisionGuard guard(work_digits);

    Real xw(x);
    xw.precision(work_digits); // widen so n*x rounding does not eat the frac
    Real two_pi = 2 * real_pi();
    Real s(spec.s);
    Real sum(0), comp(0); // Kahan accumulation
    long used = 0;
    for (long n = 1; n <= N; ++n) {
        if (spec.form->coeffs[n] == 0) continue;
        // exact-in-spirit argument reduction: frac(n x) at full working precision
        Real frac = periodize(Real(n) * xw);
        Real trig;
        if (spec.flavor == SeriesFlavor::Sine) trig = sin(two_pi * frac);
        else trig = cos(two_pi * frac);
        Real term = Real(spec.form->coeffs[n]) * trig / pow(Real(n), s);
        Real y = term - comp;
        Real t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        used = n;
    }

    // tail bound actually achieved at N
    Real p = s - env.exponent - 1;
    Real tail = Real(env.C) * pow(Real(N), -p) / p;

    SeriesResult r;
    r.value = Real(sum);   // shrinks back to caller precision on copy-out use
    r.err_bound = tail;
    r.terms_used = used;
    r.heuristic_envelope = env.heuristic;
    return r;
}

} // namespace mfwave
