#pragma once

#include "mfwave/modforms.hpp"
#include "mfwave/precision.hpp"

namespace mfwave {

enum class SeriesFlavor { Sine, Cosine };

/// M_{k,s}(x) = sum r_n / n^s sin(2 pi n x) (or the cosine variant).
///
/// Certification: non-cusp forms need s > k for the |r_n| <= C n^{k-1}
/// envelope tail to close. Cusp forms converge for s > k/2 but the crude
/// envelope still needs s > k; the deligne_heuristic flag switches to the
/// uncertified n^{(k-1)/2 + 0.1} envelope (valid for s > (k+1)/2 + 0.1) and
/// marks the result.
struct SeriesSpec {
    const ModularForm* form = nullptr;
    Real s;
    SeriesFlavor flavor = SeriesFlavor::Sine;
    Real tol;
    bool deligne_heuristic = false;
};

struct SeriesResult {
    Real value;
    Real err_bound;
    long terms_used = 0;
    bool heuristic_envelope = false;
};

/// Fractional part in [0, 1).
Real periodize(const Real& x);

/// Evaluate with a certified truncation bound (err_bound <= tol). Throws
/// NonConvergent below the convergence threshold, NotCertifiable when no
/// valid envelope applies, TailBoundFailure when the form's coefficient
/// table is shorter than the required truncation point.
SeriesResult eval_series(const SeriesSpec& spec, const Real& x);

/// Truncation point N implied by the spec's envelope and tolerance (the n
/// beyond which the integral-comparison tail is below tol/2).
long required_terms(const SeriesSpec& spec);

} // namespace mfwave
