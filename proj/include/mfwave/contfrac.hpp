#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfwave/precision.hpp"

namespace mfwave {

enum class PointKind { Decimal, Rational, Surd, Named, ContFrac };

/// (p + q*sqrt(r)) / den with r > 0 not a perfect square.
struct SurdSpec {
    long p = 0;
    long q = 1;
    long r = 2;
    long den = 1;
};

/// Symbolic descriptor of a real number that can be rendered to any
/// requested precision. Explicit partial-quotient specs (finite prefix,
/// periodic tail, or a generator rule) are kept exact.
struct RealPoint {
    PointKind kind = PointKind::ContFrac;
    std::string decimal;                       // Decimal: digit string
    Rat rational;                              // Rational
    SurdSpec surd;                             // Surd
    std::string name;                          // Named: "phi" | "e" | "sqrt:<d>"
    std::vector<BigInt> cf_prefix;             // ContFrac: a_0, a_1, ...
    std::vector<BigInt> cf_period;             // repeating tail (may be empty)
    std::function<BigInt(int)> cf_rule;        // generator for a_n past the prefix
    unsigned precision_bits = 256;
    std::string label;

    /// True when the partial quotients are known symbolically (no numeric
    /// expansion needed).
    bool exact_cf() const;

    /// Partial quotient a_n for exact-cf points; throws otherwise.
    BigInt quotient(int n) const;

    /// Render to a Real at the current default precision (must be set by
    /// the caller to at least `bits` via PrecisionGuard).
    Real render() const;

    static RealPoint from_decimal(std::string digits, unsigned bits = 256);
    static RealPoint from_rational(Rat value);
    static RealPoint surd_sqrt(long d);           // sqrt(d), square-free d
    static RealPoint named(const std::string& n); // "phi", "e"
    static RealPoint from_quotients(std::vector<BigInt> prefix,
                                    std::vector<BigInt> period = {});
};

struct DiophantineProfile {
    std::vector<BigInt> a;        // partial quotients a_0..a_depth
    std::vector<BigInt> p, q;     // convergents, index-aligned with a
    std::vector<Real> kappa;      // kappa_n; NaN where q_n < 2
    std::vector<Real> residual;   // |x - p_n/q_n|
    double mu_estimate = 0;
    double nu_estimate = 0;
    int window_used = 0;
    int depth = 0;                // largest n with a_n computed
    bool rational_truncated = false;
    unsigned precision_bits_used = 0;
    std::string point_label;

    /// Frequency of quotient value i among a_1..a_depth (demo output only).
    double quotient_frequency(const BigInt& i) const;
};

struct ExpandOptions {
    unsigned precision_ceiling_bits = 1u << 22;
    double kappa_cap = 8.0; // precision policy: bits >= kappa_cap*log2(q)+64
};

/// Continued-fraction expansion with exact convergents and per-convergent
/// approximation exponents kappa_n = -log|x - p_n/q_n| / log q_n.
DiophantineProfile expand(const RealPoint& x, int depth, const ExpandOptions& opt = {});

/// Windowed max/min of kappa_n over the last `window` computed terms.
/// Finite-depth surrogates for limsup/liminf; the window is recorded in the
/// profile.
std::pair<double, double> estimate_mu_nu(DiophantineProfile& profile, int window);

/// Point with prescribed approximation exponent: a_{n+1} = max(1, round(q_n^{t-2})).
RealPoint construct_prescribed(double kappa_target, int depth);

struct SbSum {
    Real total;
    std::vector<Real> partials; // running partial sums, one per term
};

/// Diagnostic partial sum of sum_n log(q_{n+1})/q_n^k.
SbSum sb_partial_sum(const DiophantineProfile& profile, int k, int terms);

std::string profile_to_json(const DiophantineProfile& profile);

} // namespace mfwave
