#pragma once

#include <string>
#include <vector>

#include "mfwave/contfrac.hpp"
#include "mfwave/wavelet.hpp"

namespace mfwave {

/// One sampled point of the half-ring around x at convergent level n
/// (Proposition 3.2 geometry: r_inner <= |b - x + ia| <= r_outer).
struct RingSample {
    int n = 0;
    Real a;
    Real b;
    Real r_inner;
    Real r_outer;
    bool is_apex = false;
};

enum class QuotientCondition { None, InfinitelyOftenConstant, InfinitelyOftenGe7 };

struct Prediction {
    std::string theorem;     // "thm1.1" | "thm1.2" | "thm6.1" | "cor6.3"
    double value = 0;        // exponent value (or lower bound)
    bool is_equality = false;
    bool condition_holds = false;
    std::string condition;   // human-readable hypothesis with its evaluation
};

struct ScalingSample {
    int n = 0;
    BigInt q;
    double kappa = 0;
    double log_a = 0;        // natural logs
    double log_absC = 0;
    double local_exponent = 0;
};

struct ExponentReport {
    std::string point_label;
    std::string form_id;
    double s = 0;
    double measured_alpha = 0;
    double fit_residual = 0; // max |deviation| from the OLS line
    double D = 3;
    double mu = 0, nu = 0;
    bool mu_infinite = false;
    int n_lo = 0, n_hi = 0;
    std::vector<Prediction> predicted;
    std::vector<ScalingSample> samples;
};

/// Half-ring sample points at level n; the apex (a, b) = (D |x - p_n/q_n|, x)
/// always comes first, the rest sit at angles in (0, pi) on radii between
/// r_inner and r_outer. Throws RingDegenerate when the two radii coincide at
/// working precision.
std::vector<RingSample> ring_points(const DiophantineProfile& profile,
                                    const RealPoint& x, int n, double D, int count);

/// Theoretical predictions with their hypotheses evaluated. mu/nu may be
/// +infinity (the 1/mu = 0 convention).
std::vector<Prediction> predict_exponent(FormKind kind, int k, double s,
                                         double mu, double nu, QuotientCondition qc);

/// Measured Hoelder exponent: OLS slope of log|C(a_n, x)| against log a_n
/// over apex scales n in [n_lo, n_hi], computed in log space from the closed
/// form. mu/nu for the predictions come from estimate_mu_nu over mu_window.
ExponentReport measure_exponent(const ModularForm& form, double s,
                                const RealPoint& x, DiophantineProfile& profile,
                                int n_lo, int n_hi, double D = 3.0,
                                int mu_window = 8,
                                QuotientCondition qc = QuotientCondition::None);

struct UpperBoundReport {
    bool pass = false;
    double overall_max = 0;
    double first_third_max = 0;
    double last_third_max = 0;
    std::vector<double> per_ring_max; // indexed by ring order in n_range
};

/// Proposition 3.2(i): |C| / min_{m in {n-1,n}} a^{s-k+k/kappa_m}
/// (1+|b-x|/a)^{k/kappa_m} stays bounded across rings (last-third max <= 2x
/// first-third max).
UpperBoundReport verify_prop32_upper(const ModularForm& form, double s,
                                     const RealPoint& x, const DiophantineProfile& profile,
                                     int n_lo, int n_hi, double D, int samples_per_ring);

struct LowerBoundReport {
    bool pass = false;
    double first_half_max = 0;
    double last_half_max = 0;
    std::vector<double> ctilde; // per-apex constants
};

/// Proposition 3.2(ii) surrogate: the apex constants c~_n = |C| a^{-(s-k+k/kappa_n)}
/// do not decay along the subsequence (last-half max >= 0.5x first-half max).
LowerBoundReport verify_prop32_lower(const ModularForm& form, double s,
                                     const RealPoint& x, const DiophantineProfile& profile,
                                     int n_lo, int n_hi, double D);

struct ClaimConstants {
    double r = 0;   // threshold with |r_0| = sum |r_n| e^{-2 pi n r}
    double c1 = 0;  // cusp envelope |M~(z)| <= c1 / Im(z)^{k/2+1}
    double c2 = 0;  // non-cusp two-sided bounds on |M_k| for Im z >= r
    double c3 = 0;
    bool holdout_ok = false;
};

/// Claim 3.1 / Claim 5.1 constants by bisection + grid scan, validated on a
/// fresh seeded random sample.
ClaimConstants estimate_claim_constants(const ModularForm& form, unsigned seed = 20260824);

std::string report_to_json(const ExponentReport& rep);
std::string scaling_table_csv(const ExponentReport& rep);

} // namespace mfwave
