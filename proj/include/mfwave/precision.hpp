#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfwave {

/// Variable-precision real. Precision is controlled through the thread's
/// default precision; use PrecisionGuard around any computation that needs a
/// specific working precision and construct all locals inside the guarded
/// scope.
using Real = boost::multiprecision::mpfr_float;
using BigInt = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 4;
}

inline unsigned bits_for_digits10(unsigned digits) {
    return static_cast<unsigned>(std::ceil(digits * 3.321928094887362)) + 8;
}

class PrecisionGuard {
public:
    explicit PrecisionGuard(unsigned digits10)
        : saved_(Real::default_precision()) {
        Real::default_precision(digits10);
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

/// Exact truncation of a Real to a big integer.
inline BigInt to_bigint(const Real& r) {
    BigInt z;
    mpfr_get_z(z.backend().data(), r.backend().data(), MPFR_RNDZ);
    return z;
}

/// pi at the current default precision.
inline Real real_pi() {
    Real p(0);
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientDepth : std::runtime_error {
    explicit InsufficientDepth(const std::string& what) : std::runtime_error(what) {}
};

struct DepthOverflow : std::runtime_error {
    explicit DepthOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct TailBoundFailure : std::runtime_error {
    explicit TailBoundFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NotCertifiable : std::runtime_error {
    explicit NotCertifiable(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

struct NonIntegrable : std::runtime_error {
    explicit NonIntegrable(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureBudgetExceeded : std::runtime_error {
    explicit QuadratureBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct RingDegenerate : std::runtime_error {
    explicit RingDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateFit : std::runtime_error {
    explicit DegenerateFit(const std::string& what) : std::runtime_error(what) {}
};

struct BisectionFailure : std::runtime_error {
    explicit BisectionFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mfwave
