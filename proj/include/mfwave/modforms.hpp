#pragma once

#include <string>
#include <vector>

#include "mfwave/complexr.hpp"
#include "mfwave/precision.hpp"

namespace mfwave {

enum class FormKind { Eisenstein, Delta, RawCoefficients };

/// q-expansion coefficients r_0..r_N of a level-one form, kept exact.
/// Delta is stored in the normalization Delta(z)/(2pi)^12 = sum tau(n) q^n;
/// the (2pi)^12 factor is display-only metadata.
struct ModularForm {
    FormKind kind = FormKind::RawCoefficients;
    int weight = 0;
    bool is_cusp = false;
    std::vector<Rat> coeffs;   // index 0..N
    std::string normalization;
    std::string id;

    /// Envelope constant C with |r_n| <= C n^{weight-1}: max over the table
    /// of |r_n|/n^{k-1}, doubled for safety.
    double tail_envelope() const;
    int max_index() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct Unimodular {
    BigInt a = 1, b = 0, c = 0, d = 1;
    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
};

/// Point in the upper half-plane at the current working precision.
struct UHPoint {
    Real re, im;
    UHPoint() : re(0), im(1) {}
    UHPoint(Real r, Real i) : re(std::move(r)), im(std::move(i)) {
        if (im <= 0) throw std::invalid_argument("UHPoint requires Im z > 0");
    }
    CxR cx() const { return CxR(re, im); }
};

/// sigma_{k-1}(n) for n = 1..N by divisor sieve.
std::vector<BigInt> sigma_table(int k_minus_1, int N);

/// Exact Bernoulli number B_k (k even >= 2) by the convolution recurrence.
Rat bernoulli(int k);

ModularForm make_eisenstein(int k, int N);
ModularForm make_delta(int N);

/// SL2(Z) reduction: returns z' = gamma.z with |Re z'| <= 1/2 and |z'| >= 1
/// (within 2^-40) and the exact gamma.
std::pair<UHPoint, Unimodular> reduce_to_fundamental_domain(const UHPoint& z);

/// gamma.z for exact gamma.
CxR moebius(const Unimodular& g, const CxR& z);

/// M_k(z) in the form's stored normalization, via fundamental-domain
/// reduction and the weight-k cocycle. eps is an absolute tail target for
/// the q-series evaluated at the reduced point. Weight 2 routes through
/// eval_E2.
CxR eval_form(const ModularForm& f, const UHPoint& z, const Real& eps);

/// Quasimodular E_2 with the per-step cocycle correction.
CxR eval_E2(const UHPoint& z, const Real& eps);

/// q-series sum r_n e^{2 pi i n z} without any reduction (oracle path; valid
/// only when Im z is large enough for the tail bound to close).
CxR eval_q_series(const ModularForm& f, const UHPoint& z, const Real& eps);

std::string coeffs_to_json(const ModularForm& f);
std::string coeffs_to_csv(const ModularForm& f);

} // namespace mfwave
