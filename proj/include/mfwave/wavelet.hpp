#pragma once

#include <string>
#include <vector>

#include "mfwave/modforms.hpp"
#include "mfwave/series.hpp"

namespace mfwave {

/// Analyzing wavelet psi_s(x) = 1/(x+i)^{s+1} with the principal branch
/// -pi < arg z <= pi.

struct WaveletParams {
    Real s;
    int m_max = 0;              // largest m with a vanishing moment, ceil(s)-1
    Real admissibility_value;
};

WaveletParams make_wavelet_params(const Real& s);

enum class CwtMethod { ClosedForm, Quadrature };

struct WaveletCoefficient {
    Real a;
    Real b;
    CxR value;
    CwtMethod method = CwtMethod::ClosedForm;
    std::string form_id;
    Real s;
};

/// Gamma(x) for real x > 0 at the current working precision.
Real real_gamma(const Real& x);

/// c~(rho) = 2 pi e^{i pi rho / 2} / Gamma(rho).
CxR c_tilde(const Real& rho);

/// Chat(s) = (2 pi)^s pi e^{i pi s / 2} / Gamma(s+1), the closed-form
/// transform constant.
CxR chat(const Real& s);

CxR psi(const Real& s, const Real& x);

/// Closed-form Fourier transform (convention g^(xi) = int g e^{-i x xi} dx):
/// 0 for xi < 0, e^{-i pi (s+1)} xi^s c~(s+1) e^{-xi} for xi > 0.
CxR psi_hat(const Real& s, const Real& xi);

/// Admissibility constant |c~(s+1)|^2 2^{-2s} Gamma(2s).
Real admissibility(const Real& s);

/// Numerical int_0^inf |psi_hat|^2 dxi / xi (oracle for admissibility).
double admissibility_numeric(double s);

/// |int x^m psi_s dx| via the x = tan(theta) substitution; the residual is
/// the diagnostic (should be ~0 for m < s). Throws NonIntegrable if m >= s.
double moment_residual(double s, int m);

/// Numerical Fourier integral over [-X, X] plus integration-by-parts tails
/// (oracle for psi_hat).
CxD psi_hat_numeric(double s, double xi, double X = 60.0);

/// Lemma 2.8 closed form: Chat(s) a^s (M_k(b+ia) - r_0) for the sine series
/// (the cosine variant picks up an extra factor i). eps is the absolute tail
/// target passed to eval_form.
WaveletCoefficient cwt_closed(const ModularForm& form, const Real& s,
                              const Real& a, const Real& b, const Real& eps,
                              SeriesFlavor flavor = SeriesFlavor::Sine);

struct CwtQuadOptions {
    double rel_target = 1e-6;  // relative to the natural scale a^s |Chat|
    int force_terms = 0;       // if > 0, sum exactly this many series terms
    int max_terms = 300;
    unsigned depth = 12;
};

/// Independent oracle: termwise numerical (1/a) int M(t) conj(psi)((t-b)/a) dt.
WaveletCoefficient cwt_quadrature(const SeriesSpec& spec, const Real& a,
                                  const Real& b, const CwtQuadOptions& opt = {});

/// CSV rows (a, b, log10 a, Re, Im, |value|, method) for plotting.
std::string cwt_grid_csv(const std::vector<WaveletCoefficient>& grid);

} // namespace mfwave
