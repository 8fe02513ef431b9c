#include "mfwave/modforms.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mfwave {

namespace {

BigInt int_pow(BigInt base, int e) {
    BigInt r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// Truncated product of two q-expansions.
std::vector<Rat> series_mul(const std::vector<Rat>& f, const std::vector<Rat>& g, int N) {
    std::vector<Rat> h(N + 1, Rat(0));
    for (int i = 0; i <= N && i < static_cast<int>(f.size()); ++i) {
        if (f[i] == 0) continue;
        int jmax = std::min<int>(N - i, static_cast<int>(g.size()) - 1);
        for (int j = 0; j <= jmax; ++j) h[i + j] += f[i] * g[j];
    }
    return h;
}

struct ReductionStep {
    bool inversion;   // false: z -> z - t, true: z -> -1/z
    BigInt t;
    CxR before;       // point the step was applied at (needed for E2 unwind)
};

std::pair<CxR, Unimodular> reduce_impl(const UHPoint& z0, std::vector<ReductionStep>* steps) {
    CxR z = z0.cx();
    Unimodular g;
    Real tol = pow(Real(2), -40);
    const int max_iter = 1000000;
    for (int it = 0;; ++it) {
        if (it >= max_iter)
            throw PrecisionExhausted("reduce_to_fundamental_domain: iteration budget exceeded");
        if (z.im <= 0)
            throw PrecisionExhausted("reduce_to_fundamental_domain: Im z underflowed");
        BigInt t = to_bigint(floor(z.re + Real(0.5)));
        if (t != 0) {
            if (steps) steps->push_back({false, t, z});
            z.re -= Real(t);
            g.a -= t * g.c;
            g.b -= t * g.d;
        }
        if (norm2(z) < 1 - tol) {
            if (steps) steps->push_back({true, BigInt(0), z});
            Real d = norm2(z);
            z = CxR(-z.re / d, z.im / d);
            Unimodular n;
            n.a = -g.c; n.b = -g.d; n.c = g.a; n.d = g.b;
            g = n;
        } else if (abs(z.re) <= Real(0.5) + tol) {
            break;
        }
    }
    return {z, g};
}

/// E2 q-expansion table, exact and shared (coefficients do not depend on
/// precision).
const ModularForm& e2_table() {
    static const ModularForm f = make_eisenstein(2, 512);
    return f;
}

} // namespace

double ModularForm::tail_envelope() const {
    double best = 0;
    for (int n = 1; n < static_cast<int>(coeffs.size()); ++n) {
        double rn = std::abs(static_cast<double>(Real(coeffs[n])));
        double env = rn / std::pow(static_cast<double>(n), weight - 1);
        best = std::max(best, env);
    }
    return 2.0 * best;
}

std::vector<BigInt> sigma_table(int k_minus_1, int N) {
    if (k_minus_1 < 1 || N < 1) throw std::invalid_argument("sigma_table: bad arguments");
    std::vector<BigInt> t(N + 1, BigInt(0));
    for (int d = 1; d <= N; ++d) {
        BigInt dp = int_pow(BigInt(d), k_minus_1);
        for (int m = d; m <= N; m += d) t[m] += dp;
    }
    return t;
}

Rat bernoulli(int k) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("bernoulli: k must be even >= 2");
    // B_m = -1/(m+1) * sum_{j<m} C(m+1,j) B_j
    std::vector<Rat> B(k + 1);
    B[0] = 1;
    for (int m = 1; m <= k; ++m) {
        Rat s = 0;
        BigInt binom = 1; // C(m+1, j), built incrementally
        for (int j = 0; j < m; ++j) {
            s += Rat(binom) * B[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        B[m] = -s / Rat(m + 1);
    }
    return B[k];
}

ModularForm make_eisenstein(int k, int N) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("make_eisenstein: k must be even >= 2");
    ModularForm f;
    f.kind = FormKind::Eisenstein;
    f.weight = k;
    f.is_cusp = false;
    f.id = "eisenstein:" + std::to_string(k);
    f.normalization = "E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n";
    Rat mult = Rat(-2 * k) / bernoulli(k);
    auto sig = sigma_table(k - 1, N);
    f.coeffs.resize(N + 1);
    f.coeffs[0] = 1;
    for (int n = 1; n <= N; ++n) f.coeffs[n] = mult * Rat(sig[n]);
    return f;
}

ModularForm make_delta(int N) {
    if (N < 1) throw std::invalid_argument("make_delta: N must be >= 1");
    ModularForm e4 = make_eisenstein(4, N);
    ModularForm e6 = make_eisenstein(6, N);
    auto e4sq = series_mul(e4.coeffs, e4.coeffs, N);
    auto e4cu = series_mul(e4sq, e4.coeffs, N);
    auto e6sq = series_mul(e6.coeffs, e6.coeffs, N);
    ModularForm f;
    f.kind = FormKind::Delta;
    f.weight = 12;
    f.is_cusp = true;
    f.id = "delta";
    f.normalization = "Delta(z)/(2pi)^12 = sum tau(n) q^n";
    f.coeffs.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        Rat t = (e4cu[n] - e6sq[n]) / 1728;
        if (boost::multiprecision::denominator(t) != 1)
            throw std::logic_error("make_delta: tau(n) came out non-integral");
        f.coeffs[n] = t;
    }
    if (f.coeffs[0] != 0) throw std::logic_error("make_delta: r_0 != 0");
    return f;
}

std::pair<UHPoint, Unimodular> reduce_to_fundamental_domain(const UHPoint& z) {
    auto [w, g] = reduce_impl(z, nullptr);
    return {UHPoint(w.re, w.im), g};
}

CxR moebius(const Unimodular& g, const CxR& z) {
    CxR num = CxR(Real(g.a)) * z + CxR(Real(g.b));
    CxR den = CxR(Real(g.c)) * z + CxR(Real(g.d));
    return num / den;
}

CxR eval_q_series(const ModularForm& f, const UHPoint& z, const Real& eps) {
    Real two_pi = 2 * real_pi();
    Real decay = exp(-two_pi * z.im);
    CxR q = exp(CxR(-two_pi * z.im, two_pi * z.re));
    CxR qn(Real(1), Real(0));
    CxR sum(Real(f.coeffs[0]), Real(0));
    double C = f.tail_envelope();
    int k = f.weight;
    int N = f.max_index();
    for (int n = 1;; ++n) {
        if (n > N)
            throw TailBoundFailure("eval_q_series: coefficient table too short for requested eps");
        qn *= q;
        sum += Real(f.coeffs[n]) * qn;
        // tail bound: sum_{m>n} C m^{k-1} |q|^m, geometric-ratio estimate
        Real ratio = decay * pow(Real(n + 2) / Real(n + 1), k - 1);
        if (ratio < 1) {
            Real head = Real(C) * pow(Real(n + 1), k - 1) * pow(decay, n + 1);
            if (head / (1 - ratio) < eps) break;
        }
    }
    return sum;
}

CxR eval_form(const ModularForm& f, const UHPoint& z, const Real& eps) {
    if (f.kind == FormKind::Eisenstein && f.weight == 2) return eval_E2(z, eps);
    auto [w, g] = reduce_impl(z, nullptr);
    CxR val = eval_q_series(f, UHPoint(w.re, w.im), eps);
    if (g.is_identity()) return val;
    CxR czd = CxR(Real(g.c)) * z.cx() + CxR(Real(g.d));
    return val * pow_int(recip(czd), f.weight);
}

CxR eval_E2(const UHPoint& z, const Real& eps) {
    std::vector<ReductionStep> steps;
    auto [w, g] = reduce_impl(z, &steps);
    (void)g;
    CxR v = eval_q_series(e2_table(), UHPoint(w.re, w.im), eps);
    Real six_over_pi = 6 / real_pi();
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        if (it->inversion) {
            // E2(u) = E2(-1/u)/u^2 + (6i/pi)/u
            CxR u = it->before;
            CxR inv_u = recip(u);
            v = v * inv_u * inv_u + CxR(Real(0), six_over_pi) * inv_u;
        }
        // translations carry no correction
    }
    return v;
}

std::string coeffs_to_json(const ModularForm& f) {
    nlohmann::json j;
    j["id"] = f.id;
    j["kind"] = f.kind == FormKind::Eisenstein ? "eisenstein"
              : f.kind == FormKind::Delta ? "delta" : "raw";
    j["weight"] = f.weight;
    j["is_cusp"] = f.is_cusp;
    j["normalization"] = f.normalization;
    std::vector<std::string> c;
    c.reserve(f.coeffs.size());
    for (const auto& r : f.coeffs) c.push_back(r.str());
    j["coeffs"] = c;
    return j.dump(2);
}

std::string coeffs_to_csv(const ModularForm& f) {
    std::ostringstream os;
    os << "# mfwave coefficients v1\n";
    os << "# id=" << f.id << " weight=" << f.weight << " cusp=" << (f.is_cusp ? 1 : 0) << "\n";
    os << "n,r_n\n";
    for (size_t n = 0; n < f.coeffs.size(); ++n)
        os << n << "," << f.coeffs[n].str() << "\n";
    return os.str();
}

} // namespace mfwave
