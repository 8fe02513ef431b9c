#include "mfwave/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mfwave {

namespace {

constexpr unsigned kMaxConstructBits = 1u << 22; // big-integer budget for construct_prescribed

Real real_nan() { return Real(std::numeric_limits<double>::quiet_NaN()); }

bool is_nan(const Real& r) { return boost::multiprecision::isnan(r); }

/// Number of quotients available from a symbolic cf spec, or -1 for unlimited.
long cf_available(const RealPoint& x) {
    if (!x.cf_period.empty() || x.cf_rule) return -1;
    return static_cast<long>(x.cf_prefix.size());
}

BigInt cf_quotient(const RealPoint& x, int n) {
    if (n < static_cast<int>(x.cf_prefix.size())) return x.cf_prefix[n];
    if (!x.cf_period.empty()) {
        size_t i = (n - x.cf_prefix.size()) % x.cf_period.size();
        return x.cf_period[i];
    }
    if (x.cf_rule) return x.cf_rule(n);
    throw std::out_of_range("continued fraction terminates before requested index");
}

/// Tail value theta_{n+1} = [a_{n+1}; a_{n+2}, ...] at the current default
/// precision. Truncated once the tail continuant guarantees ~48 digits.
Real cf_tail_value(const RealPoint& x, int start) {
    const BigInt limit = boost::multiprecision::pow(BigInt(10), 48);
    std::vector<BigInt> tail;
    BigInt c_prev = 1, c_cur = 0; // continuant of collected tail terms
    long avail = cf_available(x);
    for (int j = start; avail < 0 || j < avail; ++j) {
        BigInt aj = cf_quotient(x, j);
        tail.push_back(aj);
        BigInt c_next = aj * c_cur + c_prev;
        c_prev = c_cur;
        c_cur = c_next;
        if (c_cur > limit || tail.size() > 400) break;
    }
    if (tail.empty()) throw std::out_of_range("empty continued-fraction tail");
    Real t = Real(tail.back());
    for (size_t j = tail.size() - 1; j-- > 0;) {
        t = Real(tail[j]) + 1 / t;
    }
    return t;
}

/// Continued-fraction quotients of sqrt(d) via the standard integer
/// recurrence; returns {a0, period}.
std::pair<BigInt, std::vector<BigInt>> sqrt_cf(long d) {
    long a0 = static_cast<long>(std::floor(std::sqrt(static_cast<double>(d))));
    while ((a0 + 1) * (a0 + 1) <= d) ++a0;
    while (a0 * a0 > d) --a0;
    if (a0 * a0 == d) throw std::invalid_argument("sqrt:d requires non-square d");
    std::vector<BigInt> period;
    long m = 0, den = 1, a = a0;
    do {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        period.push_back(a);
    } while (a != 2 * a0);
    return {BigInt(a0), period};
}

struct Convergents {
    std::vector<BigInt> p, q;
    void push(const BigInt& a) {
        size_t n = p.size();
        BigInt pp = (n >= 2) ? p[n - 2] : (n == 1 ? BigInt(1) : BigInt(0));
        BigInt p1 = (n >= 1) ? p[n - 1] : BigInt(1);
        BigInt qq = (n >= 2) ? q[n - 2] : (n == 1 ? BigInt(0) : BigInt(1));
        BigInt q1 = (n >= 1) ? q[n - 1] : BigInt(0);
        p.push_back(a * p1 + pp);
        q.push_back(a * q1 + qq);
    }
};

void fill_kappa_from_residual(DiophantineProfile& prof) {
    prof.kappa.assign(prof.residual.size(), real_nan());
    for (size_t n = 0; n < prof.residual.size(); ++n) {
        if (prof.q[n] < 2) continue;
        if (is_nan(prof.residual[n]) || prof.residual[n] <= 0) continue;
        prof.kappa[n] = -log(prof.residual[n]) / log(Real(prof.q[n]));
    }
}

DiophantineProfile expand_exact_cf(const RealPoint& x, int depth) {
    DiophantineProfile prof;
    prof.point_label = x.label;
    long avail = cf_available(x);
    int last = depth;
    if (avail >= 0 && avail <= depth) {
        last = static_cast<int>(avail) - 1;
        prof.rational_truncated = true;
    }
    Convergents cv;
    for (int n = 0; n <= last; ++n) {
        prof.a.push_back(cf_quotient(x, n));
        cv.push(prof.a.back());
    }
    prof.p = cv.p;
    prof.q = cv.q;
    prof.depth = last;

    PrecisionGuard guard(60);
    prof.precision_bits_used = bits_for_digits10(60);
    prof.residual.assign(last + 1, real_nan());
    for (int n = 0; n <= last; ++n) {
        // |x - p_n/q_n| = 1/(q_n (theta_{n+1} q_n + q_{n-1})), exact identity.
        bool has_tail = avail < 0 || n + 1 < avail;
        if (!has_tail) {
            prof.residual[n] = Real(0);
            continue;
        }
        Real theta = cf_tail_value(x, n + 1);
        Real qn = Real(prof.q[n]);
        Real qm = (n >= 1) ? Real(prof.q[n - 1]) : Real(0);
        prof.residual[n] = 1 / (qn * (theta * qn + qm));
    }
    fill_kappa_from_residual(prof);
    return prof;
}

DiophantineProfile expand_rational(const Rat& value, int depth, const std::string& label) {
    DiophantineProfile prof;
    prof.point_label = label;
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    Convergents cv;
    int n = 0;
    while (n <= depth && den != 0) {
        BigInt a, r;
        boost::multiprecision::divide_qr(num, den, a, r);
        if (r < 0) { a -= 1; r += den; } // floor division
        prof.a.push_back(a);
        cv.push(a);
        num = den;
        den = r;
        ++n;
    }
    prof.rational_truncated = (den == 0);
    prof.p = cv.p;
    prof.q = cv.q;
    prof.depth = static_cast<int>(prof.a.size()) - 1;

    PrecisionGuard guard(60);
    prof.precision_bits_used = bits_for_digits10(60);
    prof.residual.assign(prof.a.size(), real_nan());
    for (size_t m = 0; m < prof.a.size(); ++m) {
        Rat diff = value - Rat(prof.p[m], prof.q[m]);
        prof.residual[m] = abs(Real(diff));
    }
    fill_kappa_from_residual(prof);
    return prof;
}

/// Numeric expansion with an adaptive precision ladder. Retries with doubled
/// precision until every residual x - p_n/q_n retains >= 32 significant bits.
DiophantineProfile expand_numeric(const RealPoint& x, int depth, const ExpandOptions& opt) {
    unsigned bits = std::max(256u, x.precision_bits);
    unsigned max_bits = opt.precision_ceiling_bits;
    if (x.kind == PointKind::Decimal) {
        // A digit string carries only so much information; never pretend more.
        size_t digits = 0;
        for (char c : x.decimal)
            if (c >= '0' && c <= '9') ++digits;
        unsigned inherent = static_cast<unsigned>(digits * 3.32) + 8;
        max_bits = std::min(max_bits, inherent);
    }

    for (;;) {
        if (bits > max_bits) {
            if (bits / 2 <= max_bits && max_bits >= 128) {
                bits = max_bits; // one attempt at the cap before giving up
            } else {
                throw PrecisionExhausted("expand: precision ladder exceeded ceiling at " +
                                         std::to_string(bits) + " bits");
            }
        }
        PrecisionGuard guard(digits10_for_bits(bits));
        Real xv = x.render();
        DiophantineProfile prof;
        prof.point_label = x.label;
        prof.precision_bits_used = bits;
        Convergents cv;
        Real y = xv;
        bool ok = true;
        bool terminated = false;
        for (int n = 0; n <= depth; ++n) {
            Real fl = floor(y);
            BigInt a = to_bigint(fl);
            prof.a.push_back(a);
            cv.push(a);
            Real frac = y - fl;
            Real res = abs(xv - Real(cv.p[n]) / Real(cv.q[n]));
            prof.residual.push_back(res);
            if (frac == 0) { terminated = true; break; }
            // Significant bits left in the residual at this working precision.
            double sig = static_cast<double>(bits) +
                         static_cast<double>(log(res)) * 1.4426950408889634;
            if (res == 0 || sig < 32) { ok = false; break; }
            y = 1 / frac;
        }
        if (!ok) {
            if (bits >= max_bits)
                throw PrecisionExhausted("expand: input precision exhausted at " +
                                         std::to_string(bits) + " bits");
            bits *= 2;
            continue;
        }
        prof.p = cv.p;
        prof.q = cv.q;
        prof.depth = static_cast<int>(prof.a.size()) - 1;
        prof.rational_truncated = terminated;
        fill_kappa_from_residual(prof);
        return prof;
    }
}

} // namespace

bool RealPoint::exact_cf() const {
    return kind == PointKind::ContFrac ||
           (kind == PointKind::Named && (name == "phi" || name == "e" || name.rfind("sqrt:", 0) == 0));
}

BigInt RealPoint::quotient(int n) const {
    return cf_quotient(*this, n);
}

Real RealPoint::render() const {
    switch (kind) {
    case PointKind::Decimal:
        return Real(decimal);
    case PointKind::Rational:
        return Real(rational);
    case PointKind::Surd: {
        Real root = sqrt(Real(surd.r));
        return (Real(surd.p) + Real(surd.q) * root) / Real(surd.den);
    }
    case PointKind::Named: {
        if (name == "phi") return (1 + sqrt(Real(5))) / 2;
        if (name == "e") return exp(Real(1));
        if (name.rfind("sqrt:", 0) == 0) return sqrt(Real(std::stol(name.substr(5))));
        throw std::invalid_argument("unknown named constant: " + name);
    }
    case PointKind::ContFrac: {
        unsigned bits = bits_for_digits10(Real::default_precision());
        Convergents cv;
        long avail = cf_available(*this);
        for (int n = 0;; ++n) {
            if (avail >= 0 && n >= avail) break;
            cv.push(cf_quotient(*this, n));
            size_t sz = cv.q.size();
            if (sz >= 2) {
                // stop once q_n q_{n+1} > 2^(bits+16)
                if (msb(cv.q[sz - 1] * cv.q[sz - 2]) > bits + 16) break;
            }
            if (n > 100000) break;
        }
        return Real(cv.p.back()) / Real(cv.q.back());
    }
    }
    throw std::logic_error("unreachable");
}

RealPoint RealPoint::from_decimal(std::string digits, unsigned bits) {
    RealPoint p;
    p.kind = PointKind::Decimal;
    p.decimal = std::move(digits);
    p.precision_bits = bits;
    p.label = "dec:" + p.decimal;
    return p;
}

RealPoint RealPoint::from_rational(Rat value) {
    RealPoint p;
    p.kind = PointKind::Rational;
    p.rational = std::move(value);
    p.label = p.rational.str();
    return p;
}

RealPoint RealPoint::surd_sqrt(long d) {
    RealPoint p;
    p.kind = PointKind::Named;
    p.name = "sqrt:" + std::to_string(d);
    p.label = p.name;
    auto [a0, period] = sqrt_cf(d);
    p.cf_prefix = {a0};
    p.cf_period = std::move(period);
    return p;
}

RealPoint RealPoint::named(const std::string& n) {
    RealPoint p;
    p.kind = PointKind::Named;
    p.name = n;
    p.label = n;
    if (n == "phi") {
        p.cf_prefix = {BigInt(1)};
        p.cf_period = {BigInt(1)};
    } else if (n == "e") {
        // e = [2; 1,2,1, 1,4,1, 1,6,1, ...]
        p.cf_prefix = {BigInt(2)};
        p.cf_rule = [](int k) -> BigInt {
            return (k % 3 == 2) ? BigInt(2 * ((k + 1) / 3)) : BigInt(1);
        };
    } else if (n.rfind("sqrt:", 0) == 0) {
        return surd_sqrt(std::stol(n.substr(5)));
    } else {
        throw std::invalid_argument("unknown named constant: " + n);
    }
    return p;
}

RealPoint RealPoint::from_quotients(std::vector<BigInt> prefix, std::vector<BigInt> period) {
    for (size_t n = 1; n < prefix.size(); ++n)
        if (prefix[n] < 1) throw std::invalid_argument("partial quotients a_n must be >= 1 for n >= 1");
    for (const auto& a : period)
        if (a < 1) throw std::invalid_argument("periodic quotients must be >= 1");
    RealPoint p;
    p.kind = PointKind::ContFrac;
    p.cf_prefix = std::move(prefix);
    p.cf_period = std::move(period);
    std::ostringstream os;
    os << "cf:[";
    for (size_t i = 0; i < p.cf_prefix.size(); ++i)
        os << (i ? (i == 1 ? ";" : ",") : "") << p.cf_prefix[i];
    if (!p.cf_period.empty()) {
        os << (p.cf_prefix.size() > 1 ? ",(" : ";(");
        for (size_t i = 0; i < p.cf_period.size(); ++i)
            os << (i ? "," : "") << p.cf_period[i];
        os << ")";
    }
    os << "]";
    p.label = os.str();
    return p;
}

double DiophantineProfile::quotient_frequency(const BigInt& i) const {
    if (depth < 1) return 0.0;
    int count = 0;
    for (int n = 1; n <= depth; ++n)
        if (a[n] == i) ++count;
    return static_cast<double>(count) / depth;
}

DiophantineProfile expand(const RealPoint& x, int depth, const ExpandOptions& opt) {
    if (depth < 1) throw std::invalid_argument("expand: depth must be >= 1");
    if (x.exact_cf()) return expand_exact_cf(x, depth);
    if (x.kind == PointKind::Rational) return expand_rational(x.rational, depth, x.label);
    return expand_numeric(x, depth, opt);
}

std::pair<double, double> estimate_mu_nu(DiophantineProfile& profile, int window) {
    if (profile.depth < 2 * window)
        throw InsufficientDepth("estimate_mu_nu: need depth >= 2*window");
    double mu = -std::numeric_limits<double>::infinity();
    double nu = std::numeric_limits<double>::infinity();
    int used = 0;
    for (int n = profile.depth; n >= 0 && used < window; --n) {
        if (is_nan(profile.kappa[n])) continue;
        double k = static_cast<double>(profile.kappa[n]);
        mu = std::max(mu, k);
        nu = std::min(nu, k);
        ++used;
    }
    if (used == 0) throw InsufficientDepth("estimate_mu_nu: no usable kappa values");
    profile.mu_estimate = mu;
    profile.nu_estimate = nu;
    profile.window_used = window;
    return {mu, nu};
}

RealPoint construct_prescribed(double kappa_target, int depth) {
    if (kappa_target < 2) throw std::invalid_argument("construct_prescribed: kappa_target must be >= 2");
    std::vector<BigInt> prefix;
    prefix.push_back(BigInt(0)); // a_0
    BigInt q_prev2 = 0, q_prev = 1; // q_{-1}, q_0
    for (int n = 1; n <= depth + 2; ++n) {
        BigInt a;
        if (kappa_target == 2.0 || q_prev <= 1) {
            a = 1;
        } else {
            unsigned qbits = static_cast<unsigned>(msb(q_prev)) + 1;
            if (qbits > kMaxConstructBits)
                throw DepthOverflow("construct_prescribed: q exceeds big-integer budget");
            unsigned digits = static_cast<unsigned>(qbits * 0.302 * (kappa_target - 2.0)) + 30;
            PrecisionGuard guard(digits);
            Real qv(q_prev);
            Real av = floor(exp((kappa_target - 2.0) * log(qv)) + Real(0.5));
            a = to_bigint(av);
            if (a < 1) a = 1;
        }
        prefix.push_back(a);
        BigInt q_next = a * q_prev + q_prev2;
        q_prev2 = q_prev;
        q_prev = q_next;
    }
    RealPoint p = RealPoint::from_quotients(std::move(prefix));
    std::ostringstream os;
    os << "liouville:" << kappa_target << ":" << depth;
    p.label = os.str();
    return p;
}

SbSum sb_partial_sum(const DiophantineProfile& profile, int k, int terms) {
    if (terms > profile.depth - 1)
        throw InsufficientDepth("sb_partial_sum: terms must be <= depth - 1");
    PrecisionGuard guard(50);
    SbSum out;
    out.total = Real(0);
    for (int n = 0; n <= terms; ++n) {
        Real inc = log(Real(profile.q[n + 1])) / pow(Real(profile.q[n]), k);
        out.total += inc;
        out.partials.push_back(out.total);
    }
    return out;
}

std::string profile_to_json(const DiophantineProfile& profile) {
    nlohmann::json j;
    auto strs = [](const std::vector<BigInt>& v) {
        std::vector<std::string> out;
        out.reserve(v.size());
        for (const auto& b : v) out.push_back(b.str());
        return out;
    };
    j["point"] = profile.point_label;
    j["a"] = strs(profile.a);
    j["p"] = strs(profile.p);
    j["q"] = strs(profile.q);
    std::vector<std::string> kap;
    for (const auto& k : profile.kappa)
        kap.push_back(is_nan(k) ? std::string("nan") : k.str(20));
    j["kappa"] = kap;
    j["kappa_digits"] = 20;
    j["depth"] = profile.depth;
    j["precision_bits"] = profile.precision_bits_used;
    j["rational_truncated"] = profile.rational_truncated;
    j["mu_estimate"] = profile.mu_estimate;
    j["nu_estimate"] = profile.nu_estimate;
    j["window"] = profile.window_used;
    return j.dump(2);
}

} // namespace mfwave
