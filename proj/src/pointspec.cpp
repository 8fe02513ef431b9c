#include "mfwave/pointspec.hpp"

#include <sstream>

namespace mfwave {

namespace {

bool starts_with(const std::string& s, const std::string& pre) {
    return s.rfind(pre, 0) == 0;
}

std::invalid_argument bad(const std::string& spec, const std::string& why) {
    return std::invalid_argument("point spec '" + spec + "': " + why);
}

RealPoint parse_cf(const std::string& spec) {
    // cf:[a0;a1,a2,(b1,b2)]
    if (spec.size() < 7 || spec.back() != ']') throw bad(spec, "expected cf:[...]");
    std::string inner = spec.substr(4, spec.size() - 5);
    auto semi = inner.find(';');
    if (semi == std::string::npos) throw bad(spec, "missing ';' after a0");
    std::vector<BigInt> prefix, period;
    try {
        prefix.push_back(BigInt(inner.substr(0, semi)));
    } catch (const std::exception&) {
        throw bad(spec, "a0 is not an integer");
    }
    std::string rest = inner.substr(semi + 1);
    if (rest.empty()) throw bad(spec, "expected at least one quotient after ';'");
    bool in_period = false, period_closed = false;
    std::istringstream is(rest);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (period_closed) throw bad(spec, "tokens after the repeating tail");
        if (!tok.empty() && tok.front() == '(') {
            if (in_period) throw bad(spec, "nested '('");
            in_period = true;
            tok.erase(tok.begin());
        }
        if (!tok.empty() && tok.back() == ')') {
            if (!in_period) throw bad(spec, "')' without '('");
            period_closed = true;
            tok.pop_back();
        }
        if (tok.empty()) throw bad(spec, "empty quotient");
        BigInt a;
        try {
            a = BigInt(tok);
        } catch (const std::exception&) {
            throw bad(spec, "quotient '" + tok + "' is not an integer");
        }
        if (a < 1) throw bad(spec, "partial quotients past a0 must be >= 1");
        (in_period ? period : prefix).push_back(a);
    }
    if (in_period && !period_closed) throw bad(spec, "unclosed '('");
    auto p = RealPoint::from_quotients(std::move(prefix), std::move(period));
    p.label = spec;
    return p;
}

} // namespace

RealPoint parse_point(const std::string& spec) {
    if (spec.empty()) throw bad(spec, "empty");
    if (spec == "phi" || spec == "e") return RealPoint::named(spec);
    if (spec == "sqrt2m1") {
        auto p = RealPoint::from_quotients({BigInt(0)}, {BigInt(2)});
        p.label = "sqrt2m1";
        return p;
    }
    if (starts_with(spec, "sqrt:")) {
        long d;
        try {
            d = std::stol(spec.substr(5));
        } catch (const std::exception&) {
            throw bad(spec, "sqrt argument is not an integer");
        }
        return RealPoint::surd_sqrt(d);
    }
    if (starts_with(spec, "dec:")) return RealPoint::from_decimal(spec.substr(4));
    if (starts_with(spec, "cf:[")) return parse_cf(spec);
    if (starts_with(spec, "liouville:")) {
        auto rest = spec.substr(10);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw bad(spec, "expected liouville:<kappa>:<depth>");
        double kappa;
        int depth;
        try {
            kappa = std::stod(rest.substr(0, colon));
            depth = std::stoi(rest.substr(colon + 1));
        } catch (const std::exception&) {
            throw bad(spec, "malformed kappa or depth");
        }
        return construct_prescribed(kappa, depth);
    }
    if (spec.find('/') != std::string::npos) {
        try {
            return RealPoint::from_rational(Rat(spec));
        } catch (const std::exception&) {
            throw bad(spec, "malformed rational");
        }
    }
    throw bad(spec, "unrecognized");
}

ModularForm parse_form(const std::string& spec, int N) {
    if (spec == "delta") return make_delta(N);
    if (spec == "e2") return make_eisenstein(2, N);
    if (starts_with(spec, "eisenstein:")) {
        int k;
        try {
            k = std::stoi(spec.substr(11));
        } catch (const std::exception&) {
            throw std::invalid_argument("form spec '" + spec + "': weight is not an integer");
        }
        if (k < 2 || k % 2 != 0)
            throw std::invalid_argument("form spec '" + spec + "': weight must be even and >= 2");
        return make_eisenstein(k, N);
    }
    throw std::invalid_argument("form spec '" + spec +
                                "': expected eisenstein:<k> | delta | e2");
}

} // namespace mfwave
