#include <doctest.h>

#include <random>

#include "mfwave/contfrac.hpp"

using namespace mfwave;

namespace {

void check_invariants(const DiophantineProfile& prof) {
    // recurrence and determinant identity, exact in big integers
    BigInt pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0; // p_{-2},p_{-1},q_{-2},q_{-1}
    for (int n = 0; n <= prof.depth; ++n) {
        CHECK(prof.p[n] == prof.a[n] * pm1 + pm2);
        CHECK(prof.q[n] == prof.a[n] * qm1 + qm2);
        BigInt det = qm1 * prof.p[n] - pm1 * prof.q[n];
        BigInt expect = (n % 2 == 0) ? BigInt(-1) : BigInt(1); // (-1)^(n-1)
        CHECK(det == expect);
        pm2 = pm1; pm1 = prof.p[n];
        qm2 = qm1; qm1 = prof.q[n];
    }
    for (int n = 2; n <= prof.depth; ++n) CHECK(prof.q[n] > prof.q[n - 1]);
}

bool kappa_defined(const DiophantineProfile& prof, int n) {
    return prof.q[n] >= 2 && !boost::multiprecision::isnan(prof.kappa[n]);
}

} // namespace

TEST_CASE("golden ratio expands to all ones") {
    auto phi = RealPoint::named("phi");
    auto prof = expand(phi, 5);
    REQUIRE(prof.depth == 5);
    for (int n = 0; n <= 5; ++n) CHECK(prof.a[n] == 1);
    check_invariants(prof);
}

TEST_CASE("sqrt(2) quotients and convergents") {
    auto prof = expand(RealPoint::surd_sqrt(2), 4);
    CHECK(prof.a[0] == 1);
    for (int n = 1; n <= 4; ++n) CHECK(prof.a[n] == 2);
    CHECK(prof.p[0] == 1); CHECK(prof.q[0] == 1);
    CHECK(prof.p[1] == 3); CHECK(prof.q[1] == 2);
    CHECK(prof.p[2] == 7); CHECK(prof.q[2] == 5);
    CHECK(prof.p[3] == 17); CHECK(prof.q[3] == 12);
    check_invariants(prof);
}

TEST_CASE("sqrt(2) via numeric surd path agrees with exact path") {
    RealPoint numeric;
    numeric.kind = PointKind::Surd;
    numeric.surd = {0, 1, 2, 1};
    numeric.label = "surd-sqrt2";
    auto a = expand(numeric, 20);
    auto b = expand(RealPoint::surd_sqrt(2), 20);
    REQUIRE(a.depth == b.depth);
    for (int n = 0; n <= a.depth; ++n) {
        CHECK(a.a[n] == b.a[n]);
        if (!kappa_defined(a, n)) continue;
        // kappa from the subtraction ladder vs the tail identity
        CHECK(std::abs(static_cast<double>(a.kappa[n] - b.kappa[n])) < 1e-9);
    }
}

TEST_CASE("355/113 terminates with flag") {
    auto prof = expand(RealPoint::from_rational(Rat(355, 113)), 10);
    CHECK(prof.rational_truncated);
    REQUIRE(prof.depth == 2);
    CHECK(prof.a[0] == 3);
    CHECK(prof.a[1] == 7);
    CHECK(prof.a[2] == 16);
}

TEST_CASE("kappa of sqrt(2) at q_n = 5") {
    // oracle: exact surd arithmetic, kappa = -ln|sqrt2 - 7/5| / ln 5
    PrecisionGuard guard(60);
    Real oracle = -log(abs(sqrt(Real(2)) - Real(7) / 5)) / log(Real(5));
    auto prof = expand(RealPoint::surd_sqrt(2), 6);
    int n5 = -1;
    for (int n = 0; n <= prof.depth; ++n)
        if (prof.q[n] == 5) n5 = n;
    REQUIRE(n5 >= 0);
    CHECK(std::abs(static_cast<double>(prof.kappa[n5] - oracle)) < 1e-12);
    CHECK(static_cast<double>(prof.kappa[n5]) == doctest::Approx(2.643).epsilon(1e-3));
}

TEST_CASE("residual bracketing invariant") {
    for (auto point : {RealPoint::surd_sqrt(2), RealPoint::named("phi"), RealPoint::named("e")}) {
        PrecisionGuard guard(80);
        auto prof = expand(point, 15);
        for (int n = 1; n < prof.depth; ++n) {
            Real lo = 1 / (Real(prof.q[n]) * (Real(prof.q[n + 1]) + Real(prof.q[n])));
            Real hi = 1 / (Real(prof.q[n]) * Real(prof.q[n + 1]));
            CHECK(prof.residual[n] > lo);
            CHECK(prof.residual[n] < hi);
        }
    }
}

TEST_CASE("determinant identity on random cf points, depth 60") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> quot(1, 12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BigInt> prefix{BigInt(0)};
        for (int n = 0; n < 62; ++n) prefix.push_back(BigInt(quot(rng)));
        auto prof = expand(RealPoint::from_quotients(prefix), 60);
        check_invariants(prof);
    }
}

TEST_CASE("kappa stable under doubled precision") {
    RealPoint numeric;
    numeric.kind = PointKind::Surd;
    numeric.surd = {0, 1, 3, 1};
    numeric.precision_bits = 256;
    auto a = expand(numeric, 25);
    numeric.precision_bits = 512;
    auto b = expand(numeric, 25);
    for (int n = 1; n <= 25; ++n) {
        if (!kappa_defined(a, n)) continue;
        double rel = std::abs(static_cast<double>((a.kappa[n] - b.kappa[n]) / b.kappa[n]));
        CHECK(rel < std::ldexp(1.0, -30));
    }
}

TEST_CASE("expand is deterministic") {
    auto p1 = expand(RealPoint::named("e"), 30);
    auto p2 = expand(RealPoint::named("e"), 30);
    for (int n = 0; n <= 30; ++n) {
        CHECK(p1.a[n] == p2.a[n]);
        if (!kappa_defined(p1, n)) continue;
        CHECK(p1.kappa[n] == p2.kappa[n]);
    }
}

TEST_CASE("mu/nu of sqrt(2) and phi near 2") {
    for (auto point : {RealPoint::surd_sqrt(2), RealPoint::named("phi")}) {
        auto prof = expand(point, 25);
        auto [mu, nu] = estimate_mu_nu(prof, 10);
        CHECK(mu == doctest::Approx(2.0).epsilon(0.05));
        CHECK(nu == doctest::Approx(2.0).epsilon(0.05));
        CHECK(nu <= mu);
    }
}

TEST_CASE("construct_prescribed hits the target exponent") {
    SUBCASE("kappa 2 gives all-ones tail") {
        auto p = construct_prescribed(2.0, 10);
        for (size_t n = 1; n < p.cf_prefix.size(); ++n) CHECK(p.cf_prefix[n] == 1);
    }
    SUBCASE("kappa 4") {
        auto p = construct_prescribed(4.0, 8);
        auto prof = expand(p, 8);
        CHECK(static_cast<double>(prof.kappa[7]) > 3.8);
        CHECK(static_cast<double>(prof.kappa[7]) < 4.1);
        auto [mu, nu] = estimate_mu_nu(prof, 3);
        CHECK(std::abs(mu - 4.0) < 0.15);
    }
    SUBCASE("kappa 6") {
        auto p = construct_prescribed(6.0, 6);
        auto prof = expand(p, 6);
        auto [mu, nu] = estimate_mu_nu(prof, 2);
        CHECK(mu > 5.7);
        CHECK(mu < 6.2);
    }
}

TEST_CASE("estimate_mu_nu requires depth") {
    auto prof = expand(RealPoint::named("phi"), 5);
    CHECK_THROWS_AS(estimate_mu_nu(prof, 10), InsufficientDepth);
}

TEST_CASE("sb partial sums") {
    auto sqrt2 = expand(RealPoint::surd_sqrt(2), 14);
    auto sb = sb_partial_sum(sqrt2, 2, 10);
    CHECK(static_cast<double>(sb.total) > 0);
    // successive increments decrease
    for (size_t i = 2; i < sb.partials.size(); ++i) {
        Real inc_prev = sb.partials[i - 1] - sb.partials[i - 2];
        Real inc = sb.partials[i] - sb.partials[i - 1];
        CHECK(inc < inc_prev);
    }
    SUBCASE("single-term sum") {
        auto one = sb_partial_sum(sqrt2, 2, 0);
        PrecisionGuard guard(50);
        Real expect = log(Real(sqrt2.q[1])) / pow(Real(sqrt2.q[0]), 2);
        CHECK(abs(one.total - expect) < 1e-40);
    }
    SUBCASE("prescribed kappa=5 decays slower than sqrt(2)") {
        auto p = expand(construct_prescribed(5.0, 7), 7);
        auto sp = sb_partial_sum(p, 2, 5);
        auto ss = sb_partial_sum(sqrt2, 2, 5);
        // compare last increments relative to first
        double tail_p = static_cast<double>(sp.partials[5] - sp.partials[4]);
        double tail_s = static_cast<double>(ss.partials[5] - ss.partials[4]);
        double head_p = static_cast<double>(sp.partials[0]);
        double head_s = static_cast<double>(ss.partials[0]);
        CHECK(tail_p / head_p > tail_s / head_s);
    }
    CHECK_THROWS_AS(sb_partial_sum(sqrt2, 2, 14), InsufficientDepth);
}

TEST_CASE("rational input via decimal-style fraction keeps Euclid oracle honest") {
    // Euclid oracle: gcd-style expansion of 1393/972 computed by hand recurrence
    Rat v(1393, 972);
    auto prof = expand(RealPoint::from_rational(v), 30);
    CHECK(prof.rational_truncated);
    Rat back(prof.p[prof.depth], prof.q[prof.depth]);
    CHECK(back == v);
}

TEST_CASE("profile JSON serialization carries exact strings") {
    auto prof = expand(RealPoint::surd_sqrt(2), 8);
    estimate_mu_nu(prof, 4);
    auto s = profile_to_json(prof);
    CHECK(s.find("\"a\"") != std::string::npos);
    CHECK(s.find("\"kappa\"") != std::string::npos);
    CHECK(s.find("577") != std::string::npos); // q_7 of sqrt 2... p_7/q_7 = 577/408
}

TEST_CASE("quotient frequency counts") {
    auto prof = expand(RealPoint::named("e"), 30);
    double f1 = prof.quotient_frequency(BigInt(1));
    CHECK(f1 > 0.5);
    CHECK(f1 < 0.8);
}
