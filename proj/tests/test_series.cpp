#include <doctest.h>

#include <random>

#include "mfwave/series.hpp"

using namespace mfwave;

namespace {

const ModularForm& e4_long() {
    static const ModularForm f = make_eisenstein(4, 130000);
    return f;
}

const ModularForm& delta_med() {
    static const ModularForm f = make_delta(4000);
    return f;
}

SeriesSpec e4_spec(double s, double tol) {
    SeriesSpec sp;
    sp.form = &e4_long();
    sp.s = Real(s);
    sp.tol = Real(tol);
    return sp;
}

} // namespace

TEST_CASE("periodize fractional part") {
    PrecisionGuard guard(50);
    CHECK(periodize(Real("2.25")) == Real("0.25"));
    CHECK(periodize(Real("-0.25")) == Real("0.75"));
    Real phi = (1 + sqrt(Real(5))) / 2;
    CHECK(abs(periodize(phi) - (phi - 1)) < 1e-45);
    CHECK(periodize(Real(3)) == 0);
}

TEST_CASE("sine flavor vanishes at 0 and 1/2") {
    PrecisionGuard guard(40);
    auto sp = e4_spec(7.0, 1e-10);
    auto r0 = eval_series(sp, Real(0));
    CHECK(r0.value == 0);
    auto rh = eval_series(sp, Real(1) / 2);
    CHECK(abs(rh.value) < 1e-30); // termwise sin(pi n), only rounding noise
}

TEST_CASE("oddness and evenness") {
    PrecisionGuard guard(40);
    auto sp = e4_spec(7.0, 1e-9);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ux(0.01, 0.99);
    for (int t = 0; t < 10; ++t) {
        Real x(ux(rng));
        auto plus = eval_series(sp, x);
        auto minus = eval_series(sp, -x);
        CHECK(abs(plus.value + minus.value) < 2 * sp.tol);
        SeriesSpec cs = sp;
        cs.flavor = SeriesFlavor::Cosine;
        auto cplus = eval_series(cs, x);
        auto cminus = eval_series(cs, -x);
        CHECK(abs(cplus.value - cminus.value) < 2 * sp.tol);
    }
}

TEST_CASE("termwise periodicity") {
    PrecisionGuard guard(40);
    auto sp = e4_spec(7.0, 1e-8);
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        Real x(ux(rng));
        auto a = eval_series(sp, x);
        auto b = eval_series(sp, x + 1);
        CHECK(abs(a.value - b.value) < 2 * sp.tol);
        auto c = eval_series(sp, periodize(x));
        CHECK(abs(a.value - c.value) < 2 * sp.tol);
    }
}

TEST_CASE("E4 s=7 at x=1/4 vs brute-force partial sum") {
    PrecisionGuard guard(40); // ~128 bits
    auto sp = e4_spec(7.0, 1e-12);
    auto r = eval_series(sp, Real(1) / 4);
    CHECK(r.err_bound <= sp.tol);
    CHECK_FALSE(r.heuristic_envelope);

    // oracle: 10^6-term partial sum; at x = 1/4 the sine is the period-4
    // pattern 1, 0, -1, 0 over odd n
    auto sig = sigma_table(3, 1000000);
    Real oracle(0);
    for (long n = 1; n <= 1000000; n += 2) {
        Real term = 240 * Real(sig[n]) / pow(Real(n), 7);
        if (n % 4 == 3) term = -term;
        oracle += term;
    }
    CHECK(abs(r.value - oracle) < 2e-12);
    // frozen regression value (first digits of the same quantity)
    CHECK(static_cast<double>(r.value) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
}

TEST_CASE("halving tol moves the value by at most the old bound") {
    PrecisionGuard guard(40);
    auto sp = e4_spec(7.5, 1e-8);
    Real x("0.3183098861837906");
    auto a = eval_series(sp, x);
    sp.tol = Real(5e-9);
    auto b = eval_series(sp, x);
    CHECK(abs(a.value - b.value) <= a.err_bound);
    CHECK(b.terms_used >= a.terms_used);
}

TEST_CASE("convergence and certification errors") {
    PrecisionGuard guard(40);
    SUBCASE("non-cusp below k") {
        auto sp = e4_spec(3.5, 1e-6);
        CHECK_THROWS_AS(eval_series(sp, Real("0.3")), NonConvergent);
    }
    SUBCASE("cusp below k/2") {
        SeriesSpec sp;
        sp.form = &delta_med();
        sp.s = Real(5.0);
        sp.tol = Real(1e-6);
        CHECK_THROWS_AS(eval_series(sp, Real("0.3")), NonConvergent);
    }
    SUBCASE("cusp in the uncertifiable band refuses even with the flag") {
        SeriesSpec sp;
        sp.form = &delta_med();
        sp.s = Real(6.3); // above k/2 = 6 but below (k+1)/2 + 0.1 = 6.6
        sp.tol = Real(1e-6);
        CHECK_THROWS_AS(eval_series(sp, Real("0.3")), NotCertifiable);
        sp.deligne_heuristic = true;
        CHECK_THROWS_AS(eval_series(sp, Real("0.3")), NotCertifiable);
    }
    SUBCASE("cusp with s <= k needs the heuristic flag") {
        SeriesSpec sp;
        sp.form = &delta_med();
        sp.s = Real(11.0);
        sp.tol = Real(1e-10);
        CHECK_THROWS_AS(eval_series(sp, Real("0.3")), NotCertifiable);
        sp.deligne_heuristic = true;
        auto r = eval_series(sp, Real("0.3"));
        CHECK(r.heuristic_envelope);
        CHECK(r.err_bound <= sp.tol);
    }
    SUBCASE("short table surfaces as TailBoundFailure") {
        static const ModularForm tiny = make_eisenstein(4, 10);
        SeriesSpec sp;
        sp.form = &tiny;
        sp.s = Real(7.0);
        sp.tol = Real(1e-12);
        CHECK_THROWS_AS(eval_series(sp, Real("0.3")), TailBoundFailure);
    }
}

TEST_CASE("cusp form with s > k certifies without the flag") {
    PrecisionGuard guard(40);
    SeriesSpec sp;
    sp.form = &delta_med();
    sp.s = Real(15.0);
    sp.tol = Real(1e-8);
    auto r = eval_series(sp, Real("0.7"));
    CHECK_FALSE(r.heuristic_envelope);
    // heuristic route must agree (it sums at least as many terms)
    sp.deligne_heuristic = true;
    auto h = eval_series(sp, Real("0.7"));
    CHECK(abs(r.value - h.value) < 2 * sp.tol);
}

TEST_CASE("required_terms grows as tol shrinks") {
    auto a = e4_spec(7.0, 1e-6);
    auto b = e4_spec(7.0, 1e-12);
    CHECK(required_terms(b) > required_terms(a));
}
