#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfwave/pointspec.hpp"
#include "mfwave/regularity.hpp"

using namespace mfwave;

namespace {

// Exit-code contract: 0 success, 2 precision, 3 empty/degenerate, 4 usage.
constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kPrecision = 2;
constexpr int kDegenerate = 3;
constexpr int kUsage = 4;

void emit(const std::string& output, const std::string& body) {
    if (output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream os(output);
    if (!os) throw std::runtime_error("cannot open output file: " + output);
    os << body;
}

ExpandOptions expand_options() {
    ExpandOptions opt;
    if (const char* env = std::getenv("MFWAVE_PRECISION_CEILING"))
        opt.precision_ceiling_bits = static_cast<unsigned>(std::stoul(env));
    return opt;
}

unsigned digits_for_depth(const DiophantineProfile& profile, int n_hi) {
    double bits = 0;
    for (int n = 0; n <= std::min(n_hi, profile.depth); ++n) {
        if (profile.residual[n] <= 0) continue;
        bits = std::max(bits, -static_cast<double>(log(profile.residual[n])) * 1.4427);
    }
    return digits10_for_bits(static_cast<unsigned>(bits) + 160);
}

/// Infer the paper's quotient conditions from the computed tail quotients.
QuotientCondition infer_condition(const DiophantineProfile& profile, int weight) {
    int lo = std::max(1, profile.depth - 8);
    bool constant = true, ge7 = true;
    for (int n = lo; n <= profile.depth; ++n) {
        if (profile.a[n] != profile.a[lo]) constant = false;
        if (profile.a[n] < 7) ge7 = false;
    }
    if (weight == 2 && ge7) return QuotientCondition::InfinitelyOftenGe7;
    if (constant) return QuotientCondition::InfinitelyOftenConstant;
    return QuotientCondition::None;
}

struct Args {
    std::string point, form = "eisenstein:4", output, format = "json", flavor = "sine";
    std::string suite;
    double s = 7, D = 3;
    int depth = 20, n_lo = 3, n_hi = 12, mu_window = 8;
    bool check_quadrature = false;
};

int cmd_profile(const Args& a) {
    auto pt = parse_point(a.point);
    auto prof = expand(pt, a.depth, expand_options());
    emit(a.output, profile_to_json(prof) + "\n");
    return kOk;
}

int cmd_cwt(const Args& a) {
    if (a.n_lo > a.n_hi) {
        std::cerr << "cwt: empty grid (n_lo > n_hi), no output written\n";
        return kDegenerate;
    }
    auto pt = parse_point(a.point);
    auto form = parse_form(a.form);
    SeriesFlavor flavor = a.flavor == "cosine" ? SeriesFlavor::Cosine : SeriesFlavor::Sine;
    auto prof = expand(pt, a.n_hi, expand_options());

    unsigned digits = digits_for_depth(prof, a.n_hi);
    PrecisionGuard guard(digits);
    Real xr = pt.render();
    Real eps = pow(Real(10), -static_cast<int>(digits / 2));
    Real sr(a.s);

    std::vector<WaveletCoefficient> rows;
    for (int n = a.n_lo; n <= std::min(a.n_hi, prof.depth); ++n) {
        if (!(prof.residual[n] > 0)) continue;
        Real an = Real(a.D) * prof.residual[n];
        if (an >= 1) continue; // the transform scale must sit below 1
        rows.push_back(cwt_closed(form, sr, an, xr, eps, flavor));
    }
    if (rows.empty()) {
        std::cerr << "cwt: no usable scales in range, no output written\n";
        return kDegenerate;
    }
    if (a.check_quadrature) {
        SeriesSpec spec;
        spec.form = &form;
        spec.s = sr;
        spec.flavor = flavor;
        size_t base = rows.size();
        for (size_t i = 0; i < base; ++i) {
            // the oscillatory-quadrature oracle is only economical at
            // moderate scales
            if (rows[i].a < 0.05) continue;
            auto wq = cwt_quadrature(spec, rows[i].a, rows[i].b);
            Real rel = abs(wq.value - rows[i].value) / abs(rows[i].value);
            if (rel > Real("1e-4")) {
                std::cerr << "cwt: quadrature cross-check failed at a="
                          << static_cast<double>(rows[i].a) << " (rel "
                          << static_cast<double>(rel) << ")\n";
                return kFail;
            }
            rows.push_back(wq);
        }
    }
    emit(a.output, cwt_grid_csv(rows));
    return kOk;
}

int cmd_exponent(const Args& a) {
    auto pt = parse_point(a.point);
    auto form = parse_form(a.form);
    if (!form.is_cusp && a.s <= form.weight) {
        std::cerr << "exponent: need s > k = " << form.weight
                  << " for a non-cusp form (series not certifiable)\n";
        return kUsage;
    }
    if (form.is_cusp && a.s <= form.weight / 2.0) {
        std::cerr << "exponent: need s > k/2 = " << form.weight / 2.0
                  << " for a cusp form (series divergent)\n";
        return kUsage;
    }
    auto prof = expand(pt, a.n_hi, expand_options());
    auto qc = infer_condition(prof, form.weight);
    auto rep = measure_exponent(form, a.s, pt, prof, a.n_lo,
                                std::min(a.n_hi, prof.depth), a.D, a.mu_window, qc);
    if (a.format == "csv")
        emit(a.output, scaling_table_csv(rep));
    else
        emit(a.output, report_to_json(rep) + "\n");
    return kOk;
}

int cmd_verify(const Args& a) {
    bool all_pass = true;
    auto line = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) all_pass = false;
    };
    if (a.suite == "lemmas") {
        PrecisionGuard guard(30);
        for (double s : {2.5, 5.0, 7.0}) {
            for (double xi : {0.5, 1.0, 2.0}) {
                CxD num = psi_hat_numeric(s, xi);
                CxR cf = psi_hat(Real(s), Real(xi));
                CxD cfd(static_cast<double>(cf.re), static_cast<double>(cf.im));
                double rel = abs(num - cfd) / abs(cfd);
                line("fourier-transform s=" + std::to_string(s) +
                         " xi=" + std::to_string(xi),
                     rel < 1e-6);
            }
            line("fourier-vanishing s=" + std::to_string(s),
                 abs(psi_hat_numeric(s, -1.0)) < 1e-8);
        }
        for (int m = 0; m <= 6; ++m)
            line("moment s=7 m=" + std::to_string(m), moment_residual(7, m) < 1e-6);
        for (int m = 0; m <= 2; ++m)
            line("moment s=2.5 m=" + std::to_string(m), moment_residual(2.5, m) < 1e-6);
        for (double s : {2.0, 7.0}) {
            double closed = static_cast<double>(admissibility(Real(s)));
            double num = admissibility_numeric(s);
            line("admissibility s=" + std::to_string(s),
                 std::abs(num - closed) / closed < 1e-6);
        }
        return all_pass ? kOk : kFail;
    }
    if (a.suite == "prop32") {
        auto pt = parse_point(a.point);
        auto form = parse_form(a.form);
        if (form.is_cusp) {
            std::cerr << "verify prop32: non-cusp forms only\n";
            return kUsage;
        }
        auto prof = expand(pt, a.n_hi, expand_options());
        auto up = verify_prop32_upper(form, a.s, pt, prof, a.n_lo,
                                      std::min(a.n_hi, prof.depth), a.D, 7);
        line("prop32-upper (last-third max " + std::to_string(up.last_third_max) +
                 " vs first-third max " + std::to_string(up.first_third_max) + ")",
             up.pass);
        auto lo = verify_prop32_lower(form, a.s, pt, prof, a.n_lo,
                                      std::min(a.n_hi, prof.depth), a.D);
        line("prop32-lower (last-half max " + std::to_string(lo.last_half_max) +
                 " vs first-half max " + std::to_string(lo.first_half_max) + ")",
             lo.pass);
        return all_pass ? kOk : kFail;
    }
    std::cerr << "verify: unknown suite '" << a.suite << "' (expected lemmas | prop32)\n";
    return kUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfwave: modular-form trigonometric series, closed-form wavelet "
                 "transforms, and pointwise Hoelder exponents"};
    app.require_subcommand(1);
    Args a;

    auto add_point = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("--point", a.point,
                                "point spec: sqrt:<d> | phi | e | sqrt2m1 | dec:<digits> | "
                                "<p>/<q> | cf:[a0;a1,...,(tail)] | liouville:<kappa>:<depth>");
        if (required) o->required();
    };
    auto add_form = [&](CLI::App* c) {
        c->add_option("--form", a.form, "form spec: eisenstein:<k> | delta | e2");
        c->add_option("--s", a.s, "series exponent s");
    };
    auto add_range = [&](CLI::App* c) {
        c->add_option("--n-lo", a.n_lo, "first convergent level");
        c->add_option("--n-hi", a.n_hi, "last convergent level");
        c->add_option("--D", a.D, "ring-scale multiplier (default 3)");
    };
    auto add_output = [&](CLI::App* c) {
        c->add_option("--output", a.output, "output file (default: stdout)");
    };

    auto* profile = app.add_subcommand("profile", "continued-fraction profile of a point");
    add_point(profile, true);
    profile->add_option("--depth", a.depth, "expansion depth");
    add_output(profile);

    auto* cwt = app.add_subcommand("cwt", "apex-grid wavelet-transform scaling table (CSV)");
    add_point(cwt, true);
    add_form(cwt);
    add_range(cwt);
    cwt->add_option("--flavor", a.flavor, "sine | cosine")
        ->check(CLI::IsMember({"sine", "cosine"}));
    cwt->add_flag("--check-quadrature", a.check_quadrature,
                  "cross-check rows at moderate scales against the quadrature oracle");
    add_output(cwt);

    auto* exponent = app.add_subcommand("exponent", "measured vs predicted Hoelder exponent");
    add_point(exponent, true);
    add_form(exponent);
    add_range(exponent);
    exponent->add_option("--mu-window", a.mu_window, "window for the mu/nu estimates");
    exponent->add_option("--format", a.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    add_output(exponent);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", a.suite, "lemmas | prop32")->required();
    add_point(verify, false);
    add_form(verify);
    add_range(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (profile->parsed()) return cmd_profile(a);
        if (cwt->parsed()) return cmd_cwt(a);
        if (exponent->parsed()) return cmd_exponent(a);
        if (verify->parsed()) return cmd_verify(a);
        return kUsage;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return kPrecision;
    } catch (const TailBoundFailure& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return kPrecision;
    } catch (const QuadratureBudgetExceeded& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return kPrecision;
    } catch (const InsufficientDepth& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return kDegenerate;
    } catch (const RingDegenerate& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return kDegenerate;
    } catch (const DegenerateFit& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return kDegenerate;
    } catch (const NonConvergent& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const NotCertifiable& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
}
