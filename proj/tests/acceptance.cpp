// Acceptance criteria: one PASS/FAIL line per criterion, with wall time
// against its budget. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "mdet/carleman.hpp"
#include "mdet/density.hpp"
#include "mdet/errors.hpp"
#include "mdet/expr.hpp"
#include "mdet/moments.hpp"
#include "mdet/phi.hpp"
#include "mdet/proof_oracles.hpp"
#include "mdet/report.hpp"
#include "mdet/tail_ratio.hpp"

using namespace mdet;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel(double log_a, double log_b) { return std::fabs(std::expm1(log_a - log_b)); }

Outcome lemma1_identity() {
    Outcome o;
    const Lemma1GridResult r = lemma1_grid_check(20, 20);
    o.require(r.points == 400, "grid has " + std::to_string(r.points) + " points");
    o.require(r.worst_rel_err <= 1e-10, "worst relative error " + num(r.worst_rel_err));
    o.require(r.bound_violations == 0, std::to_string(r.bound_violations) + " bound violations");
    if (o.ok) o.detail = "400 points, worst relative error " + num(r.worst_rel_err);
    return o;
}

Outcome lemma2_bound() {
    Outcome o;
    const Lemma2GridResult r = lemma2_grid_check(100);
    o.require(r.worst_slack >= 0.0, "worst log-slack " + num(r.worst_slack));
    o.require(r.control_failing > 0, "d0/10 control never fails");
    if (o.ok) {
        o.detail = "27 triples, worst log-slack " + num(r.worst_slack) + ", d0/10 control fails for " +
                   std::to_string(r.control_failing) + " triples";
    }
    return o;
}

Outcome gamma_fixtures() {
    Outcome o;
    const PhiSpec log_shift = make_phi(PhiFamily::LogPow, 1, 1);
    const GammaEstimate n = gamma1(catalog_density("normal", {}).density, log_shift);
    o.require(n.verdict == Verdict::Satisfied && n.extrapolated <= 1e-6, "normal g1 " + num(n.extrapolated));

    const GammaEstimate e = gamma3(catalog_density("exponential", {}).density, log_shift);
    o.require(e.verdict == Verdict::Satisfied, "exponential g3 not satisfied");
    for (const auto& w : e.windows) {
        // 1/x is decreasing, so the window sup sits at the left end of each window.
        o.require(std::fabs(w.sup_ratio * w.start - 1.0) <= 1e-9, "exponential window at " + num(w.start));
    }

    const TailDensity ln = catalog_density("lognormal", {}).density;
    const TailDensity ln_sym = catalog_density("lognormal", {}, SupportKind::Hamburger).density;
    int checked = 0;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double alpha : {0.0, 0.5, 1.0}) {
            std::vector<PhiSpec> phis{make_phi(PhiFamily::LogPow, a, alpha)};
            if (alpha < 1.0) {
                phis.push_back(make_phi(PhiFamily::LogPowPlusLogLog, a, alpha));
                phis.push_back(make_phi(PhiFamily::LogPowTimesLogLog, a, alpha));
            }
            for (const auto& phi : phis) {
                o.require(gamma2(ln, phi).verdict != Verdict::Satisfied, "lognormal g2 satisfied for " + phi.label);
                o.require(gamma3(ln, phi).verdict != Verdict::Satisfied, "lognormal g3 satisfied for " + phi.label);
                o.require(gamma1(ln_sym, phi).verdict != Verdict::Satisfied, "lognormal g1 satisfied for " + phi.label);
                ++checked;
            }
        }
    }
    if (o.ok) {
        o.detail = "normal g1 sup " + num(n.extrapolated) + ", exponential g3 windows = 1/x, lognormal unsatisfied for " +
                   std::to_string(checked) + " phi choices";
    }
    return o;
}

Outcome carleman_corroboration() {
    Outcome o;
    auto table = [](const char* name) {
        const CatalogEntry e = catalog_density(name, {});
        return moment_table(e.density, 40, e.closed_form_log_moment);
    };
    const CarlemanDiagnosis n = carleman_terms(table("normal"), SupportKind::Hamburger);
    const CarlemanDiagnosis e = carleman_terms(table("exponential"), SupportKind::Stieltjes);
    const CarlemanDiagnosis l = carleman_terms(table("lognormal"), SupportKind::Stieltjes);
    o.require(n.diagnosis == Diagnosis::Divergent && std::fabs(n.growth_exponent - 0.5) <= 0.1,
              "normal p = " + num(n.growth_exponent));
    o.require(e.diagnosis == Diagnosis::Divergent && std::fabs(e.growth_exponent - 0.5) <= 0.1,
              "exponential p = " + num(e.growth_exponent));
    o.require(l.diagnosis == Diagnosis::Convergent, "lognormal not convergent");
    double worst = 0.0;
    for (std::size_t i = 0; i < l.terms.size(); ++i) {
        worst = std::max(worst, std::fabs(l.terms[i] / std::exp(-(i + 1.0) / 4.0) - 1.0));
    }
    o.require(worst <= 1e-9, "lognormal terms off by " + num(worst));
    if (o.ok) {
        o.detail = "p(normal) " + num(n.growth_exponent) + ", p(exponential) " + num(e.growth_exponent) +
                   ", lognormal terms within " + num(worst);
    }
    return o;
}

Outcome moment_accuracy() {
    Outcome o;
    const TailDensity n = catalog_density("normal", {}).density;
    const TailDensity x = catalog_density("exponential", {}).density;
    const TailDensity l = catalog_density("lognormal", {}).density;
    const double shapes[] = {0.5, 2.0, 4.5};
    double worst = 0.0;
    double log_dfact = 0.0;  // log (k-1)!! for even k
    for (int k = 0; k <= 30; ++k) {
        if (k % 2 == 0) {
            if (k >= 2) log_dfact += std::log(k - 1.0);
            worst = std::max(worst, rel(log_add(log_abs_moment(n, k, Side::Plus), log_abs_moment(n, k, Side::Minus)),
                                        log_dfact));
        }
        worst = std::max(worst, rel(log_abs_moment(x, k, Side::Plus), std::lgamma(k + 1.0)));
        worst = std::max(worst, rel(log_abs_moment(l, k, Side::Plus), 0.5 * k * k));
        for (double s : shapes) {
            const double p[] = {s, 1.0};
            const TailDensity g = catalog_density("gamma", p).density;
            worst = std::max(worst, rel(log_abs_moment(g, k, Side::Plus), std::lgamma(s + k) - std::lgamma(s)));
        }
    }
    o.require(worst <= 1e-6, "worst relative error " + num(worst));
    if (o.ok) o.detail = "n <= 30, worst relative error " + num(worst);
    return o;
}

Outcome symmetrization() {
    Outcome o;
    const double one = 1.0;
    const TailDensity f = symmetrize(catalog_density("chi_squared", std::span<const double>(&one, 1)).density);
    const TailDensity n = catalog_density("normal", {}).density;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -30.0 + 60.0 * (i + 0.5) / 1000.0;
        worst = std::max(worst, std::fabs(f.log_density(x) - n.log_density(x)) / std::max(1.0, std::fabs(n.log_density(x))));
    }
    o.require(worst <= 1e-12, "log-density mismatch " + num(worst));
    const MomentIdentityCheck m = check_moment_identity(catalog_density("exponential", {}).density, 15);
    o.require(m.max_rel_err <= 1e-6, "moment identity error " + num(m.max_rel_err));
    o.require(m.odd_moments_vanish, "odd moments do not cancel");
    if (o.ok) o.detail = "density mismatch " + num(worst) + ", moment identity error " + num(m.max_rel_err);
    return o;
}

Outcome proof_chain() {
    Outcome o;
    const PhiSpec phi = make_phi(PhiFamily::LogPow, 1, 1);
    const ConditionCertificate cert = certify_conditions(phi, forward(phi, phi.x_min), 1e8);
    o.require(cert.valid, "certificate invalid");
    if (!cert.valid) return o;
    int controls_triggered = 0;
    std::string notes;
    for (const char* name : {"normal", "exponential"}) {
        const CatalogEntry e = catalog_density(name, {});
        const TailDensity& d = e.density;
        const double gp = d.support() == SupportKind::Hamburger ? gamma1(d, phi).extrapolated_plus
                                                               : gamma3(d, phi).extrapolated_plus;
        const auto x_hat0 = select_x_hat0(d, phi, 0.5 * (1.0 + gp), cert.y_star);
        o.require(x_hat0.has_value(), std::string(name) + ": no x_hat0");
        if (!x_hat0) continue;
        const RecursionConstants rc = recursion_constants(gp, cert, *x_hat0, phi);
        for (int n = rc.n0; n <= 40; ++n) {
            const ProofIntegralCheck p = proof_integral_bounds(d, phi, rc, n);
            o.require(p.lower_holds, std::string(name) + ": lower bound fails at n = " + std::to_string(n));
            o.require(p.upper_holds, std::string(name) + ": upper bound fails at n = " + std::to_string(n));
        }
        const MomentTable t = moment_table(d, 40, e.closed_form_log_moment);
        const RecursionCheck r = empirical_recursion_check(t, rc, rc.n0, 40);
        o.require(r.holds, std::string(name) + ": recursion slack " + num(r.worst_slack));
        RecursionConstants shrunk = rc;
        shrunk.c_bar /= 100.0;
        const RecursionCheck ctl = empirical_recursion_check(t, shrunk, rc.n0, 40);
        if (!ctl.holds) {
            ++controls_triggered;
            notes += std::string(", ") + name + " control violated at n = " + std::to_string(ctl.worst_n);
        } else {
            notes += std::string(", ") + name + " control not violable (b_bar^n dominates)";
        }
    }
    o.require(controls_triggered > 0, "c_bar/100 control never violated");
    if (o.ok) o.detail = "bounds and recursion hold on [n0, 40]" + notes;
    return o;
}

Outcome parser() {
    Outcome o;
    const std::vector<std::string> corpus = {
        "x", "2", "0.5", "1e-3", "2.5E+2", "x+1", "x-1-2", "x*2/3", "2+3*4^2", "-x",
        "--x", "-x^2", "(-x)^2", "x^-2", "x^2^3", "(x^2)^3", "exp(-x^2/2)", "exp(-(log(x))^2/2)/x",
        "1/x * exp(-(log(x))^2/2)", "exp(-x)", "x*exp(-x)", "x^3*exp(-x)/6", "exp(-abs(x))",
        "abs(x)^0.5*exp(-abs(x)^0.5)", "(1+x^2)^(-3)", "1/(1+x^2)^3", "exp(-x^2/2)/(2*3.141592653589793)^0.5",
        "log(x)", "log(log(x))", "exp(log(x))", "log(exp(x))", "exp(-x^1.5)", "x^0.5*exp(-x/2)", "exp(-x^2)*x",
        "exp(-(x-1)^2/2)", "exp(-(x+1)^2/8)/2", "abs(x-3)+1", "abs(-x)", "(x)", "((x))", "x/(x+1)", "x-(x-1)",
        "2*x-3*x^2+4*x^3", "exp(-x)*exp(-x)", "exp(-x)/exp(x)", "exp(-x^2/2)*x^4", "exp(-log(x)^2)",
        "1e2*exp(-1e-2*x)", "x^(1/2)", "exp(-x^(0.25))*x^-0.75/4"};
    o.require(corpus.size() == 50, "corpus size");
    int round_trips = 0;
    double worst = 0.0;
    for (const auto& src : corpus) {
        const expr::Expr e = expr::parse(src);
        if (expr::equal(e, expr::parse(expr::print(e)))) ++round_trips;
        for (int i = 0; i <= 40; ++i) {
            const double x = 1.0 + 29.0 * i / 40.0;
            double plain = 0.0;
            try {
                plain = expr::eval_plain(e, x);
            } catch (const DomainError&) {
                continue;
            }
            if (!(plain >= 1e-300) || !std::isfinite(plain)) continue;
            const double lp = std::log(plain);
            worst = std::max(worst, std::fabs(expr::eval_log(e, x) - lp) / std::max(1.0, std::fabs(lp)));
        }
    }
    o.require(round_trips == 50, std::to_string(round_trips) + " of 50 round-trip");
    o.require(worst <= 1e-12, "log-space mismatch " + num(worst));
    o.require(expr::eval_log(expr::parse("exp(-x^2/2)"), 40.0) == -800.0, "gaussian kernel at 40 is not -800");
    o.require(expr::eval_plain(expr::parse("2+3*4^2"), 0.0) == 50.0, "precedence");
    if (o.ok) o.detail = "50/50 round-trip, worst log mismatch " + num(worst) + ", kernel at 40 = -800";
    return o;
}

Outcome determinism_soundness() {
    Outcome o;
    for (const char* d : {"normal", "lognormal", "exponential"}) {
        AnalyzeConfig c;
        c.dist = d;
        o.require(render(analyze(c), ReportFormat::Json) == render(analyze(c), ReportFormat::Json),
                  std::string(d) + " JSON differs between runs");
    }
    int runs = 0;
    for (const auto& name : catalog_names()) {
        for (PhiFamily f : {PhiFamily::LogPow, PhiFamily::LogPowPlusLogLog, PhiFamily::LogPowTimesLogLog}) {
            for (double a : {0.5, 1.0, 2.0}) {
                for (double alpha : {0.0, 0.5, 1.0}) {
                    if (f != PhiFamily::LogPow && alpha == 1.0) continue;
                    AnalyzeConfig c;
                    c.dist = name;
                    c.phi_family = f;
                    c.a = a;
                    c.alpha = alpha;
                    c.n_max = 10;
                    const DeterminacyReport r = analyze(c);
                    ++runs;
                    if (r.classification == Classification::MIndet) {
                        o.require(!r.any_theorem_applies(), name + " certified with " + r.phi.label);
                    }
                }
            }
        }
    }
    if (o.ok) o.detail = "byte-identical JSON; " + std::to_string(runs) + " analyses, no indeterminate fixture certified";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "lemma 1 supremum identity", 5, lemma1_identity},
        {2, "lemma 2 extremal bound", 5, lemma2_bound},
        {3, "tail-ratio verdicts on fixtures", 30, gamma_fixtures},
        {4, "Carleman corroboration", 10, carleman_corroboration},
        {5, "moment engine accuracy", 60, moment_accuracy},
        {6, "symmetrization identities", 30, symmetrization},
        {7, "proof-chain verification", 120, proof_chain},
        {8, "expression parser", 2, parser},
        {9, "determinism and soundness", 60, determinism_soundness},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) o.require(false, "runtime " + num(secs) + " s over budget");
        if (!o.ok) ++failures;
        std::printf("%s criterion %d (%s) [%.2f s / %.0f s]: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.budget_s, o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
