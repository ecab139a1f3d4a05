#include "mdet/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "mdet/expr.hpp"
#include "mdet/proof_oracles.hpp"

namespace mdet {

using json = nlohmann::ordered_json;

std::string_view to_string(GammaSelection g) {
    switch (g) {
        case GammaSelection::Auto: return "auto";
        case GammaSelection::G1: return "g1";
        case GammaSelection::G2: return "g2";
        case GammaSelection::G3: return "g3";
    }
    return "auto";
}

GammaSelection parse_gamma_selection(std::string_view s) {
    if (s == "auto") return GammaSelection::Auto;
    if (s == "g1") return GammaSelection::G1;
    if (s == "g2") return GammaSelection::G2;
    if (s == "g3") return GammaSelection::G3;
    throw InvalidArgument("unknown gamma selection '" + std::string(s) + "' (expected auto, g1, g2 or g3)");
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Info: return "INFO";
    }
    return "INFO";
}

bool ProofReport::all_passed() const {
    return std::none_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.status == CheckStatus::Fail; });
}

bool DeterminacyReport::any_theorem_applies() const {
    return std::any_of(theorem_verdicts.begin(), theorem_verdicts.end(),
                       [](const TheoremVerdict& v) { return v.applies; });
}

double default_grid_end() {
    const char* env = std::getenv("MDET_GRID_END");
    if (env == nullptr || *env == '\0') return GridSpec{}.x_end;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 1.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string("MDET_GRID_END is not a number greater than 1: ") + env);
    }
    return v;
}

namespace {

// Shortest round-trip representation, so echoes and text output are stable.
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt6(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

template <class F>
auto stage(const char* module, const char* step, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(module, step, e.what());
    }
}

std::string support_flag(SupportKind k) { return k == SupportKind::Hamburger ? "R" : "R+"; }

std::string input_echo(const AnalyzeConfig& c) {
    std::ostringstream os;
    if (c.dist) os << "dist=" << *c.dist;
    if (c.density_expr) {
        os << "density_expr=\"" << *c.density_expr << "\" x0=" << fmt(c.x0)
           << " normalize=" << (c.normalize ? "true" : "false");
    }
    os << " support=" << (c.support ? support_flag(*c.support) : std::string("default"));
    os << " phi=" << to_string(c.phi_family) << " a=" << fmt(c.a) << " alpha=" << fmt(c.alpha);
    os << " nmax=" << c.n_max << " gamma=" << to_string(c.gamma);
    os << " grid_end=" << fmt(c.grid.x_end) << " windows=" << c.grid.windows << " margin=" << fmt(c.grid.margin);
    return os.str();
}

void validate(const AnalyzeConfig& c) {
    if (c.dist.has_value() == c.density_expr.has_value()) {
        throw InvalidArgument("give exactly one of --dist or --density-expr");
    }
    if (c.density_expr && !c.support) throw InvalidArgument("--density-expr needs --support R|R+");
    if (c.density_expr && !(c.x0 > 0.0)) throw InvalidArgument("--x0 must be positive");
    if (c.n_max < 2) throw InvalidArgument("--nmax must be at least 2");
}

const GammaEstimate* find_gamma(const std::vector<GammaEstimate>& gs, GammaKind k) {
    for (const auto& g : gs) {
        if (g.kind == k) return &g;
    }
    return nullptr;
}

TheoremVerdict decide(int theorem, SupportKind needed, GammaKind kind, const char* conclusion,
                      const DeterminacyReport& r) {
    TheoremVerdict v;
    v.theorem = theorem;
    const GammaEstimate* g = find_gamma(r.gammas, kind);
    if (r.support != needed) {
        v.reason = "support is " + std::string(to_string(r.support));
    } else if (!r.phi_certificate.valid) {
        v.reason = "phi certificate is not valid";
    } else if (g == nullptr) {
        v.reason = std::string(to_string(kind)) + " was not computed";
    } else if (g->verdict != Verdict::Satisfied) {
        v.reason = std::string(to_string(kind)) + " is " + std::string(to_string(g->verdict));
        if (g->side_condition_failed) v.reason += " (side condition failed)";
    } else {
        v.applies = true;
        v.conclusion = conclusion;
    }
    return v;
}

}  // namespace

ResolvedDensity resolve_density(const AnalyzeConfig& config) {
    validate(config);
    if (config.dist) {
        return stage("density-model", "catalog_density", [&] {
            auto [name, params] = parse_dist_arg(*config.dist);
            CatalogEntry e = catalog_density(name, params, config.support);
            TailDensity d = e.density;
            return ResolvedDensity{std::move(d), std::move(e)};
        });
    }
    return stage("density-expr", "parse and build", [&] {
        return ResolvedDensity{
            expr::make_expr_density(*config.density_expr, *config.support, config.x0, config.normalize),
            std::nullopt};
    });
}

PhiSpec resolve_phi(const AnalyzeConfig& config) {
    return stage("phi-machinery", "make_phi", [&] { return make_phi(config.phi_family, config.a, config.alpha); });
}

DeterminacyReport analyze(const AnalyzeConfig& config) {
    DeterminacyReport r;
    validate(config);
    r.input_echo = input_echo(config);
    r.grid = config.grid;

    ResolvedDensity rd = resolve_density(config);
    const TailDensity& d = rd.density;
    r.density_label = d.label();
    r.support = d.support();
    if (rd.entry) {
        r.classification = rd.entry->classification;
        r.classification_source = rd.entry->classification_source;
    }

    r.phi = resolve_phi(config);
    r.phi_certificate = stage("phi-machinery", "certify_conditions", [&] {
        return certify_conditions(r.phi, forward(r.phi, r.phi.x_min), config.grid.x_end);
    });

    GammaSelection sel = config.gamma;
    std::vector<GammaKind> kinds;
    if (sel == GammaSelection::Auto) {
        if (d.support() == SupportKind::Hamburger) {
            kinds = {GammaKind::G1};
        } else {
            kinds = {GammaKind::G2, GammaKind::G3};
        }
    } else {
        kinds = {sel == GammaSelection::G1 ? GammaKind::G1 : sel == GammaSelection::G2 ? GammaKind::G2 : GammaKind::G3};
    }
    for (GammaKind k : kinds) {
        r.gammas.push_back(stage("tail-ratio", k == GammaKind::G1 ? "gamma1" : k == GammaKind::G2 ? "gamma2" : "gamma3", [&] {
            switch (k) {
                case GammaKind::G1: return gamma1(d, r.phi, config.grid);
                case GammaKind::G2: return gamma2(d, r.phi, config.grid);
                case GammaKind::G3: break;
            }
            return gamma3(d, r.phi, config.grid);
        }));
    }

    if (!d.normalized()) {
        r.moments_note = "density is an unnormalized kernel; pass --normalize for moments and Carleman sums";
    } else {
        // A missing moment is a property of the density, reported rather than raised.
        r.moments = stage("moment-engine", "moment_table", [&] {
            try {
                LogMomentFn closed = rd.entry ? rd.entry->closed_form_log_moment : LogMomentFn{};
                return std::optional<MomentTable>(moment_table(d, config.n_max, closed));
            } catch (const MomentDivergence& e) {
                r.moments_note = e.what();
                return std::optional<MomentTable>();
            }
        });
    }
    if (r.moments) {
        r.carleman.push_back(stage("carleman-diagnostics", "carleman_terms",
                                   [&] { return carleman_terms(*r.moments, d.support()); }));
    }

    r.theorem_verdicts.push_back(decide(1, SupportKind::Hamburger, GammaKind::G1, "X, X^2, |X| M-det", r));
    r.theorem_verdicts.push_back(decide(2, SupportKind::Stieltjes, GammaKind::G2, "Y M-det on R+", r));
    r.theorem_verdicts.push_back(decide(3, SupportKind::Stieltjes, GammaKind::G3, "Y and Y^2 M-det on R+", r));

    std::ostringstream concl;
    for (const auto& v : r.theorem_verdicts) {
        if (!v.applies) continue;
        if (concl.tellp() > 0) concl << "; ";
        concl << "Theorem " << v.theorem << ": " << v.conclusion;
    }
    r.conclusion = concl.tellp() > 0 ? concl.str() : "no sufficient condition certified";
    return r;
}

namespace {

void add(ProofReport& p, std::string name, bool ok, std::string detail) {
    p.rows.push_back(CheckRow{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)});
}

void info(ProofReport& p, std::string name, std::string detail) {
    p.rows.push_back(CheckRow{std::move(name), CheckStatus::Info, std::move(detail)});
}

void lemma_grid_rows(ProofReport& p) {
    const Lemma1GridResult l1 = lemma1_grid_check();
    add(p, "lemma1 sup identity", l1.worst_rel_err <= 1e-10,
        std::to_string(l1.points) + " points, worst relative error " + fmt6(l1.worst_rel_err));
    add(p, "lemma1 sup <= 2 n log n", l1.bound_violations == 0,
        std::to_string(l1.bound_violations) + " violations where n >= 1/(eps e)");
    const Lemma2GridResult l2 = lemma2_grid_check();
    add(p, "lemma2 extremal bound", l2.worst_slack >= 0.0,
        std::to_string(l2.triples) + " triples, n <= 100, worst log-slack " + fmt6(l2.worst_slack));
    add(p, "lemma2 negative control (d0/10)", l2.control_failing > 0,
        std::to_string(l2.control_failing) + " of " + std::to_string(l2.triples) + " triples violate the shrunk bound");
}

}  // namespace

ProofReport verify_proofs(const AnalyzeConfig& config) {
    ProofReport p;
    validate(config);
    p.input_echo = input_echo(config);
    lemma_grid_rows(p);

    ResolvedDensity rd = resolve_density(config);
    const TailDensity& d = rd.density;
    if (!d.normalized()) {
        add(p, "density normalized", false, "proof checks need a normalized density (pass --normalize)");
        return p;
    }
    const PhiSpec phi = resolve_phi(config);
    const ConditionCertificate cert = stage("phi-machinery", "certify_conditions", [&] {
        return certify_conditions(phi, forward(phi, phi.x_min), config.grid.x_end);
    });
    add(p, "phi certificate", cert.valid,
        cert.valid ? "C+ = " + fmt6(cert.C_plus) + ", y* = " + fmt6(cert.y_star) : cert.diagnostic);
    if (!cert.valid) return p;

    const bool full_line = d.support() == SupportKind::Hamburger;
    const GammaEstimate g = stage("tail-ratio", full_line ? "gamma1" : "gamma3", [&] {
        return full_line ? gamma1(d, phi, config.grid) : gamma3(d, phi, config.grid);
    });
    const double gamma_plus = g.extrapolated_plus;
    const std::string gname = full_line ? "gamma_{1,+}" : "gamma3";
    add(p, gname + " below 1 - margin", g.verdict == Verdict::Satisfied,
        gname + " estimate " + fmt6(gamma_plus) + ", verdict " + std::string(to_string(g.verdict)));
    if (g.verdict != Verdict::Satisfied) return p;

    const double beta = 0.5 * (1.0 + gamma_plus);
    const auto x_hat0 = select_x_hat0(d, phi, beta, cert.y_star, config.grid);
    if (!x_hat0) {
        info(p, "x_hat0 selection", "no grid point with ratio <= beta from there on; integral checks skipped");
        return p;
    }
    const RecursionConstants rc = stage("proof-oracles", "recursion_constants",
                                        [&] { return recursion_constants(gamma_plus, cert, *x_hat0, phi); });
    add(p, "recursion constants", 1.0 - rc.beta - rc.C_plus * rc.eps > 0.0 && rc.n0 >= 2,
        "beta " + fmt6(rc.beta) + ", eps " + fmt6(rc.eps) + ", x_hat0 " + fmt6(rc.x_hat0) + ", y_hat0 " +
            fmt6(rc.y_hat0) + ", c_bar " + fmt6(rc.c_bar) + ", b_bar " + fmt6(rc.b_bar) + ", n0 " +
            std::to_string(rc.n0));

    if (rc.n0 > config.n_max) {
        info(p, "order range", "n0 = " + std::to_string(rc.n0) + " exceeds nmax; order-wise checks skipped");
        return p;
    }

    int lemma_fail = 0;
    const double y_plus = std::max(1.0, d.x0());
    stage("proof-oracles", "lemma1_integral_bound", [&] {
        for (int n = rc.n0; n <= config.n_max; ++n) {
            if (!lemma1_integral_bound(d, n, rc.eps, y_plus).holds) ++lemma_fail;
        }
        return 0;
    });
    add(p, "lemma1 integral inequality", lemma_fail == 0,
        "n in [" + std::to_string(rc.n0) + ", " + std::to_string(config.n_max) + "], eps " + fmt6(rc.eps) +
            ", y+ " + fmt6(y_plus) + ", " + std::to_string(lemma_fail) + " failures");

    int low_fail = 0, up_fail = 0, low_n = 0, up_n = 0;
    stage("proof-oracles", "proof_integral_bounds", [&] {
        for (int n = rc.n0; n <= config.n_max; ++n) {
            const ProofIntegralCheck c = proof_integral_bounds(d, phi, rc, n);
            if (!c.lower_holds && low_fail++ == 0) low_n = n;
            if (!c.upper_holds && up_fail++ == 0) up_n = n;
        }
        return 0;
    });
    const std::string range = "n in [" + std::to_string(rc.n0) + ", " + std::to_string(config.n_max) + "]";
    add(p, "integral lower bound (1-beta) mu_n^+ - x_hat0^n <= I", low_fail == 0,
        range + (low_fail ? ", first failure at n = " + std::to_string(low_n) : ""));
    add(p, "integral upper bound I <= 3C+ n log n mu_{n-1}^+ + C+ eps mu_n^+ + y_hat0^n", up_fail == 0,
        range + (up_fail ? ", first failure at n = " + std::to_string(up_n) : ""));

    const MomentTable table = stage("moment-engine", "moment_table", [&] {
        return moment_table(d, config.n_max, rd.entry ? rd.entry->closed_form_log_moment : LogMomentFn{});
    });
    const RecursionCheck rec = empirical_recursion_check(table, rc, rc.n0, config.n_max);
    add(p, "moment recursion mu_n^+ <= c_bar n log n mu_{n-1}^+ + b_bar^n", rec.holds,
        range + ", worst log-slack " + fmt6(rec.worst_slack) + " at n = " + std::to_string(rec.worst_n));
    RecursionConstants shrunk = rc;
    shrunk.c_bar /= 100.0;
    const RecursionCheck ctl = empirical_recursion_check(table, shrunk, rc.n0, config.n_max);
    if (!ctl.holds) {
        add(p, "recursion negative control (c_bar/100)", true,
            "violated as expected at n = " + std::to_string(ctl.worst_n) + ", log-slack " + fmt6(ctl.worst_slack));
    } else {
        info(p, "recursion negative control (c_bar/100)",
             "not violated on " + range + ": the b_bar^n term alone dominates mu_n^+ there (worst log-slack " +
                 fmt6(ctl.worst_slack) + ")");
    }

    if (!full_line) {
        const MomentIdentityCheck mi = stage("proof-oracles", "check_moment_identity",
                                             [&] { return check_moment_identity(d, config.n_max); });
        add(p, "symmetrization E[X^2n] = E[Y^n]", mi.max_rel_err <= 1e-6 && mi.odd_moments_vanish,
            "n <= " + std::to_string(config.n_max) + ", max relative error " + fmt6(mi.max_rel_err) +
                (mi.odd_moments_vanish ? "" : ", odd moments do not cancel"));
    }
    return p;
}

ProofReport selftest() {
    ProofReport p;
    p.input_echo = "selftest";
    lemma_grid_rows(p);

    const Lemma1Sup s = lemma1_sup(2, 0.5);
    add(p, "lemma1 sup n=2 eps=0.5", std::fabs(s.numeric_max - (4.0 * std::numbers::ln2 - 2.0)) <= 1e-10,
        "numeric " + fmt(s.numeric_max));

    {
        ConditionCertificate cert;
        cert.valid = true;
        cert.C_plus = 1.0;
        cert.y_star = 1.0;
        const PhiSpec phi = make_phi(PhiFamily::LogPow, 1.0, 1.0);
        const RecursionConstants rc = recursion_constants(0.0, cert, 1.0, phi);
        const double eps = 1.0 / (4.0 * std::numbers::e);
        const double c_bar = 3.0 / (0.5 - eps);
        add(p, "recursion constants arithmetic",
            rc.beta == 0.5 && std::fabs(rc.eps - eps) <= 1e-15 && std::fabs(rc.c_bar - c_bar) <= 1e-13,
            "eps " + fmt(rc.eps) + ", c_bar " + fmt(rc.c_bar));
    }

    {
        const DivergenceBoundSums sums = bound_implies_divergence(1.0, 1.0, 1000000);
        const double g13 = sums.abs_moment_series.back() - sums.abs_moment_series[1000 - 2];
        const double g14 = sums.even_moment_series.back() - sums.even_moment_series[1000 - 1];
        add(p, "divergence series growth (|X| series)", g13 > 10.0,
            "partial sum gain from N=1e3 to N=1e6: " + fmt6(g13));
        add(p, "divergence series growth (X series)", g14 > 0.25,
            "partial sum gain from N=1e3 to N=1e6: " + fmt6(g14));
    }

    {
        const double one = 1.0;
        const TailDensity f = symmetrize(catalog_density("chi_squared", std::span<const double>(&one, 1)).density);
        const TailDensity n = catalog_density("normal", {}).density;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = -20.0 + 40.0 * (i + 0.5) / 1000.0;
            const double a = f.log_density(x);
            const double b = n.log_density(x);
            worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(b)));
        }
        add(p, "symmetrize(chi_squared(1)) = normal", worst <= 1e-12, "worst relative log difference " + fmt6(worst));
    }

    {
        const MomentIdentityCheck mi = check_moment_identity(catalog_density("exponential", {}).density, 15);
        add(p, "symmetrization moment identity (exponential, n <= 15)", mi.max_rel_err <= 1e-6 && mi.odd_moments_vanish,
            "max relative error " + fmt6(mi.max_rel_err));
    }

    {
        const LogInequality e = lemma1_integral_bound(catalog_density("exponential", {}).density, 5, 0.2, 1.0);
        add(p, "lemma1 integral inequality (exponential, n=5)", e.holds,
            "log lhs " + fmt6(e.log_lhs) + ", log rhs " + fmt6(e.log_rhs));
        const LogInequality n = lemma1_integral_bound(catalog_density("normal", {}).density, 4, 0.25, 1.0);
        add(p, "lemma1 integral inequality (normal, n=4)", n.holds,
            "log lhs " + fmt6(n.log_lhs) + ", log rhs " + fmt6(n.log_rhs));
    }
    return p;
}

namespace {

json certificate_json(const ConditionCertificate& c) {
    json j;
    j["valid"] = c.valid;
    j["C_plus"] = num(c.C_plus);
    j["y_star"] = num(c.y_star);
    j["grid_min"] = num(c.grid_min);
    j["grid_max"] = num(c.grid_max);
    j["grid_points"] = c.grid_points;
    j["margins"] = json{{"a", num(c.margin_a)}, {"b", num(c.margin_b)}, {"c", num(c.margin_c)}};
    j["sup_b"] = num(c.sup_b);
    j["sup_c"] = num(c.sup_c);
    if (c.failed) {
        j["failed_condition"] = *c.failed == PhiCondition::A ? "a" : *c.failed == PhiCondition::B ? "b" : "c";
    } else {
        j["failed_condition"] = nullptr;
    }
    j["diagnostic"] = c.diagnostic;
    return j;
}

json gamma_json(const GammaEstimate& g) {
    json j;
    j["kind"] = to_string(g.kind);
    j["verdict"] = to_string(g.verdict);
    j["extrapolated"] = num(g.extrapolated);
    j["extrapolated_plus"] = num(g.extrapolated_plus);
    j["extrapolated_minus"] = g.kind == GammaKind::G1 ? num(g.extrapolated_minus) : json(nullptr);
    j["margin"] = num(g.margin);
    j["side_condition_failed"] = g.side_condition_failed;
    j["note"] = g.note;
    json ws = json::array();
    for (const auto& w : g.windows) {
        json row;
        row["window_start"] = num(w.start);
        row["window_end"] = num(w.end);
        row["sup_ratio"] = num(w.sup_ratio);
        row["sup_plus"] = num(w.sup_plus);
        row["sup_minus"] = g.kind == GammaKind::G1 ? num(w.sup_minus) : json(nullptr);
        ws.push_back(row);
    }
    j["window_sups"] = ws;
    return j;
}

json carleman_json(const CarlemanDiagnosis& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["terms"] = num_array(c.terms);
    j["partial_sums"] = num_array(c.partial_sums);
    j["growth_exponent"] = num(c.growth_exponent);
    j["fit_from"] = c.fit_from;
    j["fit_to"] = c.fit_to;
    j["diagnosis"] = to_string(c.diagnosis);
    j["note"] = c.note;
    return j;
}

json proof_json(const ProofReport& p) {
    json rows = json::array();
    for (const auto& r : p.rows) {
        rows.push_back(json{{"name", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}});
    }
    return json{{"checks", rows}, {"all_passed", p.all_passed()}};
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

}  // namespace

std::string render(const DeterminacyReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json j;
        j["schema"] = kReportSchemaVersion;
        j["input_echo"] = r.input_echo;
        json dj;
        dj["label"] = r.density_label;
        dj["support"] = to_string(r.support);
        dj["classification"] = r.classification ? json(to_string(*r.classification)) : json(nullptr);
        dj["classification_source"] = r.classification_source;
        j["density"] = dj;
        j["phi"] = json{{"family", to_string(r.phi.family)}, {"a", num(r.phi.a)},
                        {"alpha", num(r.phi.alpha)}, {"x_min", num(r.phi.x_min)}, {"label", r.phi.label}};
        j["phi_certificate"] = certificate_json(r.phi_certificate);
        j["grid"] = json{{"x_start", num(r.grid.x_start())}, {"x_end", num(r.grid.x_end)},
                         {"windows", r.grid.windows}, {"points_per_window", r.grid.points_per_window},
                         {"margin", num(r.grid.margin)}};
        json gs = json::array();
        for (const auto& g : r.gammas) gs.push_back(gamma_json(g));
        j["gammas"] = gs;
        if (r.moments) {
            json rows = json::array();
            for (int n = 0; n <= r.moments->n_max; ++n) {
                rows.push_back(json{{"n", n},
                                    {"log_mu_plus", num(r.moments->log_mu_plus[n])},
                                    {"log_mu_minus", num(r.moments->log_mu_minus[n])},
                                    {"log_mu", num(r.moments->log_mu[n])}});
            }
            j["moments"] = rows;
        } else {
            j["moments"] = nullptr;
        }
        j["moments_note"] = r.moments_note;
        json cs = json::array();
        for (const auto& c : r.carleman) cs.push_back(carleman_json(c));
        j["carleman"] = cs;
        json vs = json::array();
        for (const auto& v : r.theorem_verdicts) {
            vs.push_back(json{{"theorem_id", v.theorem},
                              {"applies", v.applies},
                              {"conclusion", v.applies ? json(v.conclusion) : json(nullptr)},
                              {"reason", v.reason}});
        }
        j["theorem_verdicts"] = vs;
        j["conclusion"] = r.conclusion;
        j["proof_checks"] = r.proof_checks ? proof_json(*r.proof_checks) : json(nullptr);
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    os << "mdet analyze report\n";
    os << "input: " << r.input_echo << "\n";
    os << "density: " << r.density_label << " on " << to_string(r.support);
    if (r.classification) {
        os << " (literature: " << to_string(*r.classification);
        if (!r.classification_source.empty()) os << ", " << r.classification_source;
        os << ")";
    }
    os << "\n";
    os << "phi: " << r.phi.label << ", x_min " << fmt6(r.phi.x_min) << "\n";

    const ConditionCertificate& c = r.phi_certificate;
    os << "\nphi certificate on y in [" << fmt6(c.grid_min) << ", " << fmt6(c.grid_max) << "] (" << c.grid_points
       << " points, finite-range check): " << (c.valid ? "VALID" : "NOT VALID") << "\n";
    if (c.valid) {
        os << "  C+ = " << fmt6(c.C_plus) << ", y* = " << fmt6(c.y_star) << ", sup varphi/log y = " << fmt6(c.sup_b)
           << ", sup y varphi' = " << fmt6(c.sup_c) << "\n";
        os << "  margins: (a) " << fmt6(c.margin_a) << ", (b) " << fmt6(c.margin_b) << ", (c) " << fmt6(c.margin_c)
           << "\n";
    } else {
        os << "  " << c.diagnostic << "\n";
    }

    for (const auto& g : r.gammas) {
        os << "\n" << to_string(g.kind) << ": " << to_string(g.verdict) << ", windowed sup " << fmt6(g.extrapolated)
           << " (margin " << fmt6(g.margin) << ")";
        if (g.kind == GammaKind::G1) {
            os << ", right tail " << fmt6(g.extrapolated_plus) << ", left tail " << fmt6(g.extrapolated_minus);
        }
        os << "\n";
        if (!g.note.empty()) os << "  note: " << g.note << "\n";
        os << "  " << pad("window start", 14) << pad("window end", 14) << "sup ratio\n";
        for (const auto& w : g.windows) {
            os << "  " << pad(fmt6(w.start), 14) << pad(fmt6(w.end), 14) << fmt6(w.sup_ratio) << "\n";
        }
    }

    os << "\nmoments: ";
    if (r.moments) {
        const MomentTable& t = *r.moments;
        os << "orders 0.." << t.n_max << (t.closed_form ? " (closed form, cross-checked by quadrature)" : " (quadrature)")
           << "\n";
        for (int n : {1, 2, t.n_max / 2, t.n_max}) {
            os << "  log mu_" << n << " = " << fmt6(t.log_mu[n]) << "\n";
        }
    } else {
        os << "skipped: " << r.moments_note << "\n";
    }

    for (const auto& cd : r.carleman) {
        os << "\ncarleman (" << to_string(cd.kind) << "): " << to_string(cd.diagnosis) << ", fitted exponent "
           << fmt6(cd.growth_exponent) << " over orders " << cd.fit_from << ".." << cd.fit_to;
        if (!cd.partial_sums.empty()) os << ", partial sum " << fmt6(cd.partial_sums.back());
        os << "\n  " << cd.note << "\n";
    }

    os << "\n";
    for (const auto& v : r.theorem_verdicts) {
        os << "Theorem " << v.theorem << ": ";
        if (v.applies) {
            os << "APPLIES, " << v.conclusion << "\n";
        } else {
            os << "does not apply (" << v.reason << ")\n";
        }
    }
    os << "conclusion: " << r.conclusion << "\n";
    if (r.proof_checks) os << "\n" << render(*r.proof_checks, ReportFormat::Text);
    return os.str();
}

std::string render(const ProofReport& p, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json j;
        j["schema"] = kReportSchemaVersion;
        j["input_echo"] = p.input_echo;
        const json body = proof_json(p);
        j["checks"] = body["checks"];
        j["all_passed"] = body["all_passed"];
        return j.dump(2) + "\n";
    }
    std::size_t w = 0;
    for (const auto& r : p.rows) w = std::max(w, r.name.size());
    std::ostringstream os;
    os << "proof checks: " << p.input_echo << "\n";
    for (const auto& r : p.rows) {
        os << pad(std::string(to_string(r.status)), 6) << pad(r.name, w + 2) << r.detail << "\n";
    }
    os << (p.all_passed() ? "all checks passed\n" : "some checks FAILED\n");
    return os.str();
}

std::string render_catalog(ReportFormat format) {
    json arr = json::array();
    std::ostringstream os;
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = catalog_density(name, {});
        std::string params;
        for (std::size_t i = 0; i < e.params.size(); ++i) params += (i ? "," : "") + fmt(e.params[i]);
        arr.push_back(json{{"name", name},
                           {"default_params", num_array(e.params)},
                           {"support", to_string(e.density.support())},
                           {"classification", to_string(e.classification)},
                           {"classification_source", e.classification_source},
                           {"closed_form_moments", static_cast<bool>(e.closed_form_log_moment)}});
        os << pad(name + ":" + params, 26) << pad(std::string(to_string(e.density.support())), 11)
           << pad(std::string(to_string(e.classification)), 8) << e.classification_source << "\n";
    }
    if (format == ReportFormat::Json) {
        json j;
        j["schema"] = kReportSchemaVersion;
        j["catalog"] = arr;
        return j.dump(2) + "\n";
    }
    return os.str();
}

}  // namespace mdet
