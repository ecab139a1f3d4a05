#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mdet/report.hpp"

using namespace mdet;

namespace {

AnalyzeConfig dist_config(std::string dist) {
    AnalyzeConfig c;
    c.dist = std::move(dist);
    c.n_max = 40;
    return c;
}

std::vector<std::pair<PhiFamily, std::pair<double, double>>> builtin_phis() {
    std::vector<std::pair<PhiFamily, std::pair<double, double>>> out;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double alpha : {0.0, 0.5, 1.0}) {
            out.push_back({PhiFamily::LogPow, {a, alpha}});
            if (alpha < 1.0) {
                out.push_back({PhiFamily::LogPowPlusLogLog, {a, alpha}});
                out.push_back({PhiFamily::LogPowTimesLogLog, {a, alpha}});
            }
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("report") {
    TEST_CASE("normal: the full-line theorem applies") {
        const DeterminacyReport r = analyze(dist_config("normal"));
        REQUIRE(r.theorem_verdicts.size() == 3);
        CHECK(r.theorem_verdicts[0].applies);
        CHECK(r.theorem_verdicts[0].conclusion == "X, X^2, |X| M-det");
        CHECK_FALSE(r.theorem_verdicts[1].applies);
        CHECK_FALSE(r.theorem_verdicts[2].applies);
        REQUIRE(r.carleman.size() == 1);
        CHECK(r.carleman[0].diagnosis == Diagnosis::Divergent);
        CHECK(render(r, ReportFormat::Text).find("Theorem 1: APPLIES") != std::string::npos);
    }

    TEST_CASE("lognormal: nothing is certified") {
        const DeterminacyReport r = analyze(dist_config("lognormal:0,1"));
        CHECK_FALSE(r.any_theorem_applies());
        CHECK(r.conclusion == "no sufficient condition certified");
        for (const auto& g : r.gammas) CHECK(g.verdict != Verdict::Satisfied);
        CHECK(r.gammas[1].verdict == Verdict::Failed);
        CHECK(r.carleman[0].diagnosis == Diagnosis::Convergent);
        for (const auto& v : r.theorem_verdicts) {
            CHECK(v.conclusion.find("indet") == std::string::npos);
            CHECK(v.reason.find("indet") == std::string::npos);
        }
    }

    TEST_CASE("exponential: the half-line theorems apply") {
        const DeterminacyReport r = analyze(dist_config("exponential"));
        CHECK(r.theorem_verdicts[2].applies);
        CHECK(r.theorem_verdicts[2].conclusion == "Y and Y^2 M-det on R+");
        CHECK(r.theorem_verdicts[1].applies);
    }

    TEST_CASE("JSON schema") {
        const DeterminacyReport r = analyze(dist_config("normal"));
        const auto j = nlohmann::json::parse(render(r, ReportFormat::Json));
        CHECK(j["schema"] == 1);
        for (const char* key : {"input_echo", "phi_certificate", "gammas", "moments", "carleman", "theorem_verdicts",
                                "proof_checks"}) {
            CHECK(j.contains(key));
        }
        CHECK(j["proof_checks"].is_null());
        CHECK(j["gammas"][0]["window_sups"].size() == 5);
        CHECK(j["moments"].size() == 41);
        CHECK(j["moments"][4]["n"] == 4);
        CHECK(j["theorem_verdicts"][0]["applies"] == true);

        const auto s = nlohmann::json::parse(render(analyze(dist_config("exponential")), ReportFormat::Json));
        CHECK(s["moments"][3]["log_mu_minus"].is_null());
    }

    TEST_CASE("reports are byte-deterministic") {
        for (const char* d : {"normal", "lognormal", "gamma:3,2"}) {
            const AnalyzeConfig c = dist_config(d);
            CHECK(render(analyze(c), ReportFormat::Json) == render(analyze(c), ReportFormat::Json));
            CHECK(render(analyze(c), ReportFormat::Text) == render(analyze(c), ReportFormat::Text));
        }
    }

    TEST_CASE("applicable theorems only for determinate fixtures") {
        for (const auto& [family, params] : builtin_phis()) {
            for (const auto& name : catalog_names()) {
                AnalyzeConfig c = dist_config(name);
                c.phi_family = family;
                c.a = params.first;
                c.alpha = params.second;
                c.n_max = 10;
                const DeterminacyReport r = analyze(c);
                if (r.any_theorem_applies()) {
                    CAPTURE(name);
                    CHECK(r.classification == Classification::MDet);
                }
            }
        }
    }

    TEST_CASE("easy fixtures get a theorem with a log shift") {
        for (const char* d : {"normal", "exponential", "half_normal", "gamma:0.5,1", "gamma:1,1", "gamma:2,1",
                              "gamma:3.5,1", "gamma:5,1"}) {
            CAPTURE(d);
            CHECK(analyze(dist_config(d)).any_theorem_applies());
        }
    }

    TEST_CASE("expression densities") {
        AnalyzeConfig c;
        c.density_expr = "exp(-x^2/2)";
        c.support = SupportKind::Hamburger;
        c.x0 = 1.0;
        const DeterminacyReport raw = analyze(c);
        CHECK(raw.theorem_verdicts[0].applies);
        CHECK_FALSE(raw.moments.has_value());
        CHECK(raw.carleman.empty());
        c.normalize = true;
        const DeterminacyReport norm = analyze(c);
        REQUIRE(norm.moments.has_value());
        CHECK(norm.carleman[0].diagnosis == Diagnosis::Divergent);

        AnalyzeConfig heavy;
        heavy.density_expr = "(1+x^2)^(-3)";
        heavy.support = SupportKind::Hamburger;
        heavy.normalize = true;
        const DeterminacyReport h = analyze(heavy);
        CHECK_FALSE(h.moments.has_value());
        CHECK(h.moments_note.find("does not exist") != std::string::npos);
        CHECK(h.gammas[0].verdict == Verdict::Failed);
    }

    TEST_CASE("errors name the module and stage") {
        AnalyzeConfig c = dist_config("cauchy");
        try {
            analyze(c);
            FAIL("expected an error");
        } catch (const StageError& e) {
            CHECK(e.module() == "density-model");
            CHECK(e.stage() == "catalog_density");
        }
        AnalyzeConfig p;
        p.density_expr = "exp(-x";
        p.support = SupportKind::Stieltjes;
        CHECK_THROWS_AS(analyze(p), StageError);
        AnalyzeConfig none;
        CHECK_THROWS_AS(analyze(none), InvalidArgument);
        AnalyzeConfig g = dist_config("exponential");
        g.gamma = GammaSelection::G1;
        try {
            analyze(g);
            FAIL("expected an error");
        } catch (const StageError& e) {
            CHECK(e.module() == "tail-ratio");
        }
    }

    TEST_CASE("proof verification and selftest") {
        const ProofReport e = verify_proofs(dist_config("exponential"));
        CHECK(e.all_passed());
        bool control = false;
        for (const auto& row : e.rows) {
            if (row.name.find("negative control (c_bar/100)") != std::string::npos) {
                control = row.status == CheckStatus::Pass;
            }
        }
        CHECK(control);
        CHECK(verify_proofs(dist_config("normal")).all_passed());
        CHECK(selftest().all_passed());
        const auto j = nlohmann::json::parse(render(selftest(), ReportFormat::Json));
        CHECK(j["all_passed"] == true);
        CHECK(j["schema"] == 1);
    }

    TEST_CASE("catalog listing") {
        const auto j = nlohmann::json::parse(render_catalog(ReportFormat::Json));
        CHECK(j["catalog"].size() == catalog_names().size());
        CHECK(render_catalog(ReportFormat::Text).find("lognormal") != std::string::npos);
    }
}
