#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "mdet/density.hpp"
#include "mdet/errors.hpp"
#include "mdet/log_math.hpp"
#include "mdet/moments.hpp"
#include "mdet/phi.hpp"
#include "mdet/proof_oracles.hpp"
#include "mdet/tail_ratio.hpp"

using namespace mdet;

namespace {

CatalogEntry entry(const char* name, std::vector<double> params = {}) { return catalog_density(name, params); }

struct Chain {
    PhiSpec phi;
    ConditionCertificate cert;
    RecursionConstants rc;
};

Chain chain_for(const TailDensity& d) {
    Chain c{make_phi(PhiFamily::LogPow, 1, 1), {}, {}};
    c.cert = certify_conditions(c.phi, forward(c.phi, c.phi.x_min), 1e8);
    const double gp = d.support() == SupportKind::Hamburger ? gamma1(d, c.phi).extrapolated_plus
                                                           : gamma3(d, c.phi).extrapolated_plus;
    const auto x_hat0 = select_x_hat0(d, c.phi, 0.5 * (1 + gp), c.cert.y_star);
    REQUIRE(x_hat0.has_value());
    c.rc = recursion_constants(gp, c.cert, *x_hat0, c.phi);
    return c;
}

}  // namespace

TEST_SUITE("proof_oracles") {
    TEST_CASE("lemma1 sup examples") {
        const Lemma1Sup a = lemma1_sup(1, 1.0);
        CHECK(a.maximizer == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(a.numeric_max == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(lemma1_sup(2, 0.5).numeric_max == doctest::Approx(0.77258872223978124).epsilon(1e-12));
        const Lemma1Sup c = lemma1_sup(10, 0.1);
        CHECK(c.numeric_max == doctest::Approx(36.051701859880914).epsilon(1e-12));
        CHECK(c.bound_applies);
        CHECK(c.bound_holds);
        CHECK(2 * 10 * std::log(10.0) == doctest::Approx(46.051701859880914));
        CHECK_THROWS_AS(lemma1_sup(0, 1.0), InvalidArgument);
    }

    TEST_CASE("lemma1 sup identity on the full grid") {
        const Lemma1GridResult r = lemma1_grid_check();
        CHECK(r.points == 400);
        CHECK(r.worst_rel_err <= 1e-10);
        CHECK(r.bound_violations == 0);
    }

    TEST_CASE("lemma1 integral inequality") {
        CHECK(lemma1_integral_bound(entry("exponential").density, 5, 0.2, 1.0).holds);
        CHECK(lemma1_integral_bound(entry("normal").density, 4, 0.25, 1.0).holds);
        CHECK(lemma1_integral_bound(entry("gamma").density, 12, 0.05, 2.0).holds);
        CHECK_THROWS_AS(lemma1_integral_bound(entry("exponential").density, 1, 0.2, 1.0), InvalidArgument);
    }

    TEST_CASE("lemma2 examples") {
        const double log_d0 = lemma2_log_d0(1, 1, 1);
        CHECK(std::exp(log_d0) == doctest::Approx(1.0 + std::numbers::e));
        // a_2 = 2 log 2 + 1, bound (1 + e)(2 log 2)^2
        const double a2 = 2.3862943611198906;
        const double bound = 7.1458388443217164;
        const Lemma2Check r = lemma2_bound_check(1, 1, 1, 2);
        CHECK(r.worst_slack == doctest::Approx(std::log(bound) - std::log(a2)).epsilon(1e-13));
        CHECK(lemma2_bound_check(2, 0.5, 3, 100).holds);
        CHECK(lemma2_bound_check(1, 1, 1e-300, 100).holds);
    }

    TEST_CASE("lemma2 bound over the parameter cube with a negative control") {
        const Lemma2GridResult r = lemma2_grid_check(100);
        CHECK(r.triples == 27);
        CHECK(r.worst_slack >= 0.0);
        CHECK(r.control_failing > 0);
    }

    TEST_CASE("sequences below the extremal recursion stay below the bound") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double c : {0.1, 1.0, 10.0}) {
            for (double b : {0.1, 1.0, 10.0}) {
                const double a1 = 1.0;
                const double log_d0 = lemma2_log_d0(c, b, a1);
                double log_a = std::log(a1);
                for (int n = 2; n <= 100; ++n) {
                    const double cap = log_add(std::log(c * n * std::log(n)) + log_a, n * std::log(b));
                    log_a = cap + std::log(u(rng));  // anything up to the recursion cap
                    CHECK(log_a <= log_d0 + n * std::log(c) + n * std::log(n * std::log(n)));
                }
            }
        }
    }

    TEST_CASE("recursion constants") {
        ConditionCertificate cert;
        cert.valid = true;
        cert.C_plus = 1.0;
        cert.y_star = 1.0;
        const PhiSpec phi = make_phi(PhiFamily::LogPow, 1, 1);
        const RecursionConstants rc = recursion_constants(0.0, cert, 1.0, phi);
        CHECK(rc.beta == 0.5);
        CHECK(rc.eps == doctest::Approx(0.091969860292860580).epsilon(1e-14));
        CHECK(rc.c_bar == doctest::Approx(7.3523980413633845).epsilon(1e-14));
        CHECK(rc.y_hat0 == 1.0);
        CHECK(rc.n0 == 4);
        CHECK(recursion_constants(0.5, cert, 1.0, phi).beta == 0.75);

        cert.C_plus = 10.0;
        const RecursionConstants hi = recursion_constants(0.99, cert, 1.0, phi);
        CHECK(hi.eps <= 0.005 / 10.0 / 2.0 + 1e-18);
        CHECK(hi.n0 >= static_cast<int>(1.0 / (hi.eps * std::numbers::e)));
        CHECK(std::isfinite(hi.c_bar));
        CHECK(hi.c_bar > 0.0);
        CHECK(1.0 - hi.beta - hi.C_plus * hi.eps > 0.0);

        CHECK_THROWS_AS(recursion_constants(1.0, cert, 1.0, phi), InvalidArgument);
        cert.valid = false;
        CHECK_THROWS_AS(recursion_constants(0.5, cert, 1.0, phi), InvalidArgument);
    }

    TEST_CASE("proof integral bounds for exponential and normal") {
        for (const char* name : {"exponential", "normal"}) {
            const CatalogEntry e = entry(name);
            const Chain c = chain_for(e.density);
            for (int n = c.rc.n0; n <= 40; ++n) {
                CAPTURE(name);
                CAPTURE(n);
                const ProofIntegralCheck p = proof_integral_bounds(e.density, c.phi, c.rc, n);
                CHECK(p.lower_holds);
                CHECK(p.upper_holds);
            }
            CHECK_THROWS_AS(proof_integral_bounds(e.density, c.phi, c.rc, c.rc.n0 - 1), InvalidArgument);
        }
    }

    TEST_CASE("empirical recursion and its negative control") {
        const CatalogEntry e = entry("exponential");
        const Chain c = chain_for(e.density);
        const MomentTable t = moment_table(e.density, 40, e.closed_form_log_moment);
        const RecursionCheck r = empirical_recursion_check(t, c.rc, c.rc.n0, 40);
        CHECK(r.holds);
        CHECK(r.slacks.size() == static_cast<std::size_t>(40 - c.rc.n0 + 1));
        RecursionConstants shrunk = c.rc;
        shrunk.c_bar /= 100;
        CHECK_FALSE(empirical_recursion_check(t, shrunk, c.rc.n0, 40).holds);

        const CatalogEntry n = entry("normal");
        const Chain cn = chain_for(n.density);
        CHECK(empirical_recursion_check(moment_table(n.density, 40, n.closed_form_log_moment), cn.rc, cn.rc.n0, 40).holds);
    }

    TEST_CASE("symmetrization examples") {
        const TailDensity f = symmetrize(entry("chi_squared", {1.0}).density);
        const TailDensity n = entry("normal").density;
        CHECK(f.support() == SupportKind::Hamburger);
        for (int i = 0; i < 1000; ++i) {
            const double x = -30.0 + 60.0 * (i + 0.5) / 1000.0;
            CHECK(std::fabs(f.log_density(x) - n.log_density(x)) <= 1e-12 * std::max(1.0, std::fabs(n.log_density(x))));
        }
        const TailDensity fe = symmetrize(entry("exponential").density);
        CHECK(fe.log_density(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(fe.x0() == 1.0);
        const double mass = log_add(log_abs_moment(fe, 0, Side::Plus), log_abs_moment(fe, 0, Side::Minus));
        CHECK(std::fabs(mass) <= 1e-10);
        CHECK_THROWS_AS(symmetrize(n), InvalidArgument);
    }

    TEST_CASE("moment identity") {
        const MomentIdentityCheck e = check_moment_identity(entry("exponential").density, 15);
        CHECK(e.max_rel_err <= 1e-6);
        CHECK(e.odd_moments_vanish);
        CHECK(e.rel_errs[0] <= 1e-10);
        const TailDensity fe = symmetrize(entry("exponential").density);
        for (int n : {1, 2, 3}) {
            const double m = log_add(log_abs_moment(fe, 2 * n, Side::Plus), log_abs_moment(fe, 2 * n, Side::Minus));
            CHECK(m == doctest::Approx(std::lgamma(n + 1.0)).epsilon(1e-10));
        }
        CHECK(check_moment_identity(entry("chi_squared", {1.0}).density, 15).max_rel_err <= 1e-6);
    }
}
