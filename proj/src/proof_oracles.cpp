#include "mdet/proof_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mdet/errors.hpp"
#include "mdet/quadrature.hpp"

namespace mdet {

Lemma1Sup lemma1_sup(int n, double eps) {
    if (n < 1 || !(eps > 0.0)) throw InvalidArgument("lemma1_sup: needs n >= 1 and eps > 0");
    const double dn = n;
    auto g = [&](double y) { return dn * std::log(y) - eps * y; };

    double a = 0.0;
    double b = 10.0 * dn / eps;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    for (int i = 0; i < 200; ++i) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    Lemma1Sup out;
    out.maximizer = gc >= gd ? c : d;
    out.numeric_max = std::max(gc, gd);
    out.formula_value = dn * std::log(dn) - dn * (std::log(eps) + 1.0);
    out.bound_applies = dn >= 1.0 / (eps * std::numbers::e);
    out.bound_holds = !out.bound_applies || out.numeric_max <= 2.0 * dn * std::log(dn) + 1e-12 * dn;
    return out;
}

namespace {

double log_tail_integral(const TailDensity& d, double lower, double power, bool with_log_log) {
    const LogDensityFn& log_f = d.log_fn();
    auto integrand = [&](double y) {
        double v = log_f(y);
        if (power != 0.0) v += power * std::log(y);
        if (with_log_log) v += std::log(std::log(y));
        return v;
    };
    return log_integrate(integrand, lower).log_value;
}

}  // namespace

LogInequality lemma1_integral_bound(const TailDensity& d, int n, double eps, double y_plus) {
    if (!(y_plus >= 1.0)) throw InvalidArgument("lemma1_integral_bound: y_plus must be >= 1");
    if (n < 1 || !(eps > 0.0) || n < 1.0 / (eps * std::numbers::e)) {
        throw InvalidArgument("lemma1_integral_bound: requires n >= 1/(eps e)");
    }
    const double dn = n;
    const double lhs = std::log(dn) + log_tail_integral(d, y_plus, dn - 1.0, true);
    const double rhs_a =
        n == 1 ? kNegInf : std::log(2.0 * dn * std::log(dn)) + log_tail_integral(d, y_plus, dn - 1.0, false);
    const double rhs_b = std::log(eps) + log_tail_integral(d, y_plus, dn, false);
    const double rhs = log_add(rhs_a, rhs_b);
    return LogInequality{lhs, rhs, lhs <= rhs + 1e-10};
}

double lemma2_log_d0(double c, double b, double a1) { return log_add(std::log(a1) - std::log(c), b / c); }

Lemma2Check lemma2_bound_check(double c, double b, double a1, int n_max, double d0_scale) {
    if (!(c > 0.0 && b > 0.0 && a1 > 0.0)) throw InvalidArgument("lemma2_bound_check: c, b, a1 must be positive");
    if (n_max < 2) throw InvalidArgument("lemma2_bound_check: n_max must be at least 2");
    const double log_c = std::log(c);
    const double log_b = std::log(b);
    const double log_d0 = lemma2_log_d0(c, b, a1) + std::log(d0_scale);
    double log_a = std::log(a1);
    Lemma2Check out{kPosInf, 0, true};
    for (int n = 2; n <= n_max; ++n) {
        const double dn = n;
        const double log_nlogn = std::log(dn * std::log(dn));
        log_a = log_add(log_c + log_nlogn + log_a, dn * log_b);
        const double log_bound = log_d0 + dn * log_c + dn * log_nlogn;
        const double slack = log_bound - log_a;
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            out.worst_n = n;
        }
    }
    out.holds = out.worst_slack >= 0.0;
    return out;
}

Lemma1GridResult lemma1_grid_check(int n_count, int eps_count) {
    if (n_count < 2 || eps_count < 2) throw InvalidArgument("lemma1_grid_check: needs at least 2 values per axis");
    Lemma1GridResult out;
    for (int i = 0; i < n_count; ++i) {
        const int n = 1 + static_cast<int>(std::lround(99.0 * i / (n_count - 1)));
        for (int j = 0; j < eps_count; ++j) {
            const double eps = 0.01 * std::pow(200.0, static_cast<double>(j) / (eps_count - 1));
            const Lemma1Sup r = lemma1_sup(n, eps);
            const double err = std::fabs(r.numeric_max - r.formula_value) / std::max(1.0, std::fabs(r.formula_value));
            out.worst_rel_err = std::max(out.worst_rel_err, err);
            if (!r.bound_holds) ++out.bound_violations;
            ++out.points;
        }
    }
    return out;
}

Lemma2GridResult lemma2_grid_check(int n_max) {
    const double values[] = {0.1, 1.0, 10.0};
    Lemma2GridResult out{0, kPosInf, 0};
    for (double c : values) {
        for (double b : values) {
            for (double a1 : values) {
                out.worst_slack = std::min(out.worst_slack, lemma2_bound_check(c, b, a1, n_max).worst_slack);
                if (!lemma2_bound_check(c, b, a1, n_max, 0.1).holds) ++out.control_failing;
                ++out.triples;
            }
        }
    }
    return out;
}

RecursionConstants recursion_constants(double gamma_plus, const ConditionCertificate& cert,
                                       double x_hat0, const PhiSpec& phi) {
    if (!(gamma_plus >= 0.0 && gamma_plus < 1.0)) {
        throw InvalidArgument("recursion_constants: gamma_plus must lie in [0,1)");
    }
    if (!cert.valid) throw InvalidArgument("recursion_constants: phi certificate is not valid");
    RecursionConstants rc;
    rc.C_plus = cert.C_plus;
    rc.x_hat0 = x_hat0;
    rc.y_hat0 = forward(phi, x_hat0);
    if (rc.y_hat0 < cert.y_star) {
        std::ostringstream os;
        os << "recursion_constants: y(x_hat0) = " << rc.y_hat0 << " is below y_star = " << cert.y_star;
        throw InvalidArgument(os.str());
    }
    rc.beta = 0.5 * (1.0 + gamma_plus);
    const double eps_sup = std::min((1.0 - rc.beta) / rc.C_plus, 1.0 / (2.0 * std::numbers::e));
    rc.eps = eps_sup / 2.0;
    const double denom = 1.0 - rc.beta - rc.C_plus * rc.eps;
    rc.c_bar = 3.0 * rc.C_plus / denom;
    rc.b_bar = (rc.x_hat0 + rc.y_hat0) / denom;
    rc.n0 = std::max(2, static_cast<int>(std::ceil(1.0 / (rc.eps * std::numbers::e))));
    return rc;
}

std::optional<double> select_x_hat0(const TailDensity& d, const PhiSpec& phi, double beta,
                                    double y_star, const GridSpec& grid) {
    const double lo = std::max(d.x0(), phi.x_min);
    if (!(grid.x_end > lo)) return std::nullopt;
    const int per_decade = 200;
    const int n = std::max(2, static_cast<int>(std::ceil(per_decade * std::log10(grid.x_end / lo)))) + 1;
    std::vector<double> xs(n);
    std::vector<char> ok(n);
    for (int i = 0; i < n; ++i) {
        const double x = i == n - 1 ? grid.x_end : lo * std::pow(grid.x_end / lo, static_cast<double>(i) / (n - 1));
        xs[i] = x;
        const double lr = d.log_ratio(x, phi.phi(x));
        ok[i] = !std::isnan(lr) && lr <= std::log(beta);
    }
    int start = n;
    while (start > 0 && ok[start - 1]) --start;
    while (start < n && forward(phi, xs[start]) < y_star) ++start;
    if (start >= n) return std::nullopt;
    return xs[start];
}

ProofIntegralCheck proof_integral_bounds(const TailDensity& d, const PhiSpec& phi,
                                         const RecursionConstants& rc, int n) {
    if (n < rc.n0) {
        std::ostringstream os;
        os << "proof_integral_bounds: n = " << n << " is below n0 = " << rc.n0;
        throw InvalidArgument(os.str());
    }
    const LogDensityFn& log_f = d.log_fn();
    const double dn = n;

    bool ratio_above_one = false;
    auto direct = [&](double x) {
        const double lr = d.log_ratio(x, phi.phi(x));
        if (!(lr < 0.0)) {
            ratio_above_one = true;
            return kNegInf;
        }
        return dn * std::log(x) + log_f(x) + std::log(-std::expm1(lr));
    };
    SignedLog integral = SignedLog::from_log(log_integrate(direct, rc.x_hat0).log_value);
    if (ratio_above_one) {
        // Fall back to the signed difference of the two pieces.
        auto first = [&](double x) { return dn * std::log(x) + log_f(x); };
        auto shifted = [&](double x) { return dn * std::log(x) + log_f(x + phi.phi(x)); };
        integral = SignedLog::from_log(log_integrate(first, rc.x_hat0).log_value) -
                   SignedLog::from_log(log_integrate(shifted, rc.x_hat0).log_value);
    }

    const double log_mu_n = log_abs_moment(d, n, Side::Plus);
    const double log_mu_prev = log_abs_moment(d, n - 1, Side::Plus);

    const SignedLog lower = SignedLog::from_log(std::log(1.0 - rc.beta) + log_mu_n) -
                            SignedLog::from_log(dn * std::log(rc.x_hat0));
    const SignedLog upper =
        SignedLog::from_log(std::log(3.0 * rc.C_plus) + std::log(dn * std::log(dn)) + log_mu_prev) +
        SignedLog::from_log(std::log(rc.C_plus * rc.eps) + log_mu_n) +
        SignedLog::from_log(dn * std::log(rc.y_hat0));

    ProofIntegralCheck out{n, integral, lower, upper, false, false};
    out.lower_holds = less_equal(lower, integral, 1e-9);
    out.upper_holds = less_equal(integral, upper, 1e-9);
    return out;
}

RecursionCheck empirical_recursion_check(const MomentTable& table, const RecursionConstants& rc,
                                         int n_from, int n_to) {
    n_from = std::max(n_from, 2);
    if (n_to > table.n_max || n_from > n_to) {
        throw InvalidArgument("empirical_recursion_check: order range not covered by the table");
    }
    RecursionCheck out{kPosInf, n_from, true, {}};
    const double log_c = std::log(rc.c_bar);
    const double log_b = std::log(rc.b_bar);
    for (int n = n_from; n <= n_to; ++n) {
        const double dn = n;
        const double rhs = log_add(log_c + std::log(dn * std::log(dn)) + table.log_mu_plus[n - 1], dn * log_b);
        const double slack = rhs - table.log_mu_plus[n];
        out.slacks.push_back(slack);
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            out.worst_n = n;
        }
    }
    out.holds = out.worst_slack >= 0.0;
    return out;
}

TailDensity symmetrize(const TailDensity& g) {
    if (g.support() != SupportKind::Stieltjes) throw InvalidArgument("symmetrize needs a STIELTJES density");
    const LogDensityFn log_g = g.log_fn();
    LogDensityFn log_f = [log_g](double x) {
        // The single point x = 0 carries no mass. Below 1e-150 the square
        // underflows, so evaluate at the cutoff; the mass there is negligible.
        if (x == 0.0) return kNegInf;
        const double ax = std::max(std::fabs(x), 1e-150);
        return std::log(ax) + log_g(ax * ax);
    };
    const TailDensity base = g;
    LogStepFn step = [log_g, base](double x, double h) {
        const double y = x + h;
        if ((x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0)) {
            return std::log1p(h / x) + base.log_ratio(x * x, h * (2.0 * x + h));
        }
        return std::log(std::fabs(y)) + log_g(y * y) - std::log(std::fabs(x)) - log_g(x * x);
    };
    return TailDensity(SupportKind::Hamburger, std::sqrt(g.x0()), log_f, "symmetrized " + g.label(), step,
                       g.normalized());
}

MomentIdentityCheck check_moment_identity(const TailDensity& g, int n_max) {
    if (n_max < 0) throw InvalidArgument("check_moment_identity: n_max must be nonnegative");
    const TailDensity f = symmetrize(g);
    MomentIdentityCheck out{0.0, {}, true};
    for (int n = 0; n <= n_max; ++n) {
        const double even = log_add(log_abs_moment(f, 2 * n, Side::Plus), log_abs_moment(f, 2 * n, Side::Minus));
        const double direct = log_abs_moment(g, n, Side::Plus);
        const double rel = std::fabs(std::expm1(even - direct));
        out.rel_errs.push_back(rel);
        out.max_rel_err = std::max(out.max_rel_err, rel);
        if (n >= 1) {
            const int odd = 2 * n - 1;
            const double plus = log_abs_moment(f, odd, Side::Plus);
            const double minus = log_abs_moment(f, odd, Side::Minus);
            if (std::fabs(std::expm1(plus - minus)) > 1e-12) out.odd_moments_vanish = false;
        }
    }
    return out;
}

}  // namespace mdet
