#pragma once

// Numerical checks of the lemmas and of the inequality chain used to show
// that a tail-ratio bound forces the moment recursion
//   mu_n^+ <= c (n log n) mu_{n-1}^+ + b^n.

#include <optional>
#include <vector>

#include "mdet/density.hpp"
#include "mdet/log_math.hpp"
#include "mdet/moments.hpp"
#include "mdet/phi.hpp"
#include "mdet/tail_ratio.hpp"

namespace mdet {

struct Lemma1Sup {
    double numeric_max;    ///< golden-section maximum of n log y - eps y
    double formula_value;  ///< n log n - n log(eps e)
    double maximizer;
    bool bound_applies;    ///< n >= 1/(eps e)
    bool bound_holds;      ///< numeric_max <= 2 n log n (true when not applicable)
};

Lemma1Sup lemma1_sup(int n, double eps);

struct LogInequality {
    double log_lhs;
    double log_rhs;
    bool holds;
};

/// Both sides of
///   n int_{y+}^inf y^{n-1} log y dF <= 2n log n int y^{n-1} dF + eps int y^n dF.
/// Requires y_plus >= 1 and n >= 1/(eps e); throws InvalidArgument otherwise.
LogInequality lemma1_integral_bound(const TailDensity& d, int n, double eps, double y_plus);

struct Lemma2Check {
    double worst_slack;  ///< min over n of log bound - log a_n
    int worst_n;
    bool holds;
};

/// Builds the extremal sequence a_n = c (n log n) a_{n-1} + b^n from a_1
/// and compares it with d0 c^n (n log n)^n, d0 = a1/c + exp(b/c), for
/// n = 2..n_max. d0_scale multiplies d0 (negative controls use 1/10).
Lemma2Check lemma2_bound_check(double c, double b, double a1, int n_max, double d0_scale = 1.0);

/// log d0 for Lemma 2.
double lemma2_log_d0(double c, double b, double a1);

struct Lemma1GridResult {
    int points = 0;
    double worst_rel_err = 0.0;  ///< max |numeric - formula| / max(1, |formula|)
    int bound_violations = 0;    ///< points with n >= 1/(eps e) and numeric > 2 n log n
};

/// lemma1_sup over n_count integers spread over [1, 100] and eps_count
/// geometric values in [0.01, 2].
Lemma1GridResult lemma1_grid_check(int n_count = 20, int eps_count = 20);

struct Lemma2GridResult {
    int triples = 0;
    double worst_slack = 0.0;       ///< min over triples of the worst log-slack
    int control_failing = 0;        ///< triples whose d0/10 control goes negative
};

/// lemma2_bound_check over (c, b, a1) in {0.1, 1, 10}^3, plus the d0/10 control.
Lemma2GridResult lemma2_grid_check(int n_max = 100);

struct RecursionConstants {
    double beta;
    double eps;
    double C_plus;
    double x_hat0;
    double y_hat0;
    double c_bar;
    double b_bar;
    int n0;
};

/// beta = (1 + gamma_plus)/2, eps at half of min((1-beta)/C+, 1/(2e)),
/// c_bar = 3C+/(1-beta-C+ eps), b_bar = (x_hat0 + y_hat0)/(1-beta-C+ eps),
/// n0 = max(2, ceil(1/(eps e))). Throws InvalidArgument when gamma_plus >= 1,
/// the certificate is invalid, or y(x_hat0) < y_star.
RecursionConstants recursion_constants(double gamma_plus, const ConditionCertificate& cert,
                                       double x_hat0, const PhiSpec& phi);

/// Smallest point of a geometric grid on [max(x0, x_min), grid.x_end] from
/// which f(x + phi(x))/f(x) <= beta at every later grid point and
/// y(x) >= y_star. Empty when no such point exists.
std::optional<double> select_x_hat0(const TailDensity& d, const PhiSpec& phi, double beta,
                                    double y_star, const GridSpec& grid = {});

struct ProofIntegralCheck {
    int n;
    SignedLog integral;  ///< I(x_hat0) = int_{x_hat0}^inf x^n (f(x) - f(x + phi(x))) dx
    SignedLog lower;     ///< (1 - beta) mu_n^+ - x_hat0^n
    SignedLog upper;     ///< 3C+ (n log n) mu_{n-1}^+ + C+ eps mu_n^+ + y_hat0^n
    bool lower_holds;
    bool upper_holds;
};

/// Throws InvalidArgument when n < rc.n0.
ProofIntegralCheck proof_integral_bounds(const TailDensity& d, const PhiSpec& phi,
                                         const RecursionConstants& rc, int n);

struct RecursionCheck {
    double worst_slack;  ///< min over n of log(c_bar (n log n) mu_{n-1}^+ + b_bar^n) - log mu_n^+
    int worst_n;
    bool holds;
    std::vector<double> slacks;  ///< one per n in [n_from, n_to]
};

RecursionCheck empirical_recursion_check(const MomentTable& table, const RecursionConstants& rc,
                                         int n_from, int n_to);

/// f(x) = |x| g(x^2) on R with threshold sqrt(x0): the law of a symmetric X
/// with X^2 distributed as g.
TailDensity symmetrize(const TailDensity& g);

struct MomentIdentityCheck {
    double max_rel_err;          ///< max over n <= n_max of |E[X^{2n}] / E[Y^n] - 1|
    std::vector<double> rel_errs;
    bool odd_moments_vanish;     ///< mu_k^+ == mu_k^- for odd k
};

/// E[X^{2n}] from symmetrize(g) against E[Y^n] from g, both by quadrature.
MomentIdentityCheck check_moment_identity(const TailDensity& g, int n_max);

}  // namespace mdet
