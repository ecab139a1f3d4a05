#pragma once

#include <functional>

namespace mdet {

struct QuadratureOptions {
    double rel_tol = 1e-12;
    int min_level = 3;
    int max_level = 10;
    /// Tail decay required for convergence: the log-integrand must fall at
    /// least like -(1 + slack) * log x far out, i.e. x * d/dx log(x f) <= -slack.
    double existence_slack = 0.05;
};

struct LogIntegral {
    double log_value;   ///< log of the integral; -inf for a zero integral
    double mode;        ///< x at the maximum of (x - lower) times the integrand
    int level;          ///< refinement level reached (step 2^-level / 2)
    int evaluations;
    double rel_change;  ///< relative change between the last two levels
};

/// log of the integral of exp(log_integrand(x)) over [lower, inf), lower >= 0.
///
/// The substitution x = lower + e^v maps the half line to the real line,
/// where the integrand is located by a coarse scan plus golden-section
/// refinement and integrated with a sinh-sinh trapezoid rule centred on the
/// mode. All sums are taken after subtracting the log-maximum, so results
/// far outside double range (e^800 and beyond) are exact in log-space.
///
/// Throws DivergentIntegral when the integrand fails the decay test at
/// either end, NumericalError when refinement does not settle.
LogIntegral log_integrate(const std::function<double(double)>& log_integrand, double lower,
                          const QuadratureOptions& options = {});

}  // namespace mdet
