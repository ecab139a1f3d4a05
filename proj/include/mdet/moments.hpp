#pragma once

#include <vector>

#include "mdet/density.hpp"
#include "mdet/quadrature.hpp"

namespace mdet {

/// Log-space absolute moments. Vectors are indexed by order n = 0..n_max;
/// index 0 holds the (log) mass on each side.
struct MomentTable {
    int n_max = 0;
    SupportKind support = SupportKind::Stieltjes;
    std::vector<double> log_mu_plus;   ///< log of integral of x^n f(x) over [0, inf)
    std::vector<double> log_mu_minus;  ///< log of integral of x^n f(-x) over [0, inf); -inf for STIELTJES
    std::vector<double> log_mu;        ///< log(mu_plus + mu_minus)
    std::vector<double> log_m_even;    ///< index k holds log m_{2k}, 2k <= n_max
    bool closed_form = false;          ///< filled from a catalog closed form
};

/// log of the integral of x^n f(+-x) over [0, inf) by log-space quadrature.
/// Throws MomentDivergence when the integrand does not decay.
double log_abs_moment(const TailDensity& d, int n, Side side, const QuadratureOptions& options = {});

/// Full table up to n_max. With a closed form the table is filled from it
/// and cross-checked by quadrature at n = 2, n_max/2, n_max (relative
/// tolerance 1e-6); a mismatch throws NumericalError.
MomentTable moment_table(const TailDensity& d, int n_max, const LogMomentFn& closed_form = {});

/// Largest Lyapunov defect 2 log mu_n - log mu_{n-1} - log mu_{n+1} over
/// the table; <= 0 (up to rounding) for any genuine moment sequence.
double lyapunov_defect(const MomentTable& table);

}  // namespace mdet
