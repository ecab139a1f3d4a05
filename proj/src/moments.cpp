#include "mdet/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdet/errors.hpp"
#include "mdet/log_math.hpp"

namespace mdet {

double log_abs_moment(const TailDensity& d, int n, Side side, const QuadratureOptions& options) {
    if (n < 0) throw InvalidArgument("log_abs_moment: order must be nonnegative");
    if (side == Side::Minus && d.support() == SupportKind::Stieltjes) return kNegInf;
    const double sign = side == Side::Plus ? 1.0 : -1.0;
    const LogDensityFn& log_f = d.log_fn();
    const double order = n;
    auto integrand = [&](double x) {
        const double lf = log_f(sign * x);
        return n == 0 ? lf : order * std::log(x) + lf;
    };
    try {
        return log_integrate(integrand, 0.0, options).log_value;
    } catch (const DivergentIntegral& e) {
        throw MomentDivergence(n, e.what());
    }
}

MomentTable moment_table(const TailDensity& d, int n_max, const LogMomentFn& closed_form) {
    if (n_max < 2) throw InvalidArgument("moment_table: n_max must be at least 2");
    MomentTable t;
    t.n_max = n_max;
    t.support = d.support();
    t.closed_form = static_cast<bool>(closed_form);
    t.log_mu_plus.resize(n_max + 1);
    t.log_mu_minus.resize(n_max + 1);
    t.log_mu.resize(n_max + 1);
    const bool two_sided = d.support() == SupportKind::Hamburger;

    auto quad = [&](int n, Side s) { return log_abs_moment(d, n, s); };

    for (int n = 0; n <= n_max; ++n) {
        if (closed_form) {
            t.log_mu_plus[n] = closed_form(n, Side::Plus);
            t.log_mu_minus[n] = two_sided ? closed_form(n, Side::Minus) : kNegInf;
        } else {
            t.log_mu_plus[n] = quad(n, Side::Plus);
            t.log_mu_minus[n] = two_sided ? quad(n, Side::Minus) : kNegInf;
        }
        t.log_mu[n] = log_add(t.log_mu_plus[n], t.log_mu_minus[n]);
    }

    if (closed_form) {
        for (int n : {2, n_max / 2, n_max}) {
            const double q = log_add(quad(n, Side::Plus), two_sided ? quad(n, Side::Minus) : kNegInf);
            const double rel = std::fabs(std::expm1(q - t.log_mu[n]));
            if (!(rel <= 1e-6)) {
                std::ostringstream os;
                os << "closed-form moment of order " << n << " disagrees with quadrature (relative error "
                   << rel << ")";
                throw NumericalError(os.str());
            }
        }
    }

    t.log_m_even.resize(n_max / 2 + 1);
    for (int k = 0; 2 * k <= n_max; ++k) t.log_m_even[k] = t.log_mu[2 * k];
    return t;
}

double lyapunov_defect(const MomentTable& table) {
    double worst = kNegInf;
    for (int n = 1; n < table.n_max; ++n) {
        worst = std::max(worst, 2.0 * table.log_mu[n] - table.log_mu[n - 1] - table.log_mu[n + 1]);
    }
    return worst;
}

}  // namespace mdet
