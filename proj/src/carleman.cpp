#include "mdet/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdet/errors.hpp"

namespace mdet {

std::string_view to_string(Diagnosis d) {
    switch (d) {
        case Diagnosis::Divergent: return "DIVERGENT";
        case Diagnosis::Convergent: return "CONVERGENT";
        case Diagnosis::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

CarlemanDiagnosis carleman_terms(const MomentTable& table, SupportKind kind,
                                 const CarlemanOptions& options) {
    if (kind == SupportKind::Hamburger && table.support == SupportKind::Stieltjes) {
        throw InvalidArgument("carleman (C_H) needs a HAMBURGER table; symmetrize the density first");
    }
    CarlemanDiagnosis out;
    out.kind = kind;

    std::vector<double> log_terms;
    if (kind == SupportKind::Hamburger) {
        for (int n = 1; 2 * n <= table.n_max; ++n) log_terms.push_back(-table.log_m_even[n] / (2.0 * n));
    } else {
        for (int n = 1; n <= table.n_max; ++n) log_terms.push_back(-table.log_mu[n] / (2.0 * n));
    }
    double sum = 0.0;
    for (double lt : log_terms) {
        out.terms.push_back(std::exp(lt));
        sum += out.terms.back();
        out.partial_sums.push_back(sum);
    }

    const int count = static_cast<int>(log_terms.size());
    out.fit_from = (count + 1) / 2;
    out.fit_to = count;
    if (count - out.fit_from + 1 < 2) {
        out.growth_exponent = std::numeric_limits<double>::quiet_NaN();
        out.note = "too few orders to fit a growth exponent";
        return out;
    }

    // Least squares of log term_n on log n over the upper half of the orders.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int m = count - out.fit_from + 1;
    for (int n = out.fit_from; n <= count; ++n) {
        const double lx = std::log(static_cast<double>(n));
        const double ly = log_terms[n - 1];
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.growth_exponent = -slope;

    bool harmonic_floor = true;  // n * term_n non-decreasing: terms no smaller than c/n
    double geo = -std::numeric_limits<double>::infinity();
    for (int n = out.fit_from; n <= count; ++n) {
        if (n > out.fit_from && std::log(n) + log_terms[n - 1] < std::log(n - 1) + log_terms[n - 2]) {
            harmonic_floor = false;
        }
        geo = std::max(geo, log_terms[n - 1] / n);
    }

    std::ostringstream note;
    if (out.growth_exponent <= 1.0 - options.delta_fit) {
        out.diagnosis = Diagnosis::Divergent;
        note << "fitted exponent " << out.growth_exponent << " <= " << 1.0 - options.delta_fit;
    } else if (harmonic_floor) {
        out.diagnosis = Diagnosis::Divergent;
        note << "terms bounded below by c/n over the fit window";
    } else if (geo <= -options.delta_geo) {
        out.diagnosis = Diagnosis::Convergent;
        note << "terms decay geometrically (log term_n / n <= " << geo << ")";
    } else {
        note << "fitted exponent " << out.growth_exponent << " with sub-geometric decay";
    }
    note << "; diagnostic only, not a proof";
    out.note = note.str();
    return out;
}

DivergenceBoundSums bound_implies_divergence(double d0, double c, int N) {
    if (!(d0 > 0.0) || !(c > 0.0)) throw InvalidArgument("bound_implies_divergence: d0 and c must be positive");
    if (N < 2) throw InvalidArgument("bound_implies_divergence: N must be at least 2");
    DivergenceBoundSums out;
    out.abs_moment_series.reserve(N - 1);
    out.even_moment_series.reserve(N);
    const double log_d0 = std::log(d0);
    double s13 = 0.0;
    double s14 = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double dn = n;
        const double shrink = std::exp(-log_d0 / (2.0 * dn));
        if (n >= 2) {
            s13 += shrink / std::sqrt(c * dn * std::log(dn));
            out.abs_moment_series.push_back(s13);
        }
        s14 += shrink / (c * 2.0 * dn * std::log(2.0 * dn));
        out.even_moment_series.push_back(s14);
    }
    return out;
}

}  // namespace mdet
