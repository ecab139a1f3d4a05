#include "mdet/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "mdet/errors.hpp"

namespace mdet {

std::string_view to_string(PhiFamily f) {
    switch (f) {
        case PhiFamily::LogPow: return "logpow";
        case PhiFamily::LogPowPlusLogLog: return "logpow+loglog";
        case PhiFamily::LogPowTimesLogLog: return "logpow*loglog";
        case PhiFamily::Custom: return "custom";
    }
    return "custom";
}

PhiFamily parse_phi_family(std::string_view s) {
    if (s == "logpow") return PhiFamily::LogPow;
    if (s == "logpow+loglog") return PhiFamily::LogPowPlusLogLog;
    if (s == "logpow*loglog") return PhiFamily::LogPowTimesLogLog;
    throw InvalidArgument("unknown phi family '" + std::string(s) +
                          "' (expected logpow, logpow+loglog or logpow*loglog)");
}

namespace {

// (log x)^p with the convention (log x)^0 = 1.
double log_pow(double x, double p) { return p == 0.0 ? 1.0 : std::pow(std::log(x), p); }

}  // namespace

PhiSpec make_phi(PhiFamily family, double a, double alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("phi: a must be positive");
    std::ostringstream label;
    label << to_string(family) << "(a=" << a << ",alpha=" << alpha << ")";
    switch (family) {
        case PhiFamily::LogPow: {
            if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("logpow: alpha must lie in [0,1]");
            auto phi = [a, alpha](double x) { return a * log_pow(x, alpha); };
            auto prime = [a, alpha](double x) {
                if (alpha == 0.0) return 0.0;
                return a * alpha * log_pow(x, alpha - 1.0) / x;
            };
            return PhiSpec{family, a, alpha, 1.0, phi, prime, label.str()};
        }
        case PhiFamily::LogPowPlusLogLog: {
            if (!(alpha >= 0.0 && alpha < 1.0)) {
                throw InvalidArgument("logpow+loglog: alpha must lie in [0,1); alpha = 1 is outside the corollary hypotheses");
            }
            auto phi = [a, alpha](double x) { return a * (log_pow(x, alpha) + std::log(std::log(x))); };
            auto prime = [a, alpha](double x) {
                const double lx = std::log(x);
                const double first = alpha == 0.0 ? 0.0 : alpha * std::pow(lx, alpha - 1.0);
                return a * (first + 1.0 / lx) / x;
            };
            return PhiSpec{family, a, alpha, std::numbers::e, phi, prime, label.str()};
        }
        case PhiFamily::LogPowTimesLogLog: {
            if (!(alpha >= 0.0 && alpha < 1.0)) {
                throw InvalidArgument("logpow*loglog: alpha must lie in [0,1); alpha = 1 is outside the corollary hypotheses");
            }
            auto phi = [a, alpha](double x) { return a * log_pow(x, alpha) * std::log(std::log(x)); };
            auto prime = [a, alpha](double x) {
                const double lx = std::log(x);
                return a * std::pow(lx, alpha - 1.0) * (alpha * std::log(lx) + 1.0) / x;
            };
            return PhiSpec{family, a, alpha, std::numbers::e, phi, prime, label.str()};
        }
        case PhiFamily::Custom: break;
    }
    throw InvalidArgument("make_phi: use make_custom_phi for custom phi");
}

PhiSpec make_custom_phi(std::function<double(double)> phi, std::function<double(double)> phi_prime,
                        double x_min, std::string label) {
    if (!phi || !phi_prime) throw InvalidArgument("custom phi needs phi and phi'");
    if (!(x_min > 0.0)) throw InvalidArgument("custom phi: x_min must be positive");
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const double x = x_min * std::pow(1e8, static_cast<double>(i) / (n - 1));
        const double v = phi(x);
        const double d = phi_prime(x);
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("custom phi must be finite and nonnegative");
        if (!(1.0 + d > 0.0)) throw InvalidArgument("custom phi: x + phi(x) must be strictly increasing");
    }
    return PhiSpec{PhiFamily::Custom, 0.0, 0.0, x_min, std::move(phi), std::move(phi_prime),
                   std::move(label)};
}

double forward(const PhiSpec& phi, double x) {
    if (!(x >= phi.x_min)) {
        std::ostringstream os;
        os << "forward: x = " << x << " below phi domain start " << phi.x_min;
        throw DomainError(os.str());
    }
    return x + phi.phi(x);
}

double inverse(const PhiSpec& phi, double y) {
    const double y_min = forward(phi, phi.x_min);
    if (!(y >= y_min)) {
        std::ostringstream os;
        os << "inverse: y = " << y << " below range start " << y_min;
        throw DomainError(os.str());
    }
    if (y == y_min) return phi.x_min;

    const double target = 1e-12 * std::max(1.0, y);
    double lo = phi.x_min;
    double hi = y;
    double x = std::clamp(y - phi.phi(y), lo, hi);
    double resid = forward(phi, x) - y;
    for (int it = 0; it < 200; ++it) {
        if (std::fabs(resid) <= 1e-15 * std::max(1.0, y)) break;
        if (resid > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        double next = x - resid / (1.0 + phi.phi_prime(x));
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        x = next;
        resid = forward(phi, x) - y;
    }
    if (!(std::fabs(resid) <= target)) {
        std::ostringstream os;
        os << "inverse: no convergence at y = " << y << " (residual " << resid
           << "); phi may be mis-specified";
        throw NumericalError(os.str());
    }
    return x;
}

VarphiValue varphi_and_prime(const PhiSpec& phi, double y) {
    const double x = inverse(phi, y);
    const double p = phi.phi_prime(x);
    const double prime = std::isinf(p) ? 1.0 : p / (1.0 + p);
    return VarphiValue{phi.phi(x), prime};
}

ConditionCertificate certify_conditions(const PhiSpec& phi, double y_star_hint, double grid_max,
                                        const CertifyOptions& options) {
    const double y_min = forward(phi, phi.x_min);
    if (!(y_star_hint >= y_min)) {
        throw InvalidArgument("certify_conditions: y_star_hint below the range of y(x)");
    }
    if (!(grid_max > y_star_hint)) throw InvalidArgument("certify_conditions: grid_max must exceed y_star_hint");
    const int n = std::max(options.grid_points, 10);

    ConditionCertificate cert;
    cert.grid_min = y_star_hint;
    cert.grid_max = grid_max;
    cert.grid_points = n;

    std::vector<double> ys(n), qa(n), qb(n), qc(n);
    std::vector<char> ok(n);
    const double span = std::log(grid_max / y_star_hint);
    for (int i = 0; i < n; ++i) {
        const double y = i == n - 1 ? grid_max : y_star_hint * std::exp(span * i / (n - 1));
        const VarphiValue v = varphi_and_prime(phi, y);
        const double ly = std::log(y);
        ys[i] = y;
        qa[i] = v.prime;
        qb[i] = ly > 0.0 ? v.value / ly : std::numeric_limits<double>::infinity();
        qc[i] = y * v.prime;
        const bool a_ok = std::isfinite(v.prime) && v.prime >= -1e-14 && v.prime <= 1.0 + 1e-14;
        ok[i] = a_ok && ly > 0.0 && std::isfinite(qb[i]) && std::isfinite(qc[i]);
    }

    int start = n;
    while (start > 0 && ok[start - 1]) --start;
    if (start == n) {
        cert.failed = PhiCondition::A;
        cert.diagnostic = "condition (a) fails at the end of the grid (varphi' outside [0,1])";
        return cert;
    }
    cert.y_star = ys[start];

    double sup_b = 0.0, sup_c = 0.0, margin_a = 1.0;
    for (int i = start; i < n; ++i) {
        sup_b = std::max(sup_b, qb[i]);
        sup_c = std::max(sup_c, qc[i]);
        margin_a = std::min({margin_a, qa[i], 1.0 - qa[i]});
    }
    cert.sup_b = sup_b;
    cert.sup_c = sup_c;
    cert.C_plus = options.inflation * std::max(sup_b, sup_c);
    cert.margin_a = std::max(margin_a, 0.0);
    if (cert.C_plus > 0.0) {
        cert.margin_b = 1.0 - sup_b / cert.C_plus;
        cert.margin_c = 1.0 - sup_c / cert.C_plus;
    }

    // Boundedness: compare sups over the last two decades.
    const double d1 = grid_max / 10.0;
    const double d2 = grid_max / 100.0;
    if (cert.y_star > d2) {
        cert.failed = PhiCondition::B;
        cert.diagnostic = "grid above y_star spans less than two decades; cannot test boundedness";
        return cert;
    }
    auto growth = [&](const std::vector<double>& q) {
        double last = 0.0, prev = 0.0;
        for (int i = start; i < n; ++i) {
            if (ys[i] >= d1) {
                last = std::max(last, q[i]);
            } else if (ys[i] >= d2) {
                prev = std::max(prev, q[i]);
            }
        }
        if (prev == 0.0) return last == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return last / prev;
    };
    const double gb = growth(qb);
    const double gc = growth(qc);
    if (gb > options.max_decade_growth) {
        std::ostringstream os;
        os << "condition (b) fails: varphi(y)/log y grows by factor " << gb << " over the last decade";
        cert.failed = PhiCondition::B;
        cert.diagnostic = os.str();
        return cert;
    }
    if (gc > options.max_decade_growth) {
        std::ostringstream os;
        os << "condition (c) fails: y varphi'(y) grows by factor " << gc << " over the last decade";
        cert.failed = PhiCondition::C;
        cert.diagnostic = os.str();
        return cert;
    }
    if (!(cert.C_plus > 0.0)) {
        cert.failed = PhiCondition::B;
        cert.diagnostic = "degenerate phi: varphi vanishes on the grid";
        return cert;
    }
    cert.valid = true;
    cert.diagnostic = "conditions (a)-(c) hold on the finite grid";
    return cert;
}

}  // namespace mdet
