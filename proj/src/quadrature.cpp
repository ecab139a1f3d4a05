#include "mdet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mdet/errors.hpp"
#include "mdet/log_math.hpp"

namespace mdet {
namespace {

constexpr double kScanLo = -60.0;
constexpr double kScanHi = 700.0;
constexpr double kScanStep = 0.25;
constexpr double kTailDrop = 50.0;
constexpr double kTermCut = 1e-20;
constexpr double kTCap = 5.0;

class Transformed {
public:
    Transformed(const std::function<double(double)>& f, double lower) : f_(f), lower_(lower) {}

    // H(v) = log f(lower + e^v) + v
    double operator()(double v) {
        ++evaluations;
        if (v < -700.0 || v > 709.0) return kNegInf;
        const double ev = std::exp(v);
        const double x = lower_ + ev;
        if (!std::isfinite(x) || x <= lower_) return kNegInf;
        const double lf = f_(x);
        if (std::isnan(lf)) return kNegInf;
        if (lf == kPosInf) {
            std::ostringstream os;
            os << "integrand is infinite at x = " << x;
            throw DomainError(os.str());
        }
        return lf + v;
    }

    int evaluations = 0;

private:
    const std::function<double(double)>& f_;
    double lower_;
};

double golden_max(Transformed& h, double a, double b) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = h(c);
    double fd = h(d);
    for (int i = 0; i < 80 && (b - a) > 1e-12 * std::max(1.0, std::fabs(a)); ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = h(d);
        }
    }
    return fc >= fd ? c : d;
}

double slope(Transformed& h, double v) {
    const double dv = 1e-3;
    return (h(v + dv) - h(v - dv)) / (2.0 * dv);
}

}  // namespace

LogIntegral log_integrate(const std::function<double(double)>& log_integrand, double lower,
                          const QuadratureOptions& options) {
    if (!(lower >= 0.0) || !std::isfinite(lower)) {
        throw InvalidArgument("log_integrate: lower limit must be finite and nonnegative");
    }
    Transformed h(log_integrand, lower);

    // Coarse scan for the maximum.
    const int n_scan = static_cast<int>((kScanHi - kScanLo) / kScanStep) + 1;
    int best = -1;
    double best_val = kNegInf;
    for (int i = 0; i < n_scan; ++i) {
        const double val = h(kScanLo + i * kScanStep);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    if (best < 0) {
        return LogIntegral{kNegInf, lower, 0, h.evaluations, 0.0};
    }
    if (best == n_scan - 1) {
        throw DivergentIntegral("integrand still growing at x = e^700");
    }
    if (best == 0 && slope(h, kScanLo) < options.existence_slack) {
        throw DivergentIntegral("integrand not integrable at the lower limit");
    }

    const double v_left = kScanLo + std::max(best - 1, 0) * kScanStep;
    const double v_right = kScanLo + std::min(best + 1, n_scan - 1) * kScanStep;
    const double v_star = golden_max(h, v_left, v_right);
    const double h_star = std::max(h(v_star), best_val);

    // Decay test on the right tail.
    {
        double v = v_star;
        double hv = h_star;
        double v_prev = v;
        double h_prev = hv;
        while (hv > h_star - kTailDrop && v < kScanHi) {
            v_prev = v;
            h_prev = hv;
            v += 0.5;
            hv = h(v);
        }
        if (hv > h_star - 30.0) {
            throw DivergentIntegral("integrand has not decayed by x = e^700");
        }
        // An abrupt drop to zero near the peak is usually overflow inside the
        // integrand; judge decay from the last finite stretch instead.
        if (hv == kNegInf && h_prev > h_star - 30.0 && v_prev > v_star) {
            const double back = (h_prev - h(v_prev - 0.5)) / 0.5;
            if (!(back <= -options.existence_slack)) {
                std::ostringstream os;
                os << "integrand stops decaying near x = " << lower + std::exp(v_prev);
                throw DivergentIntegral(os.str());
            }
        }
        if (hv != kNegInf && slope(h, v) > -options.existence_slack) {
            std::ostringstream os;
            os << "log-integrand slope " << slope(h, v) << " at x = " << lower + std::exp(v)
               << " is not below -(1+" << options.existence_slack << ")/x";
            throw DivergentIntegral(os.str());
        }
    }
    // Decay test toward the lower limit (only matters for lower == 0).
    if (lower == 0.0) {
        const double h_lo = h(kScanLo);
        if (h_lo > h_star - kTailDrop && slope(h, kScanLo) < options.existence_slack) {
            throw DivergentIntegral("integrand not integrable at x = 0");
        }
    }

    double scale = 1.0;
    {
        const double dv = 1e-3;
        const double curv = -(h(v_star + dv) - 2.0 * h_star + h(v_star - dv)) / (dv * dv);
        if (std::isfinite(curv) && curv > 0.0) scale = std::clamp(1.0 / std::sqrt(curv), 1e-3, 10.0);
    }

    constexpr double kappa = std::numbers::pi / 2.0;
    auto term = [&](double t) {
        const double st = std::sinh(t);
        const double v = v_star + scale * std::sinh(kappa * st);
        const double w = scale * kappa * std::cosh(t) * std::cosh(kappa * st);
        const double hv = h(v);
        if (hv == kNegInf || !std::isfinite(w)) return 0.0;
        return std::exp(hv - h_star) * w;
    };

    // Sum over t = offset + k * stride for k >= 0, in one direction.
    auto sweep = [&](double offset, double stride, double reference) {
        double sum = 0.0;
        int small = 0;
        for (int k = 0;; ++k) {
            const double t = offset + k * stride;
            if (std::fabs(t) > kTCap) break;
            const double val = term(t);
            sum += val;
            if (val <= kTermCut * std::max(reference, sum) && std::fabs(t) > 0.5) {
                if (++small >= 3) break;
            } else {
                small = 0;
            }
        }
        return sum;
    };

    double step = 0.5;
    double total = term(0.0);
    total += sweep(step, step, total) + sweep(-step, -step, total);
    double estimate = step * total;
    double change = 1.0;
    int level = 0;
    for (level = 1; level <= options.max_level; ++level) {
        step /= 2.0;
        total += sweep(step, 2.0 * step, total) + sweep(-step, -2.0 * step, total);
        const double next = step * total;
        change = std::fabs(next - estimate) / next;
        estimate = next;
        if (level >= options.min_level && change <= options.rel_tol) break;
    }
    level = std::min(level, options.max_level);
    if (!(estimate > 0.0) || change > 1e-8) {
        std::ostringstream os;
        os << "quadrature did not settle (relative change " << change << " at level " << level << ")";
        throw NumericalError(os.str());
    }
    return LogIntegral{h_star + std::log(estimate), lower + std::exp(v_star), level, h.evaluations,
                       change};
}

}  // namespace mdet
