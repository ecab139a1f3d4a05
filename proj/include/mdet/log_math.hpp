#pragma once

// Log-space helpers. Magnitudes are stored as natural logarithms so that
// quantities such as e^800 or (n log n)^n stay representable.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace mdet {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// log(e^a - e^b); requires a >= b. Returns -inf when a == b.
inline double log_sub(double a, double b) {
    if (b == kNegInf) return a;
    if (b > a) return std::numeric_limits<double>::quiet_NaN();
    if (a == b) return kNegInf;
    const double d = b - a;
    // log1p(-e^d) loses accuracy for d close to 0; log(-expm1(d)) does not.
    return a + (d > -0.6931471805599453 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

/// Pairwise log-sum-exp over a range. Empty input gives -inf.
inline double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) return kNegInf;
    if (xs.size() == 1) return xs[0];
    if (xs.size() == 2) return log_add(xs[0], xs[1]);
    const std::size_t half = xs.size() / 2;
    return log_add(log_sum_exp(xs.first(half)), log_sum_exp(xs.subspan(half)));
}

/// Real number stored as sign and log-magnitude. sign == 0 encodes zero.
struct SignedLog {
    double log_mag = kNegInf;
    int sign = 0;

    static SignedLog from_log(double log_mag) {
        return log_mag == kNegInf ? SignedLog{} : SignedLog{log_mag, 1};
    }
    static SignedLog from_value(double v) {
        if (v == 0.0) return SignedLog{};
        return SignedLog{std::log(std::fabs(v)), v > 0 ? 1 : -1};
    }

    bool is_zero() const { return sign == 0; }
    double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

    SignedLog operator-() const { return SignedLog{log_mag, -sign}; }

    friend SignedLog operator+(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (a.sign == b.sign) return SignedLog{log_add(a.log_mag, b.log_mag), a.sign};
        if (a.log_mag == b.log_mag) return SignedLog{};
        if (a.log_mag > b.log_mag) return SignedLog{log_sub(a.log_mag, b.log_mag), a.sign};
        return SignedLog{log_sub(b.log_mag, a.log_mag), b.sign};
    }
    friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }

    friend SignedLog operator*(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0 || b.sign == 0) return SignedLog{};
        return SignedLog{a.log_mag + b.log_mag, a.sign * b.sign};
    }
    friend SignedLog operator/(const SignedLog& a, const SignedLog& b) {
        if (b.sign == 0) return SignedLog{kPosInf, a.sign == 0 ? 1 : a.sign};
        if (a.sign == 0) return SignedLog{};
        return SignedLog{a.log_mag - b.log_mag, a.sign * b.sign};
    }

    /// a <= b up to a relative tolerance on the larger magnitude.
    friend bool less_equal(const SignedLog& a, const SignedLog& b, double rel_tol) {
        const SignedLog diff = a - b;
        if (diff.sign <= 0) return true;
        const double scale = std::max(a.log_mag, b.log_mag);
        return diff.log_mag <= scale + std::log(rel_tol);
    }
};

}  // namespace mdet
