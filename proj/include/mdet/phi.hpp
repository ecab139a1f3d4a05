#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace mdet {

enum class PhiFamily {
    LogPow,             ///< a (log x)^alpha
    LogPowPlusLogLog,   ///< a [(log x)^alpha + log log x]
    LogPowTimesLogLog,  ///< a (log x)^alpha log log x
    Custom,
};

std::string_view to_string(PhiFamily f);
/// Accepts the CLI spellings "logpow", "logpow+loglog", "logpow*loglog".
PhiFamily parse_phi_family(std::string_view s);

/// Tail shift phi together with y(x) = x + phi(x), its inverse x(y) and
/// varphi(y) = y - x(y).
struct PhiSpec {
    PhiFamily family;
    double a;
    double alpha;
    double x_min;
    std::function<double(double)> phi;
    std::function<double(double)> phi_prime;
    std::string label;
};

/// Throws InvalidArgument if a <= 0, alpha outside [0,1] (LogPow) or
/// outside [0,1) (the log-log families).
PhiSpec make_phi(PhiFamily family, double a, double alpha);

/// User-supplied phi with its derivative in closed form. Validates
/// phi >= 0 and 1 + phi' > 0 on a grid starting at x_min.
PhiSpec make_custom_phi(std::function<double(double)> phi, std::function<double(double)> phi_prime,
                        double x_min, std::string label);

/// y(x) = x + phi(x). Throws DomainError below x_min.
double forward(const PhiSpec& phi, double x);

/// x(y), solved by safeguarded Newton with bisection fallback so that
/// |forward(x) - y| <= 1e-12 * max(1, y).
double inverse(const PhiSpec& phi, double y);

struct VarphiValue {
    double value;  ///< varphi(y) = phi(x(y))
    double prime;  ///< varphi'(y) = phi'(x) / (1 + phi'(x))
};

VarphiValue varphi_and_prime(const PhiSpec& phi, double y);

enum class PhiCondition { A, B, C };

struct ConditionCertificate {
    double C_plus = 0.0;
    double y_star = 0.0;
    double grid_min = 0.0;
    double grid_max = 0.0;
    int grid_points = 0;
    double margin_a = 0.0;  ///< min over the grid of min(varphi', 1 - varphi')
    double margin_b = 0.0;  ///< 1 - sup(varphi / log y) / C_plus
    double margin_c = 0.0;  ///< 1 - sup(y varphi') / C_plus
    double sup_b = 0.0;
    double sup_c = 0.0;
    bool valid = false;
    std::optional<PhiCondition> failed;
    std::string diagnostic;
};

struct CertifyOptions {
    int grid_points = 10000;
    double inflation = 1.05;
    /// Largest growth of a sup across the final decade still read as bounded.
    double max_decade_growth = 1.05;
};

/// Finite-range certificate for conditions (a)-(c) on a geometric grid
/// [y_star_hint, grid_max]; y_star is the smallest grid point from which
/// (a) holds throughout, and C_plus inflates the observed sups of
/// varphi/log y and y varphi'. A sup still growing by more than
/// max_decade_growth over the last decade is reported as unbounded.
ConditionCertificate certify_conditions(const PhiSpec& phi, double y_star_hint, double grid_max,
                                        const CertifyOptions& options = {});

}  // namespace mdet
