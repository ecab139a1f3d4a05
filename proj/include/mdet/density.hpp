#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdet {

enum class SupportKind {
    Hamburger,  ///< support R, tails at +inf and -inf
    Stieltjes,  ///< support [0, inf), tail at +inf
};

enum class Side { Plus, Minus };

enum class Classification { MDet, MIndet, Unknown };

std::string_view to_string(SupportKind kind);
std::string_view to_string(Classification c);

using LogDensityFn = std::function<double(double)>;
/// (x, h) -> log f(x + h) - log f(x), evaluated without cancellation.
using LogStepFn = std::function<double(double, double)>;

/// A density known in closed form on its tail region(s), evaluated in
/// log-space. Immutable once constructed.
class TailDensity {
public:
    /// Validates positivity of the density on a 10^3-point tail grid and
    /// rejects tails that oscillate. Throws InvalidArgument.
    TailDensity(SupportKind support, double x0, LogDensityFn log_f, std::string label,
                LogStepFn log_step = {}, bool normalized = true);

    SupportKind support() const { return support_; }
    double x0() const { return x0_; }
    const std::string& label() const { return label_; }
    /// False for user kernels whose normalising constant is unknown.
    bool normalized() const { return normalized_; }

    /// log f(x). Throws DomainError for x < 0 on a Stieltjes density.
    double log_density(double x) const;

    /// log f(x + h) - log f(x).
    double log_ratio(double x, double h) const;

    /// Same density multiplied by e^log_c.
    TailDensity scaled(double log_c, bool normalized) const;

    /// Raw log-density without the support check (x must be in the support).
    const LogDensityFn& log_fn() const { return log_f_; }

private:
    SupportKind support_;
    double x0_;
    LogDensityFn log_f_;
    LogStepFn log_step_;
    std::string label_;
    bool normalized_;
};

/// evaluate_log_density
inline double evaluate_log_density(const TailDensity& d, double x) { return d.log_density(x); }

/// log of the absolute moment of order n on one side, as a closed form.
using LogMomentFn = std::function<double(int n, Side side)>;

struct CatalogEntry {
    std::string name;
    std::vector<double> params;
    TailDensity density;
    LogMomentFn closed_form_log_moment;  ///< empty when no closed form is known
    Classification classification;
    std::string classification_source;
};

/// Names accepted by catalog_density.
std::vector<std::string> catalog_names();

/// Default parameters used when a catalog name is given without any.
std::vector<double> catalog_default_params(std::string_view name);

/// Builds a reference distribution. With support == Hamburger on a
/// half-line family the symmetric extension f(x) = g(|x|)/2 is returned.
/// Throws InvalidArgument for unknown names or invalid parameters.
CatalogEntry catalog_density(std::string_view name, std::span<const double> params,
                             std::optional<SupportKind> support = std::nullopt);

/// Parses the CLI form "name:p1,p2,...". Parameters may be omitted.
std::pair<std::string, std::vector<double>> parse_dist_arg(std::string_view arg);

}  // namespace mdet
