#include "mdet/tail_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mdet/errors.hpp"

namespace mdet {

std::string_view to_string(GammaKind k) {
    switch (k) {
        case GammaKind::G1: return "g1";
        case GammaKind::G2: return "g2";
        case GammaKind::G3: return "g3";
    }
    return "g1";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "SATISFIED";
        case Verdict::Failed: return "FAILED";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

double GridSpec::x_start() const { return x_end / std::pow(10.0, windows); }

Verdict classify_windows(const std::vector<WindowSup>& windows, double margin) {
    if (windows.empty()) return Verdict::Inconclusive;
    double top = 0.0;
    for (const auto& w : windows) top = std::max(top, w.sup_ratio);
    if (top <= 1.0 - margin) return Verdict::Satisfied;
    bool high = true;
    bool monotone = true;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].sup_ratio < 1.0 - margin / 2.0) high = false;
        if (i > 0 && windows[i].sup_ratio < windows[i - 1].sup_ratio) monotone = false;
    }
    return high && monotone ? Verdict::Failed : Verdict::Inconclusive;
}

namespace {

void check_grid(const GridSpec& grid, double lower_bound) {
    if (grid.windows < 1 || grid.points_per_window < 1) {
        throw InvalidArgument("grid needs at least one window and one interval per window");
    }
    if (!(grid.x_end > 0.0) || !std::isfinite(grid.x_end)) throw InvalidArgument("grid end must be positive");
    if (!(grid.margin >= 0.0 && grid.margin < 1.0)) throw InvalidArgument("margin must lie in [0,1)");
    if (grid.x_start() < lower_bound) {
        std::ostringstream os;
        os << "grid start " << grid.x_start() << " is below max(x0, x_min) = " << lower_bound
           << "; raise the grid end or use fewer windows";
        throw InvalidArgument(os.str());
    }
}

double checked_ratio(double log_ratio, double x, const std::string& label) {
    if (std::isnan(log_ratio) || log_ratio == std::numeric_limits<double>::infinity()) {
        std::ostringstream os;
        os << "density '" << label << "' is not positive and finite near x = " << x;
        throw DomainError(os.str());
    }
    return std::exp(log_ratio);
}

// Windowed sups of right(x) and, when given, left(x) over the grid.
GammaEstimate scan(GammaKind kind, const GridSpec& grid, const std::function<double(double)>& right,
                   const std::function<double(double)>& left) {
    GammaEstimate est;
    est.kind = kind;
    est.margin = grid.margin;
    double start = grid.x_start();
    for (int w = 0; w < grid.windows; ++w) {
        WindowSup ws{start, start * 10.0, 0.0, 0.0, 0.0};
        for (int i = 0; i <= grid.points_per_window; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(grid.points_per_window);
            const double x = start * std::pow(10.0, t);
            ws.sup_plus = std::max(ws.sup_plus, right(x));
            if (left) ws.sup_minus = std::max(ws.sup_minus, left(x));
        }
        ws.sup_ratio = std::max(ws.sup_plus, ws.sup_minus);
        est.windows.push_back(ws);
        start *= 10.0;
    }
    for (const auto& ws : est.windows) {
        est.extrapolated = std::max(est.extrapolated, ws.sup_ratio);
        est.extrapolated_plus = std::max(est.extrapolated_plus, ws.sup_plus);
        est.extrapolated_minus = std::max(est.extrapolated_minus, ws.sup_minus);
    }
    est.verdict = classify_windows(est.windows, grid.margin);
    return est;
}

}  // namespace

GammaEstimate gamma1(const TailDensity& d, const PhiSpec& phi, const GridSpec& grid) {
    if (d.support() != SupportKind::Hamburger) throw InvalidArgument("gamma1 needs a HAMBURGER density");
    check_grid(grid, std::max(d.x0(), phi.x_min));
    auto right = [&](double x) { return checked_ratio(d.log_ratio(x, phi.phi(x)), x, d.label()); };
    auto left = [&](double x) { return checked_ratio(d.log_ratio(-x, -phi.phi(x)), -x, d.label()); };
    return scan(GammaKind::G1, grid, right, left);
}

GammaEstimate gamma2(const TailDensity& g, const PhiSpec& phi, const GridSpec& grid) {
    if (g.support() != SupportKind::Stieltjes) throw InvalidArgument("gamma2 needs a STIELTJES density");
    check_grid(grid, std::max(std::sqrt(g.x0()), phi.x_min));
    auto right = [&](double x) {
        const double s = phi.phi(x);
        return checked_ratio(g.log_ratio(x * x, s * (2.0 * x + s)), x, g.label());
    };
    GammaEstimate est = scan(GammaKind::G2, grid, right, {});

    // phi(x)/x -> 0: small at the grid end and decreasing over the last decade.
    const double x_end = grid.x_end;
    bool side_ok = phi.phi(x_end) / x_end <= 1e-3;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid.points_per_window && side_ok; ++i) {
        const double x = x_end / 10.0 * std::pow(10.0, static_cast<double>(i) / grid.points_per_window);
        const double r = phi.phi(x) / x;
        if (r > prev) side_ok = false;
        prev = r;
    }
    if (!side_ok) {
        est.side_condition_failed = true;
        est.verdict = Verdict::Inconclusive;
        est.note = "side condition phi(x)/x -> 0 not observed on the grid";
    }
    return est;
}

GammaEstimate gamma3(const TailDensity& g, const PhiSpec& phi, const GridSpec& grid) {
    if (g.support() != SupportKind::Stieltjes) throw InvalidArgument("gamma3 needs a STIELTJES density");
    check_grid(grid, std::max(g.x0(), phi.x_min));
    auto right = [&](double x) { return checked_ratio(g.log_ratio(x, phi.phi(x)), x, g.label()); };
    return scan(GammaKind::G3, grid, right, {});
}

}  // namespace mdet
