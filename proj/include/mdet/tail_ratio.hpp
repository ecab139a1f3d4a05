#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mdet/density.hpp"
#include "mdet/phi.hpp"

namespace mdet {

enum class GammaKind { G1, G2, G3 };
enum class Verdict { Satisfied, Failed, Inconclusive };

std::string_view to_string(GammaKind k);
std::string_view to_string(Verdict v);

/// Geometric grid for the limsup estimate: `windows` consecutive decades
/// ending at x_end, each sampled at points_per_window + 1 points
/// x = start * 10^(i / points_per_window).
struct GridSpec {
    double x_end = 1e8;
    int windows = 5;
    int points_per_window = 200;
    double margin = 0.05;

    double x_start() const;
};

struct WindowSup {
    double start;
    double end;
    double sup_ratio;
    double sup_plus;   ///< right tail (all kinds)
    double sup_minus;  ///< left tail (G1 only, 0 otherwise)
};

struct GammaEstimate {
    GammaKind kind;
    std::vector<WindowSup> windows;
    double extrapolated = 0.0;        ///< max of window sups
    double extrapolated_plus = 0.0;   ///< gamma_{1,+} estimate (or the one-sided value)
    double extrapolated_minus = 0.0;  ///< gamma_{1,-} estimate (G1 only)
    double margin = 0.05;
    Verdict verdict = Verdict::Inconclusive;
    bool side_condition_failed = false;  ///< G2: phi(x)/x -> 0 not observed
    std::string note;
};

/// Verdict rule shared by all three estimates: SATISFIED when the largest
/// window sup is <= 1 - margin; FAILED when every window sup is
/// >= 1 - margin/2 and they are non-decreasing; INCONCLUSIVE otherwise.
Verdict classify_windows(const std::vector<WindowSup>& windows, double margin);

/// limsup over |x| of f(x + sign(x) phi(|x|)) / f(x), both tails.
GammaEstimate gamma1(const TailDensity& d, const PhiSpec& phi, const GridSpec& grid = {});

/// limsup of g((x + phi(x))^2) / g(x^2), plus the side condition phi(x)/x -> 0.
GammaEstimate gamma2(const TailDensity& g, const PhiSpec& phi, const GridSpec& grid = {});

/// limsup of g(x + phi(x)) / g(x).
GammaEstimate gamma3(const TailDensity& g, const PhiSpec& phi, const GridSpec& grid = {});

}  // namespace mdet
