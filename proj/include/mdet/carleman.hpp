#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mdet/density.hpp"
#include "mdet/moments.hpp"

namespace mdet {

enum class Diagnosis { Divergent, Convergent, Inconclusive };

std::string_view to_string(Diagnosis d);

struct CarlemanOptions {
    double delta_fit = 0.05;  ///< DIVERGENT when the fitted exponent p <= 1 - delta_fit
    double delta_geo = 0.05;  ///< CONVERGENT when log(term_n)/n <= -delta_geo across the fit window
};

/// Carleman series for (C_H) (terms m_{2n}^{-1/(2n)}) or (C_S) (terms
/// m_n^{-1/(2n)}). The diagnosis is a heuristic on finitely many terms,
/// never a proof of divergence.
struct CarlemanDiagnosis {
    SupportKind kind;
    std::vector<double> terms;         ///< index i holds the term of order n = i + 1
    std::vector<double> partial_sums;
    double growth_exponent = 0.0;      ///< p in log term_n ~ -p log n + c
    int fit_from = 0;
    int fit_to = 0;
    Diagnosis diagnosis = Diagnosis::Inconclusive;
    std::string note;
};

/// Throws InvalidArgument for kind HAMBURGER on a STIELTJES table (the
/// full-line problem needs a symmetrized density).
CarlemanDiagnosis carleman_terms(const MomentTable& table, SupportKind kind,
                                 const CarlemanOptions& options = {});

/// Partial sums of the two lower-bound series that close the Theorem 1 proof:
///   sum_{n=2..N} d0^{-1/(2n)} c^{-1/2} (n log n)^{-1/2}      (for |X|)
///   sum_{n=1..N} d0^{-1/(2n)} c^{-1} (2n log 2n)^{-1}         (for X)
struct DivergenceBoundSums {
    std::vector<double> abs_moment_series;   ///< index i is the partial sum up to n = i + 2
    std::vector<double> even_moment_series;  ///< index i is the partial sum up to n = i + 1
};

DivergenceBoundSums bound_implies_divergence(double d0, double c, int N);

}  // namespace mdet
