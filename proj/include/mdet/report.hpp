#pragma once

// Orchestration: density -> phi certificate -> gamma estimates -> moments
// -> Carleman -> theorem verdicts, plus text and JSON rendering.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdet/carleman.hpp"
#include "mdet/density.hpp"
#include "mdet/errors.hpp"
#include "mdet/moments.hpp"
#include "mdet/phi.hpp"
#include "mdet/tail_ratio.hpp"

namespace mdet {

inline constexpr int kReportSchemaVersion = 1;

/// An error raised inside one pipeline stage, tagged with where it happened.
class StageError : public Error {
public:
    StageError(std::string module, std::string stage, const std::string& detail)
        : Error(module + " / " + stage + ": " + detail), module_(std::move(module)), stage_(std::move(stage)) {}
    const std::string& module() const noexcept { return module_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string module_;
    std::string stage_;
};

enum class GammaSelection { Auto, G1, G2, G3 };

std::string_view to_string(GammaSelection g);
GammaSelection parse_gamma_selection(std::string_view s);

struct AnalyzeConfig {
    // Exactly one of dist / density_expr is set.
    std::optional<std::string> dist;          ///< "name" or "name:p1,p2"
    std::optional<std::string> density_expr;  ///< expression source in x
    std::optional<SupportKind> support;       ///< required with density_expr; optional override for dist
    double x0 = 1.0;                          ///< tail threshold for density_expr
    bool normalize = false;                   ///< self-normalise density_expr by quadrature

    PhiFamily phi_family = PhiFamily::LogPow;
    double a = 1.0;
    double alpha = 1.0;

    int n_max = 40;
    GammaSelection gamma = GammaSelection::Auto;
    GridSpec grid;
};

/// Grid end from MDET_GRID_END when set and valid, otherwise the default 1e8.
double default_grid_end();

/// The density named by the config together with its catalog entry, if any.
struct ResolvedDensity {
    TailDensity density;
    std::optional<CatalogEntry> entry;
};

ResolvedDensity resolve_density(const AnalyzeConfig& config);
PhiSpec resolve_phi(const AnalyzeConfig& config);

struct TheoremVerdict {
    int theorem = 0;
    bool applies = false;
    std::string conclusion;  ///< set when applies
    std::string reason;      ///< why it does not apply, otherwise empty
};

enum class CheckStatus { Pass, Fail, Info };

std::string_view to_string(CheckStatus s);

struct CheckRow {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

struct ProofReport {
    std::string input_echo;
    std::vector<CheckRow> rows;
    bool all_passed() const;
};

struct DeterminacyReport {
    std::string input_echo;
    std::string density_label;
    SupportKind support = SupportKind::Hamburger;
    std::optional<Classification> classification;
    std::string classification_source;
    PhiSpec phi;
    ConditionCertificate phi_certificate;
    GridSpec grid;
    std::vector<GammaEstimate> gammas;
    std::optional<MomentTable> moments;
    std::string moments_note;  ///< why moments were skipped, if they were
    std::vector<CarlemanDiagnosis> carleman;
    std::vector<TheoremVerdict> theorem_verdicts;
    std::string conclusion;
    std::optional<ProofReport> proof_checks;

    bool any_theorem_applies() const;
};

/// Throws StageError for failures inside a stage, InvalidArgument for a bad config.
DeterminacyReport analyze(const AnalyzeConfig& config);

/// Lemma oracles, proof constants, proof-integral bounds and the moment
/// recursion for the configured density and phi.
ProofReport verify_proofs(const AnalyzeConfig& config);

/// Density-independent oracles: Lemma 1 and 2 grids, the constants
/// arithmetic, the divergence series and the symmetrization identities.
ProofReport selftest();

enum class ReportFormat { Text, Json };

std::string render(const DeterminacyReport& report, ReportFormat format);
std::string render(const ProofReport& report, ReportFormat format);

/// Catalog listing with default parameters and classifications.
std::string render_catalog(ReportFormat format);

}  // namespace mdet
