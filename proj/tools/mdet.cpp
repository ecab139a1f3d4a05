#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mdet/errors.hpp"
#include "mdet/report.hpp"

namespace {

struct Options {
    std::string dist;
    std::string density_expr;
    std::string support;
    double x0 = 1.0;
    bool normalize = false;
    std::string phi = "logpow";
    double a = 1.0;
    double alpha = 1.0;
    int nmax = 40;
    std::string gamma = "auto";
    std::optional<double> grid_end;
    int windows = 5;
    double margin = 0.05;
    std::string report = "text";
};

void add_density_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--dist", o.dist, "catalog density as name or name:p1,p2,...");
    cmd->add_option("--density-expr", o.density_expr, "density expression in x (see docs/expression-grammar.md)");
    cmd->add_option("--support", o.support, "R (full line) or R+ (half line)")->check(CLI::IsMember({"R", "R+"}));
    cmd->add_option("--x0", o.x0, "tail threshold for --density-expr");
    cmd->add_flag("--normalize", o.normalize, "normalise --density-expr by quadrature");
    cmd->add_option("--phi", o.phi, "logpow, logpow+loglog or logpow*loglog");
    cmd->add_option("--a", o.a, "phi scale a > 0");
    cmd->add_option("--alpha", o.alpha, "phi exponent alpha");
    cmd->add_option("--nmax", o.nmax, "largest moment order");
    cmd->add_option("--grid-end", o.grid_end, "gamma grid end (default 1e8 or MDET_GRID_END)");
    cmd->add_option("--windows", o.windows, "number of decade windows");
    cmd->add_option("--margin", o.margin, "verdict margin");
    cmd->add_option("--report", o.report, "text or json")->check(CLI::IsMember({"text", "json"}));
}

mdet::AnalyzeConfig to_config(const Options& o) {
    mdet::AnalyzeConfig c;
    if (!o.dist.empty()) c.dist = o.dist;
    if (!o.density_expr.empty()) c.density_expr = o.density_expr;
    if (!o.support.empty()) {
        c.support = o.support == "R" ? mdet::SupportKind::Hamburger : mdet::SupportKind::Stieltjes;
    }
    c.x0 = o.x0;
    c.normalize = o.normalize;
    c.phi_family = mdet::parse_phi_family(o.phi);
    c.a = o.a;
    c.alpha = o.alpha;
    c.n_max = o.nmax;
    c.gamma = mdet::parse_gamma_selection(o.gamma);
    c.grid.x_end = o.grid_end ? *o.grid_end : mdet::default_grid_end();
    c.grid.windows = o.windows;
    c.grid.margin = o.margin;
    return c;
}

mdet::ReportFormat format_of(const Options& o) {
    return o.report == "json" ? mdet::ReportFormat::Json : mdet::ReportFormat::Text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdet: moment-determinacy diagnostics for densities with known tails"};
    app.require_subcommand(1);

    Options analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "tail-ratio verdicts, moments and Carleman sums");
    add_density_flags(analyze, analyze_opts);
    analyze->add_option("--gamma", analyze_opts.gamma, "auto, g1, g2 or g3")
        ->check(CLI::IsMember({"auto", "g1", "g2", "g3"}));

    Options verify_opts;
    auto* verify = app.add_subcommand("verify-proofs", "check the lemmas and proof inequalities on a density");
    add_density_flags(verify, verify_opts);

    std::string catalog_report = "text";
    auto* catalog = app.add_subcommand("catalog", "list the reference densities");
    catalog->add_option("--report", catalog_report, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::string selftest_report = "text";
    auto* selftest = app.add_subcommand("selftest", "run the density-independent lemma oracles");
    selftest->add_option("--report", selftest_report, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) {
            const mdet::DeterminacyReport r = mdet::analyze(to_config(analyze_opts));
            std::cout << mdet::render(r, format_of(analyze_opts));
            return r.any_theorem_applies() ? 0 : 2;
        }
        if (verify->parsed()) {
            const mdet::ProofReport p = mdet::verify_proofs(to_config(verify_opts));
            std::cout << mdet::render(p, format_of(verify_opts));
            return p.all_passed() ? 0 : 1;
        }
        if (catalog->parsed()) {
            std::cout << mdet::render_catalog(catalog_report == "json" ? mdet::ReportFormat::Json
                                                                       : mdet::ReportFormat::Text);
            return 0;
        }
        if (selftest->parsed()) {
            const mdet::ProofReport p = mdet::selftest();
            std::cout << mdet::render(p, selftest_report == "json" ? mdet::ReportFormat::Json
                                                                   : mdet::ReportFormat::Text);
            return p.all_passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "mdet: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
