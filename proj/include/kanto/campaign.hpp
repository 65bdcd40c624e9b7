#pragma once

// Configuration-driven campaigns: conformance runs over seeded corpora,
// constant sweeps against the grid oracle, and sharpness hunts that relax
// one hypothesis at a time.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kanto/io.hpp"
#include "kanto/verifiers.hpp"

namespace kanto {

struct ParameterGrids {
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> r;
    std::vector<double> alpha;
    /// Exponents for the p >= 1 suite.
    std::vector<double> p_pos;
};

struct GridOverride {
    std::optional<std::vector<double>> p;
    std::optional<std::vector<double>> q;
    std::optional<std::vector<double>> r;
    std::optional<std::vector<double>> alpha;
    std::optional<std::vector<double>> p_pos;
};

enum class ReportDetail { failures, all };

struct CampaignConfig {
    std::vector<std::string> suites;
    std::vector<int> dims;
    std::vector<SpectralWindow> windows;
    ParameterGrids grids;
    std::map<std::string, GridOverride> suite_grids;
    int samples_per_cell = 200;
    std::uint64_t base_seed = 1;
    double rel_tol = 1e-8;
    ReportDetail report_detail = ReportDetail::failures;

    // Runtime settings; not part of the hashed configuration.
    std::string output_dir = "kanto-out";
    int threads = 0;
    bool write_corpus = false;

    static CampaignConfig defaults();
    ParameterGrids grids_for(const std::string& suite) const;
};

/// Every conformance suite, in report order.
const std::vector<std::string>& all_suites();

/// Missing fields keep their defaults; unknown keys and wrong types throw ConfigError.
CampaignConfig config_from_json(const Json& j);
/// Canonical form embedded in report headers; runtime settings are omitted.
Json config_to_json(const CampaignConfig& config);
std::string config_hash(const CampaignConfig& config);

/// Checks every grid against its suite's regime; throws ConfigError naming the cell.
void validate_config(const CampaignConfig& config);

struct Cell {
    std::string suite;
    std::string theorem_id;
    SpectralWindow window;
    int dim = 0;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::pair<std::string, std::string>> tags;

    double param(const std::string& name) const;
    std::string label() const;
};

std::vector<Cell> expand_cells(const CampaignConfig& config);

struct CellResult {
    Cell cell;
    int samples = 0;
    int pass = 0;
    int tight = 0;
    int fail = 0;
    /// Instances whose check threw; counted against conformance.
    int errors = 0;
    double worst_slack = 0.0;
    std::uint64_t worst_seed = 0;
    std::vector<std::string> warnings;
    std::vector<std::string> error_messages;
    std::vector<ChainReport> reports;
};

struct SuiteSummary {
    std::string theorem_id;
    int cells = 0;
    int instances = 0;
    int pass = 0;
    int tight = 0;
    int fail = 0;
    int errors = 0;
    double worst_slack = 0.0;
};

struct CampaignSummary {
    std::vector<SuiteSummary> suites;
    std::vector<CellResult> cells;
    /// Largest absolute closed-form vs oracle deviation over the configured grids.
    double oracle_max_deviation = 0.0;
    double wall_seconds = 0.0;

    int total_failures() const;
    bool conformant() const { return total_failures() == 0; }
};

/// Runs every cell and, when output_dir is non-empty, writes report.jsonl,
/// summary.csv and summary.json there. Deterministic for a fixed config.
CampaignSummary run_campaign(const CampaignConfig& config);

/// Reads the header of a campaign report and returns the embedded config.
CampaignConfig config_from_report(const std::string& report_path);

// ---------------------------------------------------------------------------
// Constant sweeps

struct SweepConfig {
    std::vector<SpectralWindow> windows;
    std::vector<double> p;
    std::vector<double> q;
    double alpha = 1.0;
    /// Subset of K, K2, C2, C, beta.
    std::vector<std::string> constants;
    double rel_tol = 1e-6;

    static SweepConfig defaults();
};

struct SweepRow {
    double m = 0.0;
    double big_m = 0.0;
    double p = 0.0;
    double q = 0.0;
    std::string constant_name;
    double closed_form = 0.0;
    double oracle = 0.0;
    double abs_diff = 0.0;

    /// |closed - oracle| <= rel_tol |oracle| + 1e-12.
    bool within(double rel_tol) const;
};

/// Reads the optional "sweep" section of a config file.
SweepConfig sweep_config_from_json(const Json& j);

std::vector<SweepRow> sweep_constants(const SweepConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// One chart per window: K2 against q, one polyline per p. Pairs of (file stem, svg).
std::vector<std::pair<std::string, std::string>> sweep_charts(const std::vector<SweepRow>& rows);

// ---------------------------------------------------------------------------
// Sharpness hunts

struct HuntConfig {
    std::vector<std::string> relaxations;
    std::vector<SpectralWindow> windows;
    std::vector<int> dims;
    int instances = 10000;
    std::uint64_t base_seed = 1;
    double rel_tol = 1e-8;

    static HuntConfig defaults();
};

const std::vector<std::string>& all_relaxations();

/// Reads the optional "hunt" section of a config file.
HuntConfig hunt_config_from_json(const Json& j);

struct HuntFinding {
    std::string relaxation;
    std::string check;
    std::vector<std::pair<std::string, double>> params;
    int instances = 0;
    int violations = 0;
    /// Most negative slack observed; 0 when nothing was violated.
    double max_violation = 0.0;
    /// Serialized worst instance and its report, null when there is none.
    Json witness;
    /// true only for the unrelaxed baseline, whose violations are conformance failures.
    bool conformance = false;
};

std::vector<HuntFinding> hunt_sharpness(const HuntConfig& config);
Json hunt_finding_to_json(const HuntFinding& finding);

/// A <= B with A^2 <= B^2 failing: the fixed order-preservation counterexample.
CertifiedPair square_negative_control();

}  // namespace kanto
