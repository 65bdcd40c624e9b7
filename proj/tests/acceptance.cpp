// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kanto/campaign.hpp"
#include "kanto/constants.hpp"

using namespace kanto;
namespace fs = std::filesystem;

namespace {

const SpectralWindow kWindows[] = {SpectralWindow(1, 2), SpectralWindow(0.5, 4), SpectralWindow(2, 3)};

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof buffer, pattern, a, b, c);
    return buffer;
}

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    SweepConfig config = SweepConfig::defaults();
    config.constants = {"K", "K2", "C2", "C", "beta"};
    config.rel_tol = 1e-6;
    const std::vector<SweepRow> rows = sweep_constants(config);
    int outside = 0;
    double worst = 0.0;
    for (const SweepRow& row : rows) {
        if (!row.within(config.rel_tol)) ++outside;
        if (std::abs(row.oracle) > 1e-12) worst = std::max(worst, row.abs_diff / std::abs(row.oracle));
    }
    const double elapsed = seconds_since(start);
    verdict(1, outside == 0 && elapsed < 10.0,
            std::to_string(rows.size()) + " constant/oracle pairs, " + std::to_string(outside) +
                " outside 1e-6 relative" + fmt(", worst relative deviation %.2e (|oracle| > 1e-12), %.1f s", worst, elapsed));
}

void criterion_2() {
    double worst = 0.0;
    for (const SpectralWindow& w : kWindows) {
        const double alpha = (w.hi + w.lo) * (w.hi + w.lo) / (4.0 * w.hi * w.lo);
        worst = std::max(worst, std::abs(beta_power_closed(w, -1.0, -1.0, alpha)));
    }
    verdict(2, worst <= 1e-12, fmt("max |beta| at alpha = (M+m)^2/(4Mm): %.2e", worst));
}

struct CampaignRun {
    CampaignSummary summary;
    fs::path dir;
};

CampaignRun default_campaign(const fs::path& dir) {
    CampaignConfig config = CampaignConfig::defaults();
    config.base_seed = 1;
    config.output_dir = dir.string();
    config.write_corpus = true;
    fs::remove_all(dir);
    return {run_campaign(config), dir};
}

void criterion_3(const CampaignRun& run) {
    int instances = 0;
    std::string failing;
    for (const SuiteSummary& s : run.summary.suites) {
        instances += s.instances;
        if (s.fail + s.errors > 0) {
            failing += " " + s.theorem_id + " (" + std::to_string(s.fail) + " failed, " +
                       std::to_string(s.errors) + " errors)";
        }
    }
    std::string detail = std::to_string(run.summary.cells.size()) + " cells, " +
                         std::to_string(instances) + " instances, " +
                         std::to_string(run.summary.total_failures()) + " failures" +
                         fmt(", %.1f s", run.summary.wall_seconds);
    if (!failing.empty()) detail += ";" + failing;
    verdict(3, run.summary.conformant() && run.summary.wall_seconds < 300.0, detail);
    for (const CellResult& cell : run.summary.cells) {
        if (cell.fail + cell.errors == 0) continue;
        std::printf("    failing cell: %s  %d/%d, worst slack %.3e at seed %llu\n",
                    cell.cell.label().c_str(), cell.fail + cell.errors, cell.samples,
                    cell.worst_slack, static_cast<unsigned long long>(cell.worst_seed));
    }
}

void criterion_4() {
    double worst_link = 0.0;
    double worst_chord = 0.0;
    for (const SpectralWindow& w : kWindows) {
        const HermitianMatrix ends = HermitianMatrix::diagonal(RealVector{{w.lo, w.hi}});
        const CertifiedPair pair{ends, ends, w, Certificate::dominated, 0};
        for (double p : {-3.0, -2.0, -1.0, -0.5, -0.25}) {
            const ChordCoefficients chord = power_chord(w, p);
            for (double q : {-1.0, -0.75, -0.5, -0.25}) {
                const ChainReport report = check_corollary_2_3(pair, p, q);
                worst_link = std::max(worst_link, std::abs(report.links[0].min_slack));

                const double k = kantorovich_K2(w, p, q);
                // min_t (K2 t^q - chord) = -max_t (chord - K2 t^q), located by the grid oracle
                const double lowest =
                    -grid_max_1d([&](double t) { return chord(t) - k * std::pow(t, q); }, w).value;
                worst_chord = std::max(worst_chord, std::abs(lowest));
            }
        }
    }
    verdict(4, worst_link < 1e-10 && worst_chord <= 1e-8,
            fmt("max |first-link slack| on diag(m, M): %.2e; max |min_t K2 t^q - (a t + b)|: %.2e",
                worst_link, worst_chord));
}

void criterion_5(const CampaignRun& run) {
    HuntConfig hunt = HuntConfig::defaults();
    hunt.relaxations = {"negative_control_square", "drop_dominance"};
    hunt.instances = 10000;
    const std::vector<HuntFinding> findings = hunt_sharpness(hunt);
    const double square_slack = findings[0].max_violation;
    const int dropped = findings[1].violations;

    int chaotic = 0;
    int not_dominated = 0;
    std::uint64_t witness_seed = 0;
    std::istringstream corpus(slurp(run.dir / "corpus.jsonl"));
    for (const CertifiedPair& pair : read_corpus(corpus)) {
        if (pair.certificate != Certificate::chaotic) continue;
        ++chaotic;
        if (!loewner_leq(pair.a, pair.b).holds &&
            loewner_leq(matrix_log(pair.a), matrix_log(pair.b)).holds) {
            if (not_dominated++ == 0) witness_seed = pair.seed;
        }
    }
    const bool ok = square_slack <= -0.1 && not_dominated > 0 && dropped > 0;
    verdict(5, ok,
            fmt("(a) A^2 <= B^2 slack %.4f; ", square_slack) + "(b) " +
                std::to_string(not_dominated) + "/" + std::to_string(chaotic) +
                " corpus chaotic pairs fail A <= B (first seed " + std::to_string(witness_seed) +
                "); (c) " + std::to_string(dropped) + "/" + std::to_string(findings[1].instances) +
                " corollary 2.2 violations without A <= B");
}

void criterion_6() {
    RngState rng(6);
    double worst_convexity = 0.0;
    double worst_double = 0.0;
    int configurations = 0;
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -2.0, -1.0, -0.5, -0.25, -0.05, 0.0}) {
            ++configurations;
            const double f_lo = std::pow(w.lo, p);
            const double f_hi = std::pow(w.hi, p);
            const ChordCoefficients chord = power_chord(w, p);
            for (int i = 0; i < 10000; ++i) {
                // f((1-v)s + v t) <= f(s)^(1-v) f(t)^v
                const double s = rng.uniform(w.lo, w.hi);
                const double t = rng.uniform(w.lo, w.hi);
                const double v = rng.uniform();
                const double lhs = std::pow((1 - v) * s + v * t, p);
                const double rhs = std::pow(std::pow(s, p), 1 - v) * std::pow(std::pow(t, p), v);
                worst_convexity = std::min(worst_convexity, rhs - lhs);

                // t^p <= G(t) <= a t + b
                const double x = i == 0 ? w.lo : (i == 1 ? w.hi : rng.uniform(w.lo, w.hi));
                const double g = log_interpolant(x, w, f_lo, f_hi);
                worst_double = std::min(worst_double, g - std::pow(x, p));
                worst_double = std::min(worst_double, chord(x) - g);
            }
        }
    }
    verdict(6, worst_convexity >= -1e-12 && worst_double >= -1e-12,
            std::to_string(configurations) + " configurations x 10^4 points" +
                fmt("; worst log-convexity slack %.2e, worst interpolation slack %.2e",
                    worst_convexity, worst_double));
}

void criterion_7(const CampaignRun& first, const fs::path& second_dir) {
    const CampaignRun second = default_campaign(second_dir);
    bool identical = true;
    std::string compared;
    for (const char* name : {"report.jsonl", "summary.csv", "corpus.jsonl"}) {
        const std::string a = slurp(first.dir / name);
        const std::string b = slurp(second.dir / name);
        identical = identical && !a.empty() && a == b;
        compared += std::string(" ") + name + " (" + std::to_string(a.size()) + " bytes)";
    }
    verdict(7, identical, std::string(identical ? "byte-identical:" : "differ:") + compared);
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path work =
        argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "kanto_acceptance";
    fs::create_directories(work);
    try {
        criterion_1();
        criterion_2();
        const CampaignRun run = default_campaign(work / "run1");
        criterion_3(run);
        criterion_4();
        criterion_5(run);
        criterion_6();
        criterion_7(run, work / "run2");
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
