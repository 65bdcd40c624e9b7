// kantocheck: conformance campaigns, constant sweeps and sharpness hunts.
//
//   kantocheck run   [--config FILE] [--suite ID...] [--seed N] [--tol X] [--out DIR]
//   kantocheck sweep [--config FILE] [--out DIR]
//   kantocheck hunt  [--config FILE] [--seed N] [--tol X] [--out DIR]
//   kantocheck show  REPORT
//
// Exit codes: 0 pass, 1 conformance failure, 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kanto/campaign.hpp"

namespace {

using kanto::Json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_suite) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    if (with_suite) {
        cmd->add_option("--suite", flags.suites, "restrict to these suites (repeatable)")
            ->delimiter(',');
    }
    cmd->add_option("--seed", flags.seed, "base seed");
    cmd->add_option("--tol", flags.tol, "relative Loewner tolerance");
    cmd->add_option("--out", flags.out, "output directory");
}

Json load_config_file(const std::string& path) {
    if (path.empty()) return Json::object();
    return kanto::read_json_file(path);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kanto::ConfigError("cannot write " + path.string());
    out << text;
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.3e", v);
    return buffer;
}

void print_suite_table(const std::vector<kanto::SuiteSummary>& suites) {
    std::printf("%-26s %6s %9s %9s %7s %6s %6s %11s\n", "theorem_id", "cells", "instances",
                "pass", "tight", "fail", "error", "worst_slack");
    for (const auto& s : suites) {
        std::printf("%-26s %6d %9d %9d %7d %6d %6d %11s\n", s.theorem_id.c_str(), s.cells,
                    s.instances, s.pass, s.tight, s.fail, s.errors, fmt(s.worst_slack).c_str());
    }
}

int cmd_run(const CommonFlags& flags, const std::string& replay, std::optional<int> samples,
            int threads, bool all_reports, bool corpus) {
    kanto::CampaignConfig config;
    if (!replay.empty()) {
        config = kanto::config_from_report(replay);
    } else {
        config = kanto::config_from_json(load_config_file(flags.config_path));
    }
    if (!flags.suites.empty()) config.suites = flags.suites;
    if (flags.seed) config.base_seed = *flags.seed;
    if (flags.tol) config.rel_tol = *flags.tol;
    if (!flags.out.empty()) config.output_dir = flags.out;
    if (samples) config.samples_per_cell = *samples;
    if (threads > 0) config.threads = threads;
    if (all_reports) config.report_detail = kanto::ReportDetail::all;
    if (corpus) config.write_corpus = true;

    const kanto::CampaignSummary summary = kanto::run_campaign(config);
    print_suite_table(summary.suites);
    for (const auto& cell : summary.cells) {
        if (cell.fail + cell.errors == 0) continue;
        std::printf("FAIL %s: %d/%d failed, %d errors, worst slack %s (seed %llu)\n",
                    cell.cell.label().c_str(), cell.fail, cell.samples, cell.errors,
                    fmt(cell.worst_slack).c_str(), static_cast<unsigned long long>(cell.worst_seed));
        for (const auto& message : cell.error_messages) std::printf("     %s\n", message.c_str());
    }
    std::printf("oracle max |closed - oracle| = %s; wall time %.1f s; reports in %s\n",
                fmt(summary.oracle_max_deviation).c_str(), summary.wall_seconds,
                config.output_dir.c_str());
    std::printf("%s\n", summary.conformant() ? "CONFORMANT" : "NOT CONFORMANT");
    return summary.conformant() ? kExitPass : kExitFail;
}

int cmd_sweep(const CommonFlags& flags) {
    const Json file = load_config_file(flags.config_path);
    kanto::SweepConfig config = file.contains("sweep") ? kanto::sweep_config_from_json(file.at("sweep"))
                                                       : kanto::SweepConfig::defaults();
    if (flags.tol) config.rel_tol = *flags.tol;
    const std::string out = flags.out.empty() ? "kanto-sweep" : flags.out;

    const auto rows = kanto::sweep_constants(config);
    std::filesystem::create_directories(out);
    write_file(std::filesystem::path(out) / "constants.csv", kanto::sweep_csv(rows));
    for (const auto& [stem, svg] : kanto::sweep_charts(rows)) {
        write_file(std::filesystem::path(out) / (stem + ".svg"), svg);
    }

    std::map<std::string, std::pair<int, double>> per_constant;
    int outside = 0;
    for (const auto& row : rows) {
        auto& [count, worst] = per_constant[row.constant_name];
        ++count;
        worst = std::max(worst, row.abs_diff);
        if (!row.within(config.rel_tol)) {
            ++outside;
            std::printf("MISMATCH m=%g M=%g p=%g q=%g %s closed=%.17g oracle=%.17g\n", row.m,
                        row.big_m, row.p, row.q, row.constant_name.c_str(), row.closed_form,
                        row.oracle);
        }
    }
    std::printf("%-8s %6s %14s\n", "constant", "rows", "max_abs_diff");
    for (const auto& [name, stats] : per_constant) {
        std::printf("%-8s %6d %14s\n", name.c_str(), stats.first, fmt(stats.second).c_str());
    }
    std::printf("%zu rows written to %s/constants.csv; %d outside relative tolerance %g\n",
                rows.size(), out.c_str(), outside, config.rel_tol);
    return outside == 0 ? kExitPass : kExitFail;
}

int cmd_hunt(const CommonFlags& flags, const std::vector<std::string>& relaxations,
             std::optional<int> instances) {
    const Json file = load_config_file(flags.config_path);
    kanto::HuntConfig config = file.contains("hunt") ? kanto::hunt_config_from_json(file.at("hunt"))
                                                     : kanto::HuntConfig::defaults();
    if (!relaxations.empty()) config.relaxations = relaxations;
    if (flags.seed) config.base_seed = *flags.seed;
    if (flags.tol) config.rel_tol = *flags.tol;
    if (instances) config.instances = *instances;
    const std::string out = flags.out.empty() ? "kanto-hunt" : flags.out;

    const auto findings = kanto::hunt_sharpness(config);
    Json header;
    header["kind"] = "hunt_report";
    header["format"] = 1;
    header["base_seed"] = config.base_seed;
    header["instances"] = config.instances;
    header["rel_tol"] = config.rel_tol;
    header["relaxations"] = config.relaxations;
    std::ostringstream report;
    report << header.dump() << '\n';
    bool conformance_violated = false;
    std::printf("%-24s %-32s %9s %10s %12s\n", "relaxation", "check", "instances", "violations",
                "max_violation");
    for (const auto& f : findings) {
        report << kanto::hunt_finding_to_json(f).dump() << '\n';
        std::string check = f.check;
        for (const auto& [name, value] : f.params) check += " " + name + "=" + kanto::format_double(value);
        std::printf("%-24s %-32s %9d %10d %12s\n", f.relaxation.c_str(), check.c_str(), f.instances,
                    f.violations, fmt(f.max_violation).c_str());
        if (f.conformance && f.violations > 0) conformance_violated = true;
    }
    std::filesystem::create_directories(out);
    write_file(std::filesystem::path(out) / "sharpness.jsonl", report.str());
    std::printf("findings written to %s/sharpness.jsonl\n", out.c_str());
    return conformance_violated ? kExitFail : kExitPass;
}

int cmd_show(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kanto::ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw kanto::ConfigError(path + " is empty");
    const Json header = Json::parse(line);
    const std::string kind = header.value("kind", "");
    if (kind == "campaign_report") {
        std::printf("campaign report %s: config_hash %s, base_seed %llu\n", path.c_str(),
                    header.at("config_hash").get<std::string>().c_str(),
                    static_cast<unsigned long long>(header.at("base_seed").get<std::uint64_t>()));
        std::vector<kanto::SuiteSummary> suites;
        std::vector<std::string> failing;
        while (std::getline(in, line)) {
            const Json j = Json::parse(line);
            if (j.value("kind", "") != "cell") continue;
            const std::string id = j.at("theorem_id").get<std::string>();
            auto found = std::find_if(suites.begin(), suites.end(),
                                      [&](const auto& s) { return s.theorem_id == id; });
            if (found == suites.end()) {
                suites.push_back({id});
                suites.back().worst_slack = std::numeric_limits<double>::infinity();
                found = suites.end() - 1;
            }
            ++found->cells;
            found->instances += j.at("samples").get<int>();
            found->pass += j.at("pass").get<int>();
            found->tight += j.at("tight").get<int>();
            found->fail += j.at("fail").get<int>();
            found->errors += j.at("errors").get<int>();
            found->worst_slack = std::min(found->worst_slack, j.at("worst_slack").get<double>());
            if (j.at("fail").get<int>() + j.at("errors").get<int>() > 0) {
                failing.push_back(id + " window " + j.at("window").dump() + " dim " +
                                  std::to_string(j.at("dim").get<int>()) + " params " +
                                  j.at("params").dump() + ": " +
                                  std::to_string(j.at("fail").get<int>()) + " failed");
            }
        }
        print_suite_table(suites);
        for (const auto& f : failing) std::printf("FAIL %s\n", f.c_str());
        return kExitPass;
    }
    if (kind == "hunt_report") {
        std::printf("hunt report %s: base_seed %llu\n", path.c_str(),
                    static_cast<unsigned long long>(header.at("base_seed").get<std::uint64_t>()));
        std::printf("%-24s %-24s %-28s %9s %10s %12s\n", "relaxation", "check", "params",
                    "instances", "violations", "max_violation");
        while (std::getline(in, line)) {
            const Json j = Json::parse(line);
            std::printf("%-24s %-24s %-28s %9d %10d %12s\n",
                        j.at("relaxation").get<std::string>().c_str(),
                        j.at("check").get<std::string>().c_str(), j.at("params").dump().c_str(),
                        j.at("instances").get<int>(), j.at("violations").get<int>(),
                        fmt(j.at("max_violation").get<double>()).c_str());
        }
        return kExitPass;
    }
    throw kanto::ConfigError(path + " is not a kantocheck report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kantocheck: numerical conformance checks for Kantorovich-type operator inequalities"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string replay;
    std::optional<int> samples;
    int threads = 0;
    bool all_reports = false;
    bool corpus = false;
    auto* run = app.add_subcommand("run", "run the conformance campaign");
    add_common(run, run_flags, true);
    run->add_option("--samples", samples, "samples per parameter cell");
    run->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
    run->add_option("--replay", replay, "re-run the configuration embedded in a report");
    run->add_flag("--all-reports", all_reports, "write every chain report, not only failures");
    run->add_flag("--corpus", corpus, "also write the generated corpus as JSON lines");

    CommonFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "compare closed-form constants with the grid oracle");
    add_common(sweep, sweep_flags, false);

    CommonFlags hunt_flags;
    std::vector<std::string> relaxations;
    std::optional<int> instances;
    auto* hunt = app.add_subcommand("hunt", "fuzz relaxed hypotheses for sharpness witnesses");
    add_common(hunt, hunt_flags, false);
    hunt->add_option("--relaxation", relaxations, "relaxations to run (repeatable)")->delimiter(',');
    hunt->add_option("--instances", instances, "instances per relaxation");

    std::string report_path;
    auto* show = app.add_subcommand("show", "print a summary table for a report file");
    show->add_option("report", report_path, "report.jsonl or sharpness.jsonl")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_flags, replay, samples, threads, all_reports, corpus);
        if (*sweep) return cmd_sweep(sweep_flags);
        if (*hunt) return cmd_hunt(hunt_flags, relaxations, instances);
        if (*show) return cmd_show(report_path);
    } catch (const kanto::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
