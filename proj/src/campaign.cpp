#include "kanto/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "kanto/constants.hpp"
#include "kanto/svg.hpp"

namespace kanto {

namespace {

constexpr int kFamilySize = 3;
constexpr int kKrausCount = 2;
constexpr std::uint64_t kMapStream = 0x5851F42D4C957F2DULL;
constexpr std::uint64_t kFamilyStream = 0xD1B54A32D192ED03ULL;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return seed * 0x9E3779B97F4A7C15ULL ^ stream;
}

int map_dim_out(int dim) { return std::max(1, dim - 1); }

std::string window_text(const SpectralWindow& w) {
    return "(" + format_double(w.lo) + ", " + format_double(w.hi) + ")";
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, std::max(count, 1));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) body(i);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
}

// --- configuration -------------------------------------------------------

std::vector<double> default_p() { return {-3.0, -2.0, -1.0, -0.5, -0.25}; }

[[noreturn]] void config_fail(const std::string& message) { throw ConfigError(message); }

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) config_fail(where + " must be a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) config_fail("unknown key '" + item.key() + "' in " + where);
    }
}

std::vector<double> read_grid(const Json& j, const std::string& name) {
    if (j.is_object()) {
        require_keys(j, {"from", "to", "count"}, name);
        const double from = j.at("from").get<double>();
        const double to = j.at("to").get<double>();
        const int count = j.at("count").get<int>();
        if (count < 1) config_fail(name + ".count must be at least 1");
        std::vector<double> grid;
        for (int i = 0; i < count; ++i) {
            grid.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
        }
        return grid;
    }
    if (!j.is_array()) config_fail(name + " must be an array of numbers");
    std::vector<double> grid;
    for (const auto& v : j) {
        if (!v.is_number()) config_fail(name + " must contain only numbers");
        grid.push_back(v.get<double>());
    }
    return grid;
}

std::vector<SpectralWindow> read_windows(const Json& j, const std::string& name) {
    if (!j.is_array()) config_fail(name + " must be an array of [m, M] pairs");
    std::vector<SpectralWindow> windows;
    for (const auto& w : j) {
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
            config_fail(name + " entries must be [m, M]");
        }
        const double lo = w[0].get<double>();
        const double hi = w[1].get<double>();
        if (!(lo > 0.0 && lo < hi)) {
            config_fail(name + ": window [" + format_double(lo) + ", " + format_double(hi) +
                        "] needs 0 < m < M");
        }
        windows.emplace_back(lo, hi);
    }
    return windows;
}

std::vector<int> read_dims(const Json& j, const std::string& name) {
    if (!j.is_array()) config_fail(name + " must be an array of integers");
    std::vector<int> dims;
    for (const auto& d : j) {
        if (!d.is_number_integer()) config_fail(name + " must contain integers");
        const int dim = d.get<int>();
        if (dim < 1 || dim > kMaxDim) config_fail(name + ": dim " + std::to_string(dim) + " out of range");
        dims.push_back(dim);
    }
    return dims;
}

Json windows_to_json(const std::vector<SpectralWindow>& windows) {
    Json out = Json::array();
    for (const auto& w : windows) out.push_back(Json::array({w.lo, w.hi}));
    return out;
}

const std::vector<std::string> kGridNames = {"p", "q", "r", "alpha", "p_pos"};

std::vector<double>& grid_field(ParameterGrids& grids, const std::string& name) {
    if (name == "p") return grids.p;
    if (name == "q") return grids.q;
    if (name == "r") return grids.r;
    if (name == "alpha") return grids.alpha;
    return grids.p_pos;
}

std::optional<std::vector<double>>& override_field(GridOverride& grids, const std::string& name) {
    if (name == "p") return grids.p;
    if (name == "q") return grids.q;
    if (name == "r") return grids.r;
    if (name == "alpha") return grids.alpha;
    return grids.p_pos;
}

template <class F>
auto with_config_errors(F&& body) {
    try {
        return body();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

// --- suites ----------------------------------------------------------------

enum class Source { dominated, dominated_lower, chaotic, relative, family };

Source source_for(const std::string& suite) {
    if (suite == "theorem_1_1") return Source::dominated_lower;
    if (suite == "theorem_2_1" || suite.rfind("corollary_2_", 0) == 0) return Source::dominated;
    if (suite == "lemma_3_1" || suite.rfind("corollary_3_", 0) == 0) return Source::chaotic;
    if (suite == "theorem_4_1") return Source::family;
    return Source::relative;
}

struct Regime {
    std::string suite;

    void fail(const std::string& name, double value, const std::string& rule,
              const std::string& extra = "") const {
        config_fail("suite " + suite + ": " + name + " = " + format_double(value) + " " + rule +
                    extra);
    }
    void at_most_zero(const std::string& name, double v) const {
        if (v > 0.0) fail(name, v, "must be <= 0");
    }
    void negative(const std::string& name, double v) const {
        if (!(v < 0.0)) fail(name, v, "must be < 0");
    }
    void positive(const std::string& name, double v) const {
        if (!(v > 0.0)) fail(name, v, "must be > 0");
    }
    void sum_guard(double p, double r) const {
        if (p + r > -1e-3) {
            config_fail("suite " + suite + ": cell (p, r) = (" + format_double(p) + ", " +
                        format_double(r) + ") has p + r too close to 0");
        }
    }
};

// --- corpus ----------------------------------------------------------------

struct CorpusKey {
    Source source;
    int window;
    int dim;
    auto operator<=>(const CorpusKey&) const = default;
};

struct Instance {
    std::optional<CertifiedPair> pair;
    std::optional<PositiveLinearMap> map;
    std::optional<WeightedFamily> family;
    std::string error;
};

using Corpus = std::map<CorpusKey, std::vector<Instance>>;

Instance make_instance(Source source, const SpectralWindow& w, int dim, std::uint64_t seed) {
    Instance instance;
    try {
        RngState rng(seed);
        switch (source) {
            case Source::dominated: instance.pair = gen_dominated_pair(dim, w, rng); break;
            case Source::dominated_lower: instance.pair = gen_dominated_lower_pair(dim, w, rng); break;
            case Source::chaotic: instance.pair = gen_chaotic_pair(dim, w, rng); break;
            case Source::relative: {
                instance.pair = gen_relative_pair(dim, w, rng);
                RngState map_rng(stream_seed(seed, kMapStream));
                instance.map = gen_positive_linear_map(dim, map_dim_out(dim), kKrausCount, map_rng);
                break;
            }
            case Source::family: {
                RngState family_rng(stream_seed(seed, kFamilyStream));
                std::vector<double> weights;
                for (int i = 0; i < kFamilySize; ++i) weights.push_back(0.05 + family_rng.uniform());
                double total = 0.0;
                for (double v : weights) total += v;
                std::vector<WeightedTerm> items;
                for (int i = 0; i < kFamilySize; ++i) {
                    PositiveLinearMap phi =
                        gen_positive_linear_map(dim, map_dim_out(dim), kKrausCount, family_rng);
                    HermitianMatrix operand = gen_hermitian_in_window(dim, w, family_rng);
                    items.push_back({weights[i] / total, std::move(phi), std::move(operand)});
                }
                instance.family.emplace(std::move(items), w);
                break;
            }
        }
    } catch (const Error& e) {
        instance.error = e.what();
    }
    return instance;
}

ChainReport run_check(const Cell& cell, const Instance& instance, const CheckConfig& check) {
    const std::string& s = cell.suite;
    auto p = [&] { return cell.param("p"); };
    auto q = [&] { return cell.param("q"); };
    auto r = [&] { return cell.param("r"); };
    auto alpha = [&] { return cell.param("alpha"); };
    if (s == "theorem_4_1") {
        return check_theorem_4_1(*instance.family, power_named(p()), power_named(p()), alpha(),
                                 cell.param("beta"), check);
    }
    const CertifiedPair& pair = *instance.pair;
    if (s == "theorem_1_1") return check_theorem_1_1(pair, p(), check);
    if (s == "theorem_2_1") {
        const bool case_one = cell.tags.at(0).second == "i";
        return check_theorem_2_1(pair, power_named(p()), case_one ? power_named(q()) : log_named(),
                                 alpha(), cell.param("beta"),
                                 case_one ? MonotoneCase::decreasing_convex
                                          : MonotoneCase::increasing_concave,
                                 check);
    }
    if (s == "corollary_2_2") return check_corollary_2_2(pair, p(), q(), alpha(), check);
    if (s == "corollary_2_3") return check_corollary_2_3(pair, p(), q(), check);
    if (s == "corollary_2_4") return check_corollary_2_4(pair, p(), q(), check);
    if (s == "lemma_3_1") return check_lemma_3_1_forward(pair, p(), r(), check);
    if (s == "corollary_3_2") return check_corollary_3_2(pair, p(), r(), check);
    if (s == "corollary_3_3") return check_corollary_3_3(pair, p(), r(), check);
    const PositiveLinearMap& phi = *instance.map;
    if (s == "theorem_4_2") {
        return check_theorem_4_2(pair, phi, power_named(p()), alpha(), cell.param("beta"), check);
    }
    if (s == "corollary_4_3") return check_corollary_4_3(pair, phi, p(), alpha(), check);
    if (s == "corollary_4_4") {
        const ReverseMode mode =
            cell.tags.at(0).second == "ratio" ? ReverseMode::ratio : ReverseMode::difference;
        return check_corollary_4_4(pair, phi, p(), mode, check);
    }
    if (s == "theorem_4_5") return check_theorem_4_5(pair, phi, p(), check);
    throw ConfigError("unknown suite " + s);
}

Json cell_to_json(const CellResult& result, int index) {
    Json j;
    j["kind"] = "cell";
    j["cell"] = index;
    j["theorem_id"] = result.cell.theorem_id;
    j["window"] = Json::array({result.cell.window.lo, result.cell.window.hi});
    j["dim"] = result.cell.dim;
    Json params = Json::object();
    for (const auto& [name, value] : result.cell.params) params[name] = value;
    j["params"] = std::move(params);
    if (!result.cell.tags.empty()) {
        Json tags = Json::object();
        for (const auto& [name, value] : result.cell.tags) tags[name] = value;
        j["tags"] = std::move(tags);
    }
    j["samples"] = result.samples;
    j["pass"] = result.pass;
    j["tight"] = result.tight;
    j["fail"] = result.fail;
    j["errors"] = result.errors;
    j["worst_slack"] = result.worst_slack;
    j["worst_seed"] = result.worst_seed;
    if (!result.warnings.empty()) j["warnings"] = result.warnings;
    if (!result.error_messages.empty()) j["error_messages"] = result.error_messages;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& all_suites() {
    static const std::vector<std::string> suites = {
        "theorem_1_1",   "theorem_2_1",   "corollary_2_2", "corollary_2_3", "corollary_2_4",
        "lemma_3_1",     "corollary_3_2", "corollary_3_3", "theorem_4_1",   "theorem_4_2",
        "corollary_4_3", "corollary_4_4", "theorem_4_5"};
    return suites;
}

CampaignConfig CampaignConfig::defaults() {
    CampaignConfig config;
    config.suites = all_suites();
    config.dims = {2, 3, 4, 6};
    config.windows = {{1.0, 2.0}, {0.5, 4.0}, {2.0, 3.0}};
    config.grids.p = default_p();
    config.grids.q = {-1.0, -0.75, -0.5, -0.25};
    config.grids.r = {-1.0, -0.5, -0.25};
    config.grids.alpha = {0.5, 1.0, 2.0};
    config.grids.p_pos = {1.5, 2.0, 3.0};
    config.suite_grids["theorem_4_5"].p = std::vector<double>{-1.0, -0.5, -0.25};
    return config;
}

ParameterGrids CampaignConfig::grids_for(const std::string& suite) const {
    ParameterGrids out = grids;
    const auto found = suite_grids.find(suite);
    if (found == suite_grids.end()) return out;
    GridOverride over = found->second;
    for (const auto& name : kGridNames) {
        if (override_field(over, name)) grid_field(out, name) = *override_field(over, name);
    }
    return out;
}

CampaignConfig config_from_json(const Json& j) {
    return with_config_errors([&] {
        require_keys(j,
                     {"suites", "dims", "windows", "grids", "suite_grids", "samples_per_cell",
                      "base_seed", "rel_tol", "report_detail", "output_dir", "threads",
                      "write_corpus", "sweep", "hunt"},
                     "config");
        CampaignConfig config = CampaignConfig::defaults();
        if (j.contains("suites")) {
            config.suites.clear();
            for (const auto& s : j.at("suites")) config.suites.push_back(s.get<std::string>());
        }
        if (j.contains("dims")) config.dims = read_dims(j.at("dims"), "dims");
        if (j.contains("windows")) config.windows = read_windows(j.at("windows"), "windows");
        if (j.contains("grids")) {
            const Json& grids = j.at("grids");
            require_keys(grids, {kGridNames.begin(), kGridNames.end()}, "grids");
            for (const auto& name : kGridNames) {
                if (grids.contains(name)) {
                    grid_field(config.grids, name) = read_grid(grids.at(name), "grids." + name);
                }
            }
        }
        if (j.contains("suite_grids")) {
            config.suite_grids.clear();
            const Json& suites = j.at("suite_grids");
            require_keys(suites, {all_suites().begin(), all_suites().end()}, "suite_grids");
            for (const auto& item : suites.items()) {
                require_keys(item.value(), {kGridNames.begin(), kGridNames.end()},
                             "suite_grids." + item.key());
                GridOverride over;
                for (const auto& name : kGridNames) {
                    if (item.value().contains(name)) {
                        override_field(over, name) = read_grid(
                            item.value().at(name), "suite_grids." + item.key() + "." + name);
                    }
                }
                config.suite_grids[item.key()] = over;
            }
        }
        if (j.contains("samples_per_cell")) config.samples_per_cell = j.at("samples_per_cell").get<int>();
        if (j.contains("base_seed")) config.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("rel_tol")) config.rel_tol = j.at("rel_tol").get<double>();
        if (j.contains("report_detail")) {
            const auto detail = j.at("report_detail").get<std::string>();
            if (detail == "failures") {
                config.report_detail = ReportDetail::failures;
            } else if (detail == "all") {
                config.report_detail = ReportDetail::all;
            } else {
                config_fail("report_detail must be \"failures\" or \"all\"");
            }
        }
        if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("threads")) config.threads = j.at("threads").get<int>();
        if (j.contains("write_corpus")) config.write_corpus = j.at("write_corpus").get<bool>();
        return config;
    });
}

Json config_to_json(const CampaignConfig& config) {
    Json j;
    j["suites"] = config.suites;
    j["dims"] = config.dims;
    j["windows"] = windows_to_json(config.windows);
    Json grids;
    for (const auto& name : kGridNames) {
        grids[name] = grid_field(const_cast<ParameterGrids&>(config.grids), name);
    }
    j["grids"] = std::move(grids);
    Json suite_grids = Json::object();
    for (const auto& [suite, over] : config.suite_grids) {
        Json entry = Json::object();
        GridOverride copy = over;
        for (const auto& name : kGridNames) {
            if (override_field(copy, name)) entry[name] = *override_field(copy, name);
        }
        suite_grids[suite] = std::move(entry);
    }
    j["suite_grids"] = std::move(suite_grids);
    j["samples_per_cell"] = config.samples_per_cell;
    j["base_seed"] = config.base_seed;
    j["rel_tol"] = config.rel_tol;
    j["report_detail"] = config.report_detail == ReportDetail::all ? "all" : "failures";
    return j;
}

std::string config_hash(const CampaignConfig& config) {
    return fnv1a_hex(config_to_json(config).dump());
}

void validate_config(const CampaignConfig& config) {
    if (config.samples_per_cell < 1) config_fail("samples_per_cell must be at least 1");
    if (!(config.rel_tol > 0.0)) config_fail("rel_tol must be > 0");
    if (config.threads < 0) config_fail("threads must be >= 0");
    for (const auto& w : config.windows) {
        if (!(w.lo > 0.0)) config_fail("window " + window_text(w) + " needs m > 0");
    }
    for (int d : config.dims) {
        if (d < 1 || d > kMaxDim) config_fail("dim " + std::to_string(d) + " out of range");
    }
    std::set<std::string> seen;
    for (const auto& suite : config.suites) {
        if (std::find(all_suites().begin(), all_suites().end(), suite) == all_suites().end()) {
            config_fail("unknown suite '" + suite + "'");
        }
        if (!seen.insert(suite).second) config_fail("suite '" + suite + "' listed twice");
        const ParameterGrids g = config.grids_for(suite);
        const Regime regime{suite};
        if (suite == "theorem_1_1") {
            for (double p : g.p_pos) {
                if (!(p > 1.0)) regime.fail("p_pos", p, "must be > 1", " (p = 1 is degenerate)");
            }
        } else if (suite == "theorem_2_1") {
            for (double p : g.p) regime.at_most_zero("p", p);
            for (double q : g.q) regime.negative("q", q);
        } else if (suite == "corollary_2_2") {
            for (double p : g.p) regime.at_most_zero("p", p);
            for (double q : g.q) regime.at_most_zero("q", q);
            for (double a : g.alpha) regime.positive("alpha", a);
        } else if (suite == "corollary_2_3") {
            for (double p : g.p) regime.at_most_zero("p", p);
            for (double q : g.q) {
                if (q < -1.0 || q > 0.0) regime.fail("q", q, "outside [-1, 0]");
            }
        } else if (suite == "corollary_2_4") {
            for (double p : g.p) regime.at_most_zero("p", p);
            for (double q : g.q) regime.at_most_zero("q", q);
        } else if (suite == "lemma_3_1" || suite == "corollary_3_2" || suite == "corollary_3_3") {
            for (double p : g.p) regime.at_most_zero("p", p);
            for (double r : g.r) {
                regime.at_most_zero("r", r);
                if (suite != "lemma_3_1" && r < -1.0) regime.fail("r", r, "outside [-1, 0]");
            }
            for (double p : g.p) {
                for (double r : g.r) regime.sum_guard(p, r);
            }
        } else if (suite == "theorem_4_1") {
            for (double p : g.p) regime.at_most_zero("p", p);
        } else if (suite == "theorem_4_2" || suite == "corollary_4_3") {
            for (double p : g.p) regime.at_most_zero("p", p);
            for (double a : g.alpha) regime.positive("alpha", a);
        } else if (suite == "corollary_4_4") {
            for (double p : g.p) regime.at_most_zero("p", p);
        } else if (suite == "theorem_4_5") {
            for (double p : g.p) {
                if (!(p >= -1.0 && p < 0.0)) regime.fail("p", p, "outside [-1, 0)");
            }
        }
    }
}

double Cell::param(const std::string& name) const {
    for (const auto& [key, value] : params) {
        if (key == name) return value;
    }
    throw ConfigError("cell " + label() + " has no parameter " + name);
}

std::string Cell::label() const {
    std::string out = theorem_id + " w=" + window_text(window) + " dim=" + std::to_string(dim);
    for (const auto& [key, value] : params) out += " " + key + "=" + format_double(value);
    for (const auto& [key, value] : tags) out += " " + key + "=" + value;
    return out;
}

std::vector<Cell> expand_cells(const CampaignConfig& config) {
    std::vector<Cell> cells;
    for (const auto& suite : config.suites) {
        const ParameterGrids g = config.grids_for(suite);
        for (const auto& w : config.windows) {
            // Parameter sets depend on the window only through oracle constants.
            struct Variant {
                std::string theorem_id;
                std::vector<std::pair<std::string, double>> params;
                std::vector<std::pair<std::string, std::string>> tags;
            };
            std::vector<Variant> variants;
            auto add = [&](std::vector<std::pair<std::string, double>> params,
                           std::vector<std::pair<std::string, std::string>> tags = {},
                           std::string id = "") {
                variants.push_back({id.empty() ? suite : id, std::move(params), std::move(tags)});
            };
            if (suite == "theorem_1_1") {
                for (double p : g.p_pos) add({{"p", p}});
            } else if (suite == "theorem_2_1") {
                for (double p : g.p) {
                    for (double q : g.q) {
                        const double alpha = alpha_ratio(power_function(p), power_function(q), w).value;
                        const double beta =
                            beta_generic(power_function(p), power_function(q), alpha, w).value;
                        add({{"p", p}, {"q", q}, {"alpha", alpha}, {"beta", beta}}, {{"case", "i"}});
                    }
                    const double beta =
                        beta_generic(power_function(p), log_named().fn, -1.0, w).value;
                    add({{"p", p}, {"alpha", -1.0}, {"beta", beta}}, {{"case", "ii"}});
                }
            } else if (suite == "corollary_2_2") {
                for (double p : g.p) {
                    for (double q : g.q) {
                        for (double a : g.alpha) add({{"p", p}, {"q", q}, {"alpha", a}});
                    }
                }
            } else if (suite == "corollary_2_3" || suite == "corollary_2_4") {
                for (double p : g.p) {
                    for (double q : g.q) add({{"p", p}, {"q", q}});
                }
            } else if (suite == "lemma_3_1" || suite == "corollary_3_2" ||
                       suite == "corollary_3_3") {
                for (double p : g.p) {
                    for (double r : g.r) add({{"p", p}, {"r", r}});
                }
            } else if (suite == "theorem_4_1") {
                for (double p : g.p) {
                    for (double a : g.alpha) {
                        const double beta =
                            beta_generic(power_function(p), power_function(p), a, w).value;
                        add({{"p", p}, {"alpha", a}, {"beta", beta}});
                    }
                }
            } else if (suite == "theorem_4_2" || suite == "corollary_4_3") {
                for (double p : g.p) {
                    std::vector<std::pair<double, std::string>> alphas;
                    for (double a : g.alpha) alphas.emplace_back(a, "grid");
                    if (p != 0.0) alphas.emplace_back(kantorovich_K(w, p), "K");
                    for (const auto& [a, kind] : alphas) {
                        if (suite == "theorem_4_2") {
                            const double beta =
                                beta_generic(power_function(p), power_function(p), a, w).value;
                            add({{"p", p}, {"alpha", a}, {"beta", beta}}, {{"alpha_kind", kind}});
                        } else {
                            add({{"p", p}, {"alpha", a}}, {{"alpha_kind", kind}});
                        }
                    }
                }
            } else if (suite == "corollary_4_4") {
                for (double p : g.p) {
                    add({{"p", p}}, {{"mode", "ratio"}}, "corollary_4_4_ratio");
                    add({{"p", p}}, {{"mode", "difference"}}, "corollary_4_4_difference");
                }
            } else if (suite == "theorem_4_5") {
                for (double p : g.p) add({{"p", p}});
            }
            for (int dim : config.dims) {
                for (const auto& v : variants) {
                    cells.push_back(Cell{suite, v.theorem_id, w, dim, v.params, v.tags});
                }
            }
        }
    }
    return cells;
}

int CampaignSummary::total_failures() const {
    int total = 0;
    for (const auto& s : suites) total += s.fail + s.errors;
    return total;
}

namespace {

double sweep_max_deviation(const CampaignConfig& config) {
    SweepConfig sweep;
    sweep.windows = config.windows;
    for (double p : config.grids.p) {
        if (p < 0.0) sweep.p.push_back(p);
    }
    for (double q : config.grids.q) {
        if (q < 0.0) sweep.q.push_back(q);
    }
    sweep.constants = {"K", "K2", "C2", "C", "beta"};
    double worst = 0.0;
    for (const auto& row : sweep_constants(sweep)) worst = std::max(worst, row.abs_diff);
    return worst;
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    validate_config(config);
    const std::vector<Cell> cells = expand_cells(config);
    const CheckConfig check{config.rel_tol};
    const int samples = config.samples_per_cell;

    // Corpus: one batch of seeded instances per (source, window, dim).
    Corpus corpus;
    for (const auto& cell : cells) {
        const int window_index = static_cast<int>(
            std::find(config.windows.begin(), config.windows.end(), cell.window) -
            config.windows.begin());
        corpus[{source_for(cell.suite), window_index, cell.dim}];
    }
    std::vector<std::pair<CorpusKey, int>> jobs;
    for (auto& [key, batch] : corpus) {
        batch.resize(samples);
        for (int i = 0; i < samples; ++i) jobs.emplace_back(key, i);
    }
    parallel_for(static_cast<int>(jobs.size()), config.threads, [&](int job) {
        const auto& [key, i] = jobs[job];
        corpus.at(key)[i] = make_instance(key.source, config.windows[key.window], key.dim,
                                          config.base_seed + static_cast<std::uint64_t>(i));
    });

    CampaignSummary summary;
    summary.cells.resize(cells.size());
    parallel_for(static_cast<int>(cells.size()), config.threads, [&](int index) {
        const Cell& cell = cells[index];
        const int window_index = static_cast<int>(
            std::find(config.windows.begin(), config.windows.end(), cell.window) -
            config.windows.begin());
        const auto& batch = corpus.at({source_for(cell.suite), window_index, cell.dim});
        CellResult result;
        result.cell = cell;
        result.samples = samples;
        result.worst_slack = std::numeric_limits<double>::infinity();
        std::set<std::string> warned;
        for (int i = 0; i < samples; ++i) {
            const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(i);
            const Instance& instance = batch[i];
            try {
                if (!instance.error.empty()) throw GenerationError(instance.error);
                ChainReport report = run_check(cell, instance, check);
                report.seed = seed;
                for (const auto& w : report.warnings) {
                    if (warned.insert(w).second) result.warnings.push_back(w);
                }
                switch (report.status()) {
                    case LinkStatus::pass: ++result.pass; break;
                    case LinkStatus::tight: ++result.tight; break;
                    case LinkStatus::fail: ++result.fail; break;
                }
                const double slack = report.worst_slack();
                if (slack < result.worst_slack) {
                    result.worst_slack = slack;
                    result.worst_seed = seed;
                }
                if (!report.overall || config.report_detail == ReportDetail::all) {
                    result.reports.push_back(std::move(report));
                }
            } catch (const Error& e) {
                ++result.errors;
                if (result.error_messages.size() < 5) {
                    result.error_messages.push_back("seed " + std::to_string(seed) + ": " + e.what());
                }
            }
        }
        if (!std::isfinite(result.worst_slack)) result.worst_slack = 0.0;
        summary.cells[index] = std::move(result);
    });

    for (const auto& result : summary.cells) {
        auto found = std::find_if(summary.suites.begin(), summary.suites.end(),
                                  [&](const SuiteSummary& s) {
                                      return s.theorem_id == result.cell.theorem_id;
                                  });
        if (found == summary.suites.end()) {
            summary.suites.push_back({result.cell.theorem_id});
            summary.suites.back().worst_slack = std::numeric_limits<double>::infinity();
            found = summary.suites.end() - 1;
        }
        ++found->cells;
        found->instances += result.samples;
        found->pass += result.pass;
        found->tight += result.tight;
        found->fail += result.fail;
        found->errors += result.errors;
        found->worst_slack = std::min(found->worst_slack, result.worst_slack);
    }
    summary.oracle_max_deviation =
        config.grids.p.empty() || config.grids.q.empty() ? 0.0 : sweep_max_deviation(config);

    if (!config.output_dir.empty()) {
        namespace fs = std::filesystem;
        const fs::path dir(config.output_dir);
        fs::create_directories(dir);

        std::ostringstream report;
        Json header;
        header["kind"] = "campaign_report";
        header["format"] = 1;
        header["config_hash"] = config_hash(config);
        header["base_seed"] = config.base_seed;
        header["config"] = config_to_json(config);
        report << header.dump() << '\n';
        for (std::size_t i = 0; i < summary.cells.size(); ++i) {
            report << cell_to_json(summary.cells[i], static_cast<int>(i)).dump() << '\n';
        }
        std::vector<std::pair<std::size_t, const ChainReport*>> chains;
        for (std::size_t i = 0; i < summary.cells.size(); ++i) {
            for (const auto& r : summary.cells[i].reports) chains.emplace_back(i, &r);
        }
        std::stable_sort(chains.begin(), chains.end(), [](const auto& x, const auto& y) {
            if (x.second->seed != y.second->seed) return x.second->seed < y.second->seed;
            return x.first < y.first;
        });
        for (const auto& [cell, chain] : chains) {
            Json line;
            line["kind"] = "chain_report";
            line["cell"] = cell;
            line.update(report_to_json(*chain));
            report << line.dump() << '\n';
        }
        write_text(dir / "report.jsonl", report.str());

        std::ostringstream csv;
        csv << "theorem_id,cells,pass_count,tight_count,fail_count,error_count,worst_slack\n";
        for (const auto& s : summary.suites) {
            csv << s.theorem_id << ',' << s.cells << ',' << s.pass << ',' << s.tight << ','
                << s.fail << ',' << s.errors << ',' << format_double(s.worst_slack) << '\n';
        }
        write_text(dir / "summary.csv", csv.str());

        if (config.write_corpus) {
            std::ostringstream corpus_out;
            for (const auto& [key, batch] : corpus) {
                for (const auto& instance : batch) {
                    if (instance.pair) corpus_out << pair_to_json(*instance.pair).dump() << '\n';
                }
            }
            write_text(dir / "corpus.jsonl", corpus_out.str());
        }
    }

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (!config.output_dir.empty()) {
        Json j;
        j["config_hash"] = config_hash(config);
        j["conformant"] = summary.conformant();
        j["total_failures"] = summary.total_failures();
        j["oracle_max_abs_deviation"] = summary.oracle_max_deviation;
        j["wall_seconds"] = summary.wall_seconds;
        Json suites = Json::array();
        for (const auto& s : summary.suites) {
            suites.push_back({{"theorem_id", s.theorem_id},
                              {"cells", s.cells},
                              {"instances", s.instances},
                              {"pass", s.pass},
                              {"tight", s.tight},
                              {"fail", s.fail},
                              {"errors", s.errors},
                              {"worst_slack", s.worst_slack}});
        }
        j["suites"] = std::move(suites);
        write_text(std::filesystem::path(config.output_dir) / "summary.json", j.dump(2) + "\n");
    }
    return summary;
}

CampaignConfig config_from_report(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw ConfigError("cannot open " + report_path);
    std::string first;
    std::getline(in, first);
    return with_config_errors([&] {
        const Json header = Json::parse(first);
        if (header.value("kind", "") != "campaign_report") {
            config_fail(report_path + " is not a campaign report");
        }
        CampaignConfig config = config_from_json(header.at("config"));
        if (config_hash(config) != header.at("config_hash").get<std::string>()) {
            config_fail(report_path + ": config hash does not match the embedded config");
        }
        return config;
    });
}

// ---------------------------------------------------------------------------
// Sweeps

SweepConfig SweepConfig::defaults() {
    SweepConfig config;
    config.windows = {{1.0, 2.0}, {0.5, 4.0}, {2.0, 3.0}};
    for (int i = 0; i < 25; ++i) config.p.push_back(-3.0 + (2.95 * i) / 24.0);
    for (int i = 0; i < 20; ++i) config.q.push_back(-1.0 + (0.95 * i) / 19.0);
    config.constants = {"K", "K2", "beta", "C"};
    return config;
}

SweepConfig sweep_config_from_json(const Json& j) {
    return with_config_errors([&] {
        require_keys(j, {"windows", "p", "q", "alpha", "constants", "rel_tol"}, "sweep");
        SweepConfig config = SweepConfig::defaults();
        if (j.contains("windows")) config.windows = read_windows(j.at("windows"), "sweep.windows");
        if (j.contains("p")) config.p = read_grid(j.at("p"), "sweep.p");
        if (j.contains("q")) config.q = read_grid(j.at("q"), "sweep.q");
        if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
        if (j.contains("constants")) config.constants = j.at("constants").get<std::vector<std::string>>();
        if (j.contains("rel_tol")) config.rel_tol = j.at("rel_tol").get<double>();
        if (!(config.alpha > 0.0)) config_fail("sweep.alpha must be > 0");
        for (double p : config.p) {
            if (p == 0.0 || p == 1.0) config_fail("sweep.p = " + format_double(p) + " is degenerate");
        }
        for (double q : config.q) {
            if (q == 0.0 || q == 1.0) config_fail("sweep.q = " + format_double(q) + " is degenerate");
        }
        return config;
    });
}

bool SweepRow::within(double rel_tol) const {
    return abs_diff <= rel_tol * std::abs(oracle) + 1e-12;
}

std::vector<SweepRow> sweep_constants(const SweepConfig& config) {
    static const std::set<std::string> known = {"K", "K2", "C2", "C", "beta"};
    for (const auto& name : config.constants) {
        if (!known.count(name)) throw ConfigError("unknown constant '" + name + "'");
    }
    std::vector<SweepRow> rows;
    for (const auto& w : config.windows) {
        for (double p : config.p) {
            std::map<std::string, std::pair<double, double>> q_free;
            auto closed_and_oracle = [&](const std::string& name, double q) {
                const ScalarFunction f = power_function(p);
                const ScalarFunction g = power_function(q);
                if (name == "K") {
                    return std::pair{kantorovich_K(w, p), alpha_ratio(f, f, w).value};
                }
                if (name == "C") {
                    return std::pair{kantorovich_C(w, p), beta_generic(f, f, 1.0, w).value};
                }
                if (name == "K2") return std::pair{kantorovich_K2(w, p, q), alpha_ratio(f, g, w).value};
                if (name == "C2") {
                    return std::pair{kantorovich_C2(w, p, q), beta_generic(f, g, 1.0, w).value};
                }
                return std::pair{beta_power_closed(w, p, q, config.alpha),
                                 beta_generic(f, g, config.alpha, w).value};
            };
            for (double q : config.q) {
                for (const auto& name : config.constants) {
                    std::pair<double, double> values;
                    try {
                        if (name == "K" || name == "C") {
                            auto found = q_free.find(name);
                            if (found == q_free.end()) {
                                found = q_free.emplace(name, closed_and_oracle(name, q)).first;
                            }
                            values = found->second;
                        } else {
                            values = closed_and_oracle(name, q);
                        }
                    } catch (const DegenerateExponentError&) {
                        continue;
                    } catch (const ParameterError&) {
                        continue;
                    }
                    rows.push_back({w.lo, w.hi, p, q, name, values.first, values.second,
                                    std::abs(values.first - values.second)});
                }
            }
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "m,M,p,q,constant_name,closed_form,oracle,abs_diff\n";
    for (const auto& r : rows) {
        out << format_double(r.m) << ',' << format_double(r.big_m) << ',' << format_double(r.p)
            << ',' << format_double(r.q) << ',' << r.constant_name << ','
            << format_double(r.closed_form) << ',' << format_double(r.oracle) << ','
            << format_double(r.abs_diff) << '\n';
    }
    return out.str();
}

std::vector<std::pair<std::string, std::string>> sweep_charts(const std::vector<SweepRow>& rows) {
    std::vector<std::pair<double, double>> windows;
    for (const auto& r : rows) {
        if (r.constant_name != "K2") continue;
        if (std::find(windows.begin(), windows.end(), std::pair{r.m, r.big_m}) == windows.end()) {
            windows.emplace_back(r.m, r.big_m);
        }
    }
    std::vector<std::pair<std::string, std::string>> charts;
    for (const auto& [m, big_m] : windows) {
        std::vector<ChartSeries> series;
        for (const auto& r : rows) {
            if (r.constant_name != "K2" || r.m != m || r.big_m != big_m) continue;
            auto found = std::find_if(series.begin(), series.end(), [&](const ChartSeries& s) {
                return s.name == "p = " + format_double(r.p);
            });
            if (found == series.end()) {
                series.push_back({"p = " + format_double(r.p), {}, {}});
                found = series.end() - 1;
            }
            found->xs.push_back(r.q);
            found->ys.push_back(r.closed_form);
        }
        // Many p values crowd the legend; keep at most eight evenly spaced curves.
        if (series.size() > 8) {
            std::vector<ChartSeries> thinned;
            for (int k = 0; k < 8; ++k) {
                thinned.push_back(series[k * (series.size() - 1) / 7]);
            }
            series = std::move(thinned);
        }
        const std::string title =
            "K(m, M, p, q) on [" + format_double(m) + ", " + format_double(big_m) + "]";
        charts.emplace_back("k2_m" + format_double(m) + "_M" + format_double(big_m),
                            line_chart_svg({title, "q", "K(m, M, p, q)"}, series));
    }
    return charts;
}

// ---------------------------------------------------------------------------
// Hunts

HuntConfig HuntConfig::defaults() {
    HuntConfig config;
    config.relaxations = all_relaxations();
    config.windows = {{1.0, 2.0}, {0.5, 4.0}, {2.0, 3.0}};
    config.dims = {2, 3, 4, 6};
    return config;
}

const std::vector<std::string>& all_relaxations() {
    static const std::vector<std::string> names = {
        "none",           "q_below_minus_one",       "r_below_minus_one",
        "non_log_convex_f", "drop_dominance",       "negative_control_square",
        "chaotic_not_dominated", "lemma_exponent_variant"};
    return names;
}

HuntConfig hunt_config_from_json(const Json& j) {
    return with_config_errors([&] {
        require_keys(j, {"relaxations", "windows", "dims", "instances", "base_seed", "rel_tol"},
                     "hunt");
        HuntConfig config = HuntConfig::defaults();
        if (j.contains("relaxations")) {
            config.relaxations = j.at("relaxations").get<std::vector<std::string>>();
        }
        if (j.contains("windows")) config.windows = read_windows(j.at("windows"), "hunt.windows");
        if (j.contains("dims")) config.dims = read_dims(j.at("dims"), "hunt.dims");
        if (j.contains("instances")) config.instances = j.at("instances").get<int>();
        if (j.contains("base_seed")) config.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("rel_tol")) config.rel_tol = j.at("rel_tol").get<double>();
        return config;
    });
}

CertifiedPair square_negative_control() {
    Eigen::MatrixXd a(2, 2);
    Eigen::MatrixXd b(2, 2);
    a << 1.01, 0.0, 0.0, 0.01;
    b << 2.01, 1.0, 1.0, 1.01;
    return {HermitianMatrix::from_real(a), HermitianMatrix::from_real(b), SpectralWindow(0.01, 3.0),
            Certificate::dominated, 0};
}

namespace {

struct Probe {
    ChainReport report;
    CertifiedPair pair;
};

HuntFinding fuzz(const HuntConfig& config, std::string relaxation, std::string check,
                 std::vector<std::pair<std::string, double>> params,
                 const std::function<Probe(const SpectralWindow&, int, RngState&)>& probe) {
    HuntFinding finding;
    finding.relaxation = std::move(relaxation);
    finding.check = std::move(check);
    finding.params = std::move(params);
    finding.witness = nullptr;
    const int nw = static_cast<int>(config.windows.size());
    const int nd = static_cast<int>(config.dims.size());
    for (int i = 0; i < config.instances; ++i) {
        const SpectralWindow& w = config.windows[i % nw];
        const int dim = config.dims[(i / nw) % nd];
        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(i);
        RngState rng(seed);
        Probe result = probe(w, dim, rng);
        result.report.seed = seed;
        result.pair.seed = seed;
        ++finding.instances;
        if (result.report.overall) continue;
        ++finding.violations;
        const double slack = result.report.worst_slack();
        if (slack < finding.max_violation || finding.witness.is_null()) {
            finding.max_violation = slack;
            finding.witness = {{"seed", seed},
                               {"window", Json::array({w.lo, w.hi})},
                               {"dim", dim},
                               {"pair", pair_to_json(result.pair)},
                               {"report", report_to_json(result.report)}};
        }
    }
    return finding;
}

ChainReport order_report(const std::string& id, const std::vector<std::string>& labels,
                         const std::vector<std::pair<HermitianMatrix, HermitianMatrix>>& terms,
                         const TolerancePolicy& policy) {
    ChainReport report;
    report.theorem_id = id;
    report.dim = terms.front().first.dim();
    report.overall = true;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const LoewnerVerdict v = loewner_leq(terms[k].first, terms[k].second, policy);
        Link link{labels[k], v.min_slack, v.tolerance_used, v.holds,
                  std::abs(v.min_slack) < v.tolerance_used};
        report.overall = report.overall && link.holds;
        report.links.push_back(link);
    }
    return report;
}

}  // namespace

std::vector<HuntFinding> hunt_sharpness(const HuntConfig& config) {
    if (config.windows.empty() || config.dims.empty()) throw ConfigError("hunt needs windows and dims");
    if (config.instances < 1) throw ConfigError("hunt instances must be at least 1");
    for (const auto& name : config.relaxations) {
        if (std::find(all_relaxations().begin(), all_relaxations().end(), name) ==
            all_relaxations().end()) {
            throw ConfigError("unknown relaxation '" + name + "'");
        }
    }
    const CheckConfig check{config.rel_tol};
    std::vector<HuntFinding> findings;
    for (const auto& name : config.relaxations) {
        if (name == "none") {
            auto f = fuzz(config, name, "corollary_2_2", {{"p", -1}, {"q", -1}, {"alpha", 1}},
                          [&](const SpectralWindow& w, int dim, RngState& rng) {
                              CertifiedPair pair = gen_dominated_pair(dim, w, rng);
                              return Probe{check_corollary_2_2(pair, -1, -1, 1, check), pair};
                          });
            f.conformance = true;
            findings.push_back(std::move(f));
        } else if (name == "q_below_minus_one") {
            for (double p : {-1.0, -2.0}) {
                findings.push_back(fuzz(config, name, "corollary_2_3", {{"p", p}, {"q", -2}},
                                        [&](const SpectralWindow& w, int dim, RngState& rng) {
                                            CertifiedPair pair = gen_dominated_pair(dim, w, rng);
                                            return Probe{check_corollary_2_3(pair, p, -2, check), pair};
                                        }));
            }
        } else if (name == "r_below_minus_one") {
            findings.push_back(fuzz(config, name, "corollary_3_2", {{"p", -1}, {"r", -2}},
                                    [&](const SpectralWindow& w, int dim, RngState& rng) {
                                        CertifiedPair pair = gen_chaotic_pair(dim, w, rng);
                                        return Probe{check_corollary_3_2(pair, -1, -2, check), pair};
                                    }));
            findings.push_back(fuzz(config, name, "corollary_3_3", {{"p", -1}, {"r", -2}},
                                    [&](const SpectralWindow& w, int dim, RngState& rng) {
                                        CertifiedPair pair = gen_chaotic_pair(dim, w, rng);
                                        return Probe{check_corollary_3_3(pair, -1, -2, check), pair};
                                    }));
        } else if (name == "non_log_convex_f") {
            const NamedFunction f{"t", [](double t) { return t; }};
            const NamedFunction g = power_named(-1.0);
            std::map<std::pair<double, double>, std::pair<double, double>> constants;
            findings.push_back(fuzz(
                config, name, "theorem_2_1", {{"q", -1}},
                [&](const SpectralWindow& w, int dim, RngState& rng) {
                    auto found = constants.find({w.lo, w.hi});
                    if (found == constants.end()) {
                        const double alpha = alpha_ratio(f.fn, g.fn, w).value;
                        found = constants
                                    .emplace(std::pair{w.lo, w.hi},
                                             std::pair{alpha, beta_generic(f.fn, g.fn, alpha, w).value})
                                    .first;
                    }
                    CertifiedPair pair = gen_dominated_pair(dim, w, rng);
                    return Probe{check_theorem_2_1(pair, f, g, found->second.first,
                                                   found->second.second,
                                                   MonotoneCase::decreasing_convex, check),
                                 pair};
                }));
        } else if (name == "drop_dominance") {
            findings.push_back(fuzz(
                config, name, "corollary_2_2", {{"p", -1}, {"q", -1}, {"alpha", 1}},
                [&](const SpectralWindow& w, int dim, RngState& rng) {
                    const HermitianMatrix b = gen_hermitian_in_window(dim, w, rng);
                    const HermitianMatrix gap = random_psd(dim, rng.uniform() * w.width(), rng);
                    // Labelled dominated without A <= B: the hypothesis is dropped on purpose.
                    CertifiedPair pair{b + gap, b, w, Certificate::dominated, 0};
                    return Probe{check_corollary_2_2(pair, -1, -1, 1, check), pair};
                }));
        } else if (name == "negative_control_square") {
            const CertifiedPair pair = square_negative_control();
            HuntFinding f;
            f.relaxation = name;
            f.check = "order_preservation_t^2";
            f.instances = 1;
            const ChainReport report = order_report(
                "negative_control_square", {"A <= B", "A^2 <= B^2"},
                {{pair.a, pair.b}, {matrix_power(pair.a, 2.0), matrix_power(pair.b, 2.0)}},
                check.policy());
            f.witness = nullptr;
            if (!report.overall) {
                f.violations = 1;
                f.max_violation = report.worst_slack();
                f.witness = {{"seed", 0}, {"pair", pair_to_json(pair)}, {"report", report_to_json(report)}};
            }
            findings.push_back(std::move(f));
        } else if (name == "chaotic_not_dominated") {
            findings.push_back(fuzz(config, name, "dominance_under_chaotic_order", {},
                                    [&](const SpectralWindow& w, int dim, RngState& rng) {
                                        CertifiedPair pair = gen_chaotic_pair(dim, w, rng);
                                        ChainReport report = order_report(
                                            "chaotic_not_dominated", {"log A <= log B", "A <= B"},
                                            {{matrix_log(pair.a), matrix_log(pair.b)},
                                             {pair.a, pair.b}},
                                            check.policy());
                                        return Probe{std::move(report), pair};
                                    }));
        } else if (name == "lemma_exponent_variant") {
            findings.push_back(fuzz(config, name, "lemma_3_1_variant", {{"p", -2}, {"r", -0.5}},
                                    [&](const SpectralWindow& w, int dim, RngState& rng) {
                                        CertifiedPair pair = gen_chaotic_pair(dim, w, rng);
                                        return Probe{check_lemma_3_1_exponent_variant(
                                                         pair, -2, -0.5, check),
                                                     pair};
                                    }));
        }
    }
    return findings;
}

Json hunt_finding_to_json(const HuntFinding& finding) {
    Json j;
    j["kind"] = "finding";
    j["relaxation"] = finding.relaxation;
    j["check"] = finding.check;
    Json params = Json::object();
    for (const auto& [name, value] : finding.params) params[name] = value;
    j["params"] = std::move(params);
    j["instances"] = finding.instances;
    j["violations"] = finding.violations;
    j["max_violation"] = finding.max_violation;
    j["conformance"] = finding.conformance;
    j["witness"] = finding.witness;
    return j;
}

}  // namespace kanto
