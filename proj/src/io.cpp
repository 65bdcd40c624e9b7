#include "kanto/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace kanto {

namespace {

Json real_rows(const ComplexMatrix& a, bool imaginary) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            row.push_back(imaginary ? a(i, j).imag() : a(i, j).real());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix complex_from_rows(const Json& re, const Json& im, int rows, int cols) {
    if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != rows ||
        static_cast<int>(im.size()) != rows) {
        throw DimensionError("matrix JSON row count does not match its shape");
    }
    ComplexMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(re[i].size()) != cols || static_cast<int>(im[i].size()) != cols) {
            throw DimensionError("matrix JSON column count does not match its shape");
        }
        for (int j = 0; j < cols; ++j) {
            a(i, j) = Complex(re[i][j].get<double>(), im[i][j].get<double>());
        }
    }
    return a;
}

}  // namespace

Json matrix_to_json(const HermitianMatrix& a) {
    Json j;
    j["dim"] = a.dim();
    j["re"] = real_rows(a.matrix(), false);
    j["im"] = real_rows(a.matrix(), true);
    return j;
}

HermitianMatrix matrix_from_json(const Json& j) {
    const int dim = j.at("dim").get<int>();
    if (dim < 1 || dim > kMaxDim) throw DimensionError("matrix dim out of range");
    return HermitianMatrix(complex_from_rows(j.at("re"), j.at("im"), dim, dim));
}

Json rect_to_json(const ComplexMatrix& a) {
    Json j;
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    j["re"] = real_rows(a, false);
    j["im"] = real_rows(a, true);
    return j;
}

ComplexMatrix rect_from_json(const Json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim) {
        throw DimensionError("Kraus operator shape out of range");
    }
    return complex_from_rows(j.at("re"), j.at("im"), rows, cols);
}

Json map_to_json(const PositiveLinearMap& phi) {
    Json j;
    j["dim_in"] = phi.dim_in();
    j["dim_out"] = phi.dim_out();
    Json kraus = Json::array();
    for (const auto& w : phi.kraus()) kraus.push_back(rect_to_json(w));
    j["kraus"] = std::move(kraus);
    return j;
}

PositiveLinearMap map_from_json(const Json& j) {
    std::vector<ComplexMatrix> kraus;
    for (const auto& w : j.at("kraus")) kraus.push_back(rect_from_json(w));
    PositiveLinearMap phi(std::move(kraus));
    if (phi.dim_in() != j.at("dim_in").get<int>() || phi.dim_out() != j.at("dim_out").get<int>()) {
        throw DimensionError("map dim_in/dim_out disagree with its Kraus operators");
    }
    return phi;
}

Json pair_to_json(const CertifiedPair& pair) {
    Json j;
    j["certificate"] = to_string(pair.certificate);
    j["seed"] = pair.seed;
    j["window"] = Json::array({pair.window.lo, pair.window.hi});
    j["a"] = matrix_to_json(pair.a);
    j["b"] = matrix_to_json(pair.b);
    return j;
}

CertifiedPair pair_from_json(const Json& j, bool verify) {
    const Json& w = j.at("window");
    CertifiedPair pair{matrix_from_json(j.at("a")), matrix_from_json(j.at("b")),
                       SpectralWindow(w.at(0).get<double>(), w.at(1).get<double>()),
                       certificate_from_string(j.at("certificate").get<std::string>()),
                       j.at("seed").get<std::uint64_t>()};
    if (verify && !verify_certificate(pair)) {
        throw HypothesisError("corpus pair with seed " + std::to_string(pair.seed) +
                              " fails its " + to_string(pair.certificate) + " certificate");
    }
    return pair;
}

Json report_to_json(const ChainReport& report) {
    Json j;
    j["theorem_id"] = report.theorem_id;
    j["seed"] = report.seed;
    j["dim"] = report.dim;
    Json params = Json::object();
    for (const auto& [name, value] : report.params) params[name] = value;
    j["params"] = std::move(params);
    if (!report.tags.empty()) {
        Json tags = Json::object();
        for (const auto& [name, value] : report.tags) tags[name] = value;
        j["tags"] = std::move(tags);
    }
    Json links = Json::array();
    for (const auto& link : report.links) {
        Json l;
        l["label"] = link.label;
        l["min_slack"] = link.min_slack;
        l["tolerance"] = link.tolerance;
        l["holds"] = link.holds;
        l["status"] = to_string(link.status());
        links.push_back(std::move(l));
    }
    j["links"] = std::move(links);
    if (!report.warnings.empty()) j["warnings"] = report.warnings;
    j["overall"] = report.overall;
    return j;
}

void write_corpus(std::ostream& out, const std::vector<CertifiedPair>& pairs) {
    for (const auto& pair : pairs) out << pair_to_json(pair).dump() << '\n';
}

std::vector<CertifiedPair> read_corpus(std::istream& in) {
    std::vector<CertifiedPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        pairs.push_back(pair_from_json(Json::parse(line)));
    }
    return pairs;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

std::string format_double(double v) { return Json(v).dump(); }

}  // namespace kanto
