#pragma once

// JSON exchange formats for matrices, maps, certified pairs and chain
// reports. Output uses insertion-ordered objects so files are byte-stable.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kanto/generators.hpp"
#include "kanto/hermitian.hpp"
#include "kanto/positive_maps.hpp"
#include "kanto/verifiers.hpp"

namespace kanto {

using Json = nlohmann::ordered_json;

/// { "dim": n, "re": [[...]], "im": [[...]] }, row-major.
Json matrix_to_json(const HermitianMatrix& a);
HermitianMatrix matrix_from_json(const Json& j);

/// Rectangular variant { "rows", "cols", "re", "im" } used for Kraus operators.
Json rect_to_json(const ComplexMatrix& a);
ComplexMatrix rect_from_json(const Json& j);

/// { "dim_in", "dim_out", "kraus": [...] }
Json map_to_json(const PositiveLinearMap& phi);
PositiveLinearMap map_from_json(const Json& j);

/// { "certificate", "seed", "window": [m, M], "a": matrix, "b": matrix }.
/// Reading re-verifies the certificate and throws HypothesisError on failure.
Json pair_to_json(const CertifiedPair& pair);
CertifiedPair pair_from_json(const Json& j, bool verify = true);

Json report_to_json(const ChainReport& report);

void write_corpus(std::ostream& out, const std::vector<CertifiedPair>& pairs);
std::vector<CertifiedPair> read_corpus(std::istream& in);

/// Reads a whole JSON file; throws ConfigError when it cannot be opened or parsed.
Json read_json_file(const std::string& path);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Shortest round-trip decimal text for a double, as used in JSON output.
std::string format_double(double v);

}  // namespace kanto
