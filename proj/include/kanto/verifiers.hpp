#pragma once

// One check per operator-inequality chain. Each check builds every term of
// the chain for a certified instance, tests each "<=" with loewner_leq, adds
// an end-to-end comparison of the outermost terms, and returns a ChainReport.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kanto/generators.hpp"
#include "kanto/hermitian.hpp"
#include "kanto/positive_maps.hpp"

namespace kanto {

enum class LinkStatus { pass, tight, fail };

const char* to_string(LinkStatus status);

struct Link {
    std::string label;
    double min_slack = 0.0;
    double tolerance = 0.0;
    bool holds = false;
    /// |min_slack| < tolerance; a tight link still holds.
    bool tight = false;

    LinkStatus status() const {
        if (!holds) return LinkStatus::fail;
        return tight ? LinkStatus::tight : LinkStatus::pass;
    }
};

struct ChainReport {
    std::string theorem_id;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::pair<std::string, std::string>> tags;
    std::vector<Link> links;
    std::vector<std::string> warnings;
    bool overall = false;
    std::uint64_t seed = 0;
    int dim = 0;

    LinkStatus status() const;
    double worst_slack() const;
    const Link* find_link(const std::string& label) const;
};

struct CheckConfig {
    double rel_tol = 1e-8;

    TolerancePolicy policy() const { return {rel_tol}; }
};

/// A scalar function together with a printable name for reports.
struct NamedFunction {
    std::string name;
    ScalarFunction fn;

    double operator()(double t) const { return fn(t); }
};

NamedFunction power_named(double p);
NamedFunction log_named();

/// (i) g decreasing convex with alpha > 0; (ii) g increasing concave with alpha < 0.
enum class MonotoneCase { decreasing_convex, increasing_concave };

ChainReport check_theorem_1_1(const CertifiedPair& pair, double p, const CheckConfig& config = {});

ChainReport check_theorem_2_1(const CertifiedPair& pair, const NamedFunction& f,
                              const NamedFunction& g, double alpha, MonotoneCase which,
                              const CheckConfig& config = {});

/// As above with beta supplied by the caller, e.g. cached per parameter cell.
ChainReport check_theorem_2_1(const CertifiedPair& pair, const NamedFunction& f,
                              const NamedFunction& g, double alpha, double beta,
                              MonotoneCase which, const CheckConfig& config = {});

ChainReport check_corollary_2_2(const CertifiedPair& pair, double p, double q, double alpha,
                                const CheckConfig& config = {});

ChainReport check_corollary_2_3(const CertifiedPair& pair, double p, double q,
                                const CheckConfig& config = {});

ChainReport check_corollary_2_4(const CertifiedPair& pair, double p, double q,
                                const CheckConfig& config = {});

/// B^r <= (B^{r/2} A^p B^{r/2})^{r/(p+r)} under log A <= log B.
ChainReport check_lemma_3_1_forward(const CertifiedPair& pair, double p, double r,
                                    const CheckConfig& config = {});

/// Same link with outer exponent p/(p+r) in place of r/(p+r); informational.
ChainReport check_lemma_3_1_exponent_variant(const CertifiedPair& pair, double p, double r,
                                             const CheckConfig& config = {});

ChainReport check_corollary_3_2(const CertifiedPair& pair, double p, double r,
                                const CheckConfig& config = {});

ChainReport check_corollary_3_3(const CertifiedPair& pair, double p, double r,
                                const CheckConfig& config = {});

ChainReport check_theorem_4_1(const WeightedFamily& family, const NamedFunction& f,
                              const NamedFunction& g, double alpha,
                              const CheckConfig& config = {});

ChainReport check_theorem_4_1(const WeightedFamily& family, const NamedFunction& f,
                              const NamedFunction& g, double alpha, double beta,
                              const CheckConfig& config = {});

ChainReport check_theorem_4_2(const CertifiedPair& pair, const PositiveLinearMap& phi,
                              const NamedFunction& f, double alpha,
                              const CheckConfig& config = {});

ChainReport check_theorem_4_2(const CertifiedPair& pair, const PositiveLinearMap& phi,
                              const NamedFunction& f, double alpha, double beta,
                              const CheckConfig& config = {});

/// f = t^p with a given alpha and beta from the closed form at q = p.
ChainReport check_corollary_4_3(const CertifiedPair& pair, const PositiveLinearMap& phi,
                                double p, double alpha, const CheckConfig& config = {});

enum class ReverseMode { ratio, difference };

ChainReport check_corollary_4_4(const CertifiedPair& pair, const PositiveLinearMap& phi, double p,
                                ReverseMode mode, const CheckConfig& config = {});

ChainReport check_theorem_4_5(const CertifiedPair& pair, const PositiveLinearMap& phi, double p,
                              const CheckConfig& config = {});

/// Right-hand operator of the ratio / difference / given-alpha reverse chains,
/// exposed so the alpha = K(m, M, p) variant can be compared with ratio mode.
HermitianMatrix reverse_chain_bound(const CertifiedPair& pair, const PositiveLinearMap& phi,
                                    double p, double scale_of_phi_a, double scale_of_mean);

}  // namespace kanto
