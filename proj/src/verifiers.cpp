#include "kanto/verifiers.hpp"

#include <cmath>
#include <sstream>

#include "kanto/constants.hpp"

namespace kanto {

namespace {

std::string format_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

class ChainBuilder {
public:
    ChainBuilder(std::string theorem_id, const CheckConfig& config, std::uint64_t seed, int dim)
        : policy_(config.policy()) {
        report_.theorem_id = std::move(theorem_id);
        report_.seed = seed;
        report_.dim = dim;
    }

    void param(const std::string& name, double value) { report_.params.emplace_back(name, value); }
    void tag(const std::string& name, std::string value) {
        report_.tags.emplace_back(name, std::move(value));
    }
    void warn(std::string message) { report_.warnings.push_back(std::move(message)); }

    // lhs <= rhs
    void leq(std::string label, const HermitianMatrix& lhs, const HermitianMatrix& rhs) {
        const LoewnerVerdict verdict = loewner_leq(lhs, rhs, policy_);
        Link link;
        link.label = std::move(label);
        link.min_slack = verdict.min_slack;
        link.tolerance = verdict.tolerance_used;
        link.holds = verdict.holds;
        link.tight = std::abs(verdict.min_slack) < verdict.tolerance_used;
        report_.links.push_back(std::move(link));
    }

    ChainReport finish() {
        report_.overall = true;
        for (const auto& link : report_.links) report_.overall = report_.overall && link.holds;
        return std::move(report_);
    }

private:
    TolerancePolicy policy_;
    ChainReport report_;
};

void require_certificate(const CertifiedPair& pair, Certificate expected, const char* check) {
    if (pair.certificate != expected) {
        throw HypothesisError(std::string(check) + " needs a " + to_string(expected) +
                              " pair, got " + to_string(pair.certificate));
    }
}

void add_window(ChainBuilder& chain, const SpectralWindow& w) {
    chain.param("m", w.lo);
    chain.param("M", w.hi);
}

HermitianMatrix identity_like(const HermitianMatrix& x) { return HermitianMatrix::identity(x.dim()); }

HermitianMatrix power_of(const SpectralDecomposition& spectral, double p) {
    return matrix_power(spectral, p);
}

bool degenerate(double exponent) { return exponent == 0.0 || exponent == 1.0; }

// Shared body of the reverse chains through a normalized map and the
// relative operator A^{-1/2} B A^{-1/2}.
struct MappedReverseTerms {
    HermitianMatrix phi_a;
    HermitianMatrix phi_b;
    HermitianMatrix phi_connection;  // Phi(A sigma_f B)
    HermitianMatrix phi_interpolant; // Phi(A^{1/2} G(A^{-1/2} B A^{-1/2}) A^{1/2})
};

MappedReverseTerms mapped_reverse_terms(const CertifiedPair& pair, const PositiveLinearMap& phi,
                                        const ScalarFunction& f) {
    const SpectralWindow& w = pair.window;
    const ConnectionFrame frame = make_connection_frame(pair.a, pair.b);
    if (!spectrum_in_window(frame.relative_spectral, w, window_tolerance(w))) {
        throw HypothesisError("relative operator A^{-1/2} B A^{-1/2} leaves the window");
    }
    MappedReverseTerms terms;
    terms.phi_a = phi(pair.a);
    terms.phi_b = phi(pair.b);
    terms.phi_connection = phi(frame.connect(f));
    terms.phi_interpolant =
        phi(frame.lift(superlog_bound(frame.relative_spectral, w, f(w.lo), f(w.hi))));
    return terms;
}

}  // namespace

const char* to_string(LinkStatus status) {
    switch (status) {
        case LinkStatus::pass: return "pass";
        case LinkStatus::tight: return "tight";
        case LinkStatus::fail: return "fail";
    }
    return "unknown";
}

LinkStatus ChainReport::status() const {
    LinkStatus worst = LinkStatus::pass;
    for (const auto& link : links) {
        const LinkStatus s = link.status();
        if (s == LinkStatus::fail) return LinkStatus::fail;
        if (s == LinkStatus::tight) worst = LinkStatus::tight;
    }
    return worst;
}

double ChainReport::worst_slack() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& link : links) worst = std::min(worst, link.min_slack);
    return worst;
}

const Link* ChainReport::find_link(const std::string& label) const {
    for (const auto& link : links) {
        if (link.label == label) return &link;
    }
    return nullptr;
}

NamedFunction power_named(double p) {
    return {"t^" + format_number(p), power_function(p)};
}

NamedFunction log_named() {
    return {"log t", [](double t) { return std::log(t); }};
}

// ---------------------------------------------------------------------------

ChainReport check_theorem_1_1(const CertifiedPair& pair, double p, const CheckConfig& config) {
    require_certificate(pair, Certificate::dominated_lower, "check_theorem_1_1");
    if (p < 1.0) throw ParameterError("check_theorem_1_1 requires p >= 1");
    if (p == 1.0) throw DegenerateExponentError("K(m, M, p) is degenerate at p = 1");

    const SpectralWindow& w = pair.window;
    const double k = kantorovich_K(w, p);
    const double ratio_bound = std::pow(w.hi / w.lo, p - 1.0);
    const HermitianMatrix a_p = matrix_power(pair.a, p);
    const HermitianMatrix b_p = matrix_power(pair.b, p);

    ChainBuilder chain("theorem_1_1", config, pair.seed, pair.a.dim());
    add_window(chain, w);
    chain.param("p", p);
    chain.param("K", k);
    chain.leq("A^p <= K B^p", a_p, k * b_p);
    chain.leq("K B^p <= (M/m)^(p-1) B^p", k * b_p, ratio_bound * b_p);
    chain.leq("end_to_end", a_p, ratio_bound * b_p);
    return chain.finish();
}

namespace {

ChainReport theorem_2_1_with_beta(const CertifiedPair& pair, const NamedFunction& f,
                                  const NamedFunction& g, double alpha, double beta,
                                  MonotoneCase which, const CheckConfig& config) {
    const SpectralWindow& w = pair.window;
    const SpectralDecomposition b = eig_hermitian(pair.b);
    const HermitianMatrix f_b = b.apply(f.fn);
    const HermitianMatrix interpolant = superlog_bound(b, w, f(w.lo), f(w.hi));
    const HermitianMatrix upper =
        alpha * apply_scalar_function(pair.a, g.fn) + beta * identity_like(pair.a);

    ChainBuilder chain("theorem_2_1", config, pair.seed, pair.a.dim());
    add_window(chain, w);
    chain.param("alpha", alpha);
    chain.param("beta", beta);
    chain.tag("f", f.name);
    chain.tag("g", g.name);
    chain.tag("case", which == MonotoneCase::decreasing_convex ? "i" : "ii");
    chain.leq("f(B) <= G(B)", f_b, interpolant);
    chain.leq("G(B) <= alpha g(A) + beta I", interpolant, upper);
    chain.leq("end_to_end", f_b, upper);
    return chain.finish();
}

}  // namespace

ChainReport check_theorem_2_1(const CertifiedPair& pair, const NamedFunction& f,
                              const NamedFunction& g, double alpha, MonotoneCase which,
                              const CheckConfig& config) {
    require_certificate(pair, Certificate::dominated, "check_theorem_2_1");
    if (which == MonotoneCase::decreasing_convex && !(alpha > 0.0)) {
        throw ParameterError("decreasing convex g needs alpha > 0");
    }
    if (which == MonotoneCase::increasing_concave && !(alpha < 0.0)) {
        throw ParameterError("increasing concave g needs alpha < 0");
    }
    const double beta = beta_generic(f.fn, g.fn, alpha, pair.window).value;
    return theorem_2_1_with_beta(pair, f, g, alpha, beta, which, config);
}

ChainReport check_theorem_2_1(const CertifiedPair& pair, const NamedFunction& f,
                              const NamedFunction& g, double alpha, double beta,
                              MonotoneCase which, const CheckConfig& config) {
    require_certificate(pair, Certificate::dominated, "check_theorem_2_1");
    return theorem_2_1_with_beta(pair, f, g, alpha, beta, which, config);
}

namespace {

// B^p <= G(B) <= rhs with G interpolating m^p and M^p.
void power_chain(ChainBuilder& chain, const CertifiedPair& pair, double p,
                 const HermitianMatrix& rhs, const std::string& rhs_label) {
    const SpectralWindow& w = pair.window;
    const SpectralDecomposition b = eig_hermitian(pair.b);
    const HermitianMatrix b_p = power_of(b, p);
    const HermitianMatrix interpolant =
        superlog_bound(b, w, std::pow(w.lo, p), std::pow(w.hi, p));
    chain.leq("B^p <= G(B)", b_p, interpolant);
    chain.leq("G(B) <= " + rhs_label, interpolant, rhs);
    chain.leq("end_to_end", b_p, rhs);
}

}  // namespace

ChainReport check_corollary_2_2(const CertifiedPair& pair, double p, double q, double alpha,
                                const CheckConfig& config) {
    require_certificate(pair, Certificate::dominated, "check_corollary_2_2");
    if (p > 0.0 || q > 0.0 || !(alpha > 0.0)) {
        throw ParameterError("check_corollary_2_2 requires p <= 0, q <= 0, alpha > 0");
    }
    const SpectralWindow& w = pair.window;
    ChainBuilder chain("corollary_2_2", config, pair.seed, pair.a.dim());
    double beta;
    if (degenerate(q)) {
        beta = beta_generic(power_function(p), power_function(q), alpha, w).value;
        chain.tag("beta_source", "oracle");
    } else {
        beta = beta_power_closed(w, p, q, alpha);
        chain.tag("beta_source", "closed_form");
    }
    add_window(chain, w);
    chain.param("p", p);
    chain.param("q", q);
    chain.param("alpha", alpha);
    chain.param("beta", beta);
    const HermitianMatrix rhs = alpha * matrix_power(pair.a, q) + beta * identity_like(pair.a);
    power_chain(chain, pair, p, rhs, "alpha A^q + beta I");
    return chain.finish();
}

ChainReport check_corollary_2_3(const CertifiedPair& pair, double p, double q,
                                const CheckConfig& config) {
    require_certificate(pair, Certificate::dominated, "check_corollary_2_3");
    const SpectralWindow& w = pair.window;
    ChainBuilder chain("corollary_2_3", config, pair.seed, pair.a.dim());
    if (p > 0.0 || q < -1.0 || q > 0.0) {
        chain.warn("exponents outside p <= 0, -1 <= q <= 0: fuzz evaluation");
    }
    double k;
    if (degenerate(q)) {
        k = alpha_ratio(power_function(p), power_function(q), w).value;
        chain.tag("constant_source", "oracle");
    } else {
        k = kantorovich_K2(w, p, q);
        chain.tag("constant_source", "closed_form");
    }
    add_window(chain, w);
    chain.param("p", p);
    chain.param("q", q);
    chain.param("K", k);
    power_chain(chain, pair, p, k * matrix_power(pair.a, q), "K(m,M,p,q) A^q");
    return chain.finish();
}

ChainReport check_corollary_2_4(const CertifiedPair& pair, double p, double q,
                                const CheckConfig& config) {
    require_certificate(pair, Certificate::dominated, "check_corollary_2_4");
    if (p > 0.0 || q > 0.0) throw ParameterError("check_corollary_2_4 requires p, q <= 0");
    const SpectralWindow& w = pair.window;
    ChainBuilder chain("corollary_2_4", config, pair.seed, pair.a.dim());
    double c;
    if (degenerate(q)) {
        c = beta_generic(power_function(p), power_function(q), 1.0, w).value;
        chain.tag("constant_source", "oracle");
    } else {
        c = kantorovich_C2(w, p, q);
        chain.tag("constant_source", "closed_form");
    }
    add_window(chain, w);
    chain.param("p", p);
    chain.param("q", q);
    chain.param("C", c);
    power_chain(chain, pair, p, c * identity_like(pair.a) + matrix_power(pair.a, q),
                "C(m,M,p,q) I + A^q");
    return chain.finish();
}

// ---------------------------------------------------------------------------
// Chaotic order

namespace {

void require_chaotic_exponents(double p, double r, const char* check) {
    if (p > 0.0 || r > 0.0) throw ParameterError(std::string(check) + " requires p, r <= 0");
    if (p + r > -1e-3) {
        throw DegenerateExponentError(std::string(check) + ": p + r = " + format_number(p + r) +
                                      " too close to 0");
    }
}

ChainReport lemma_link(const CertifiedPair& pair, double p, double r, double outer_exponent,
                       const std::string& id, const std::string& label,
                       const CheckConfig& config) {
    const SpectralDecomposition b = eig_hermitian(pair.b);
    const HermitianMatrix b_r = power_of(b, r);
    const HermitianMatrix b_half_r = power_of(b, r / 2.0);
    const HermitianMatrix inner = matrix_power(pair.a, p).congruence(b_half_r.matrix());
    const HermitianMatrix rhs = matrix_power(inner, outer_exponent);

    ChainBuilder chain(id, config, pair.seed, pair.a.dim());
    add_window(chain, pair.window);
    chain.param("p", p);
    chain.param("r", r);
    chain.leq(label, b_r, rhs);
    return chain.finish();
}

}  // namespace

ChainReport check_lemma_3_1_forward(const CertifiedPair& pair, double p, double r,
                                    const CheckConfig& config) {
    require_certificate(pair, Certificate::chaotic, "check_lemma_3_1_forward");
    require_chaotic_exponents(p, r, "check_lemma_3_1_forward");
    return lemma_link(pair, p, r, r / (p + r), "lemma_3_1",
                      "B^r <= (B^(r/2) A^p B^(r/2))^(r/(p+r))", config);
}

ChainReport check_lemma_3_1_exponent_variant(const CertifiedPair& pair, double p, double r,
                                             const CheckConfig& config) {
    require_certificate(pair, Certificate::chaotic, "check_lemma_3_1_exponent_variant");
    require_chaotic_exponents(p, r, "check_lemma_3_1_exponent_variant");
    return lemma_link(pair, p, r, p / (p + r), "lemma_3_1_variant",
                      "B^r <= (B^(r/2) A^p B^(r/2))^(p/(p+r))", config);
}

namespace {

// B^p <= B^{-r} G_{p+r}(B) <= rhs, the middle term as one scalar function of B.
ChainReport chaotic_chain(const CertifiedPair& pair, double p, double r, const std::string& id,
                          const std::string& constant_name, double constant,
                          const HermitianMatrix& rhs, const std::string& rhs_label,
                          const CheckConfig& config) {
    const SpectralWindow& w = pair.window;
    const double s = p + r;
    const SpectralDecomposition b = eig_hermitian(pair.b);
    if (!spectrum_in_window(b, w, window_tolerance(w))) {
        throw HypothesisError(id + ": spectrum of B leaves the window");
    }
    const double lo_s = std::pow(w.lo, s);
    const double hi_s = std::pow(w.hi, s);
    const HermitianMatrix middle =
        b.apply([&](double t) { return std::pow(t, -r) * log_interpolant(t, w, lo_s, hi_s); });
    const HermitianMatrix b_p = power_of(b, p);

    ChainBuilder chain(id, config, pair.seed, pair.a.dim());
    if (r < -1.0) chain.warn("r < -1: outside the stated range, fuzz evaluation");
    add_window(chain, w);
    chain.param("p", p);
    chain.param("r", r);
    chain.param(constant_name, constant);
    chain.leq("B^p <= B^(-r) G_(p+r)(B)", b_p, middle);
    chain.leq("B^(-r) G_(p+r)(B) <= " + rhs_label, middle, rhs);
    chain.leq("end_to_end", b_p, rhs);
    return chain.finish();
}

}  // namespace

ChainReport check_corollary_3_2(const CertifiedPair& pair, double p, double r,
                                const CheckConfig& config) {
    require_certificate(pair, Certificate::chaotic, "check_corollary_3_2");
    require_chaotic_exponents(p, r, "check_corollary_3_2");
    const double k = kantorovich_K(pair.window, p + r);
    return chaotic_chain(pair, p, r, "corollary_3_2", "K", k, k * matrix_power(pair.a, p),
                         "K(m,M,p+r) A^p", config);
}

ChainReport check_corollary_3_3(const CertifiedPair& pair, double p, double r,
                                const CheckConfig& config) {
    require_certificate(pair, Certificate::chaotic, "check_corollary_3_3");
    require_chaotic_exponents(p, r, "check_corollary_3_3");
    const double c = kantorovich_C(pair.window, p + r);
    return chaotic_chain(pair, p, r, "corollary_3_3", "C", c,
                         c * identity_like(pair.a) + matrix_power(pair.a, p),
                         "C(m,M,p+r) I + A^p", config);
}

// ---------------------------------------------------------------------------
// Positive maps

ChainReport check_theorem_4_1(const WeightedFamily& family, const NamedFunction& f,
                              const NamedFunction& g, double alpha, double beta,
                              const CheckConfig& config) {
    const SpectralWindow& w = family.window();
    const double f_lo = f(w.lo);
    const double f_hi = f(w.hi);
    const HermitianMatrix mapped_f =
        family.aggregate([&](const HermitianMatrix& x) { return apply_scalar_function(x, f.fn); });
    const HermitianMatrix mapped_interpolant = family.aggregate(
        [&](const HermitianMatrix& x) { return superlog_bound(x, w, f_lo, f_hi); });
    const HermitianMatrix mean = family.aggregate([](const HermitianMatrix& x) { return x; });
    const HermitianMatrix upper =
        alpha * apply_scalar_function(mean, g.fn) + beta * identity_like(mean);

    ChainBuilder chain("theorem_4_1", config, 0, family.dim_in());
    add_window(chain, w);
    chain.param("n", static_cast<double>(family.items().size()));
    chain.param("alpha", alpha);
    chain.param("beta", beta);
    chain.tag("f", f.name);
    chain.tag("g", g.name);
    chain.leq("sum w Phi(f(A)) <= sum w Phi(G(A))", mapped_f, mapped_interpolant);
    chain.leq("sum w Phi(G(A)) <= alpha g(sum w Phi(A)) + beta I", mapped_interpolant, upper);
    chain.leq("end_to_end", mapped_f, upper);
    return chain.finish();
}

ChainReport check_theorem_4_1(const WeightedFamily& family, const NamedFunction& f,
                              const NamedFunction& g, double alpha, const CheckConfig& config) {
    const double beta = beta_generic(f.fn, g.fn, alpha, family.window()).value;
    return check_theorem_4_1(family, f, g, alpha, beta, config);
}

ChainReport check_theorem_4_2(const CertifiedPair& pair, const PositiveLinearMap& phi,
                              const NamedFunction& f, double alpha, double beta,
                              const CheckConfig& config) {
    require_certificate(pair, Certificate::relative, "check_theorem_4_2");
    const MappedReverseTerms terms = mapped_reverse_terms(pair, phi, f.fn);
    const HermitianMatrix upper =
        beta * terms.phi_a + alpha * f_connection(terms.phi_a, terms.phi_b, f.fn);

    ChainBuilder chain("theorem_4_2", config, pair.seed, pair.a.dim());
    add_window(chain, pair.window);
    chain.param("alpha", alpha);
    chain.param("beta", beta);
    chain.tag("f", f.name);
    chain.leq("Phi(A sigma_f B) <= Phi(A^1/2 G A^1/2)", terms.phi_connection,
              terms.phi_interpolant);
    chain.leq("Phi(A^1/2 G A^1/2) <= beta Phi(A) + alpha Phi(A) sigma_f Phi(B)",
              terms.phi_interpolant, upper);
    chain.leq("end_to_end", terms.phi_connection, upper);
    return chain.finish();
}

ChainReport check_theorem_4_2(const CertifiedPair& pair, const PositiveLinearMap& phi,
                              const NamedFunction& f, double alpha, const CheckConfig& config) {
    const double beta = beta_generic(f.fn, f.fn, alpha, pair.window).value;
    return check_theorem_4_2(pair, phi, f, alpha, beta, config);
}

HermitianMatrix reverse_chain_bound(const CertifiedPair& pair, const PositiveLinearMap& phi,
                                    double p, double scale_of_phi_a, double scale_of_mean) {
    const HermitianMatrix phi_a = phi(pair.a);
    return scale_of_phi_a * phi_a + scale_of_mean * sharp(phi_a, phi(pair.b), p);
}

ChainReport check_corollary_4_3(const CertifiedPair& pair, const PositiveLinearMap& phi,
                                double p, double alpha, const CheckConfig& config) {
    require_certificate(pair, Certificate::relative, "check_corollary_4_3");
    if (p > 0.0 || !(alpha > 0.0)) {
        throw ParameterError("check_corollary_4_3 requires p <= 0 and alpha > 0");
    }
    const SpectralWindow& w = pair.window;
    const double beta = degenerate(p)
                            ? beta_generic(power_function(p), power_function(p), alpha, w).value
                            : beta_power_closed(w, p, p, alpha);
    const MappedReverseTerms terms = mapped_reverse_terms(pair, phi, power_function(p));
    const HermitianMatrix upper =
        beta * terms.phi_a + alpha * sharp(terms.phi_a, terms.phi_b, p);

    ChainBuilder chain("corollary_4_3", config, pair.seed, pair.a.dim());
    add_window(chain, w);
    chain.param("p", p);
    chain.param("alpha", alpha);
    chain.param("beta", beta);
    chain.leq("Phi(A #p B) <= Phi(A^1/2 G A^1/2)", terms.phi_connection, terms.phi_interpolant);
    chain.leq("Phi(A^1/2 G A^1/2) <= beta Phi(A) + alpha Phi(A) #p Phi(B)",
              terms.phi_interpolant, upper);
    chain.leq("end_to_end", terms.phi_connection, upper);
    return chain.finish();
}

ChainReport check_corollary_4_4(const CertifiedPair& pair, const PositiveLinearMap& phi, double p,
                                ReverseMode mode, const CheckConfig& config) {
    require_certificate(pair, Certificate::relative, "check_corollary_4_4");
    if (p > 0.0) throw ParameterError("check_corollary_4_4 requires p <= 0");
    const SpectralWindow& w = pair.window;
    const MappedReverseTerms terms = mapped_reverse_terms(pair, phi, power_function(p));
    const HermitianMatrix mean = sharp(terms.phi_a, terms.phi_b, p);

    const bool ratio = mode == ReverseMode::ratio;
    ChainBuilder chain(ratio ? "corollary_4_4_ratio" : "corollary_4_4_difference", config,
                       pair.seed, pair.a.dim());
    add_window(chain, w);
    chain.param("p", p);

    HermitianMatrix upper;
    std::string upper_label;
    if (ratio) {
        const double k = p == 0.0 ? alpha_ratio(power_function(p), power_function(p), w).value
                                  : kantorovich_K(w, p);
        chain.param("K", k);
        upper = k * mean;
        upper_label = "K(m,M,p) Phi(A) #p Phi(B)";
    } else {
        const double c =
            p == 0.0 ? beta_generic(power_function(p), power_function(p), 1.0, w).value
                     : kantorovich_C(w, p);
        chain.param("C", c);
        upper = c * terms.phi_a + mean;
        upper_label = "C(m,M,p) Phi(A) + Phi(A) #p Phi(B)";
    }
    chain.leq("Phi(A #p B) <= Phi(A^1/2 G A^1/2)", terms.phi_connection, terms.phi_interpolant);
    chain.leq("Phi(A^1/2 G A^1/2) <= " + upper_label, terms.phi_interpolant, upper);
    chain.leq("end_to_end", terms.phi_connection, upper);
    if (p >= -1.0 && p < 0.0) {
        chain.leq("baseline: Phi(A) #p Phi(B) <= Phi(A #p B)", mean, terms.phi_connection);
    }
    return chain.finish();
}

ChainReport check_theorem_4_5(const CertifiedPair& pair, const PositiveLinearMap& phi, double p,
                              const CheckConfig& config) {
    require_certificate(pair, Certificate::relative, "check_theorem_4_5");
    if (!(p >= -1.0 && p < 0.0)) {
        throw ParameterError("check_theorem_4_5 requires p in [-1, 0), got " + format_number(p));
    }
    const SpectralWindow& w = pair.window;
    const ConnectionFrame frame = make_connection_frame(pair.a, pair.b);
    if (!spectrum_in_window(frame.relative_spectral, w, window_tolerance(w))) {
        throw HypothesisError("relative operator A^{-1/2} B A^{-1/2} leaves the window");
    }
    const HermitianMatrix interpolant_lifted = frame.lift(
        superlog_bound(frame.relative_spectral, w, std::pow(w.lo, p), std::pow(w.hi, p)));
    const HermitianMatrix entropy =
        (1.0 / p) * (frame.connect(power_function(p)) - pair.a);

    const HermitianMatrix phi_a = phi(pair.a);
    const HermitianMatrix phi_b = phi(pair.b);
    const HermitianMatrix mean = sharp(phi_a, phi_b, p);
    const HermitianMatrix mapped_entropy = phi(entropy);
    const HermitianMatrix middle = (1.0 / p) * phi(interpolant_lifted - pair.a);
    const HermitianMatrix entropy_of_mapped = (1.0 / p) * (mean - phi_a);
    const double k = kantorovich_K(w, p);
    const double c = kantorovich_C(w, p);
    const HermitianMatrix ratio_lower = entropy_of_mapped - ((1.0 - k) / p) * mean;
    const HermitianMatrix difference_lower = entropy_of_mapped + (c / p) * phi_a;

    ChainBuilder chain("theorem_4_5", config, pair.seed, pair.a.dim());
    add_window(chain, w);
    chain.param("p", p);
    chain.param("K", k);
    chain.param("C", c);
    chain.leq("Phi(T_p(A|B)) >= (1/p) Phi(A^1/2 G A^1/2 - A)", middle, mapped_entropy);
    chain.leq("(1/p) Phi(A^1/2 G A^1/2 - A) >= T_p(Phi(A)|Phi(B)) - ((1-K)/p) Phi(A) #p Phi(B)",
              ratio_lower, middle);
    chain.leq("(1/p) Phi(A^1/2 G A^1/2 - A) >= T_p(Phi(A)|Phi(B)) + (C/p) Phi(A)",
              difference_lower, middle);
    chain.leq("baseline: Phi(T_p(A|B)) <= T_p(Phi(A)|Phi(B))", mapped_entropy, entropy_of_mapped);
    chain.leq("end_to_end ratio", ratio_lower, mapped_entropy);
    chain.leq("end_to_end difference", difference_lower, mapped_entropy);
    return chain.finish();
}

}  // namespace kanto
