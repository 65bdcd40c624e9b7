#include "kanto/generators.hpp"

#include <cmath>
#include <numbers>

namespace kanto {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Pull the spectrum inside w when rounding in U diag(lambda) U^H pushed an
// endpoint eigenvalue a few ulps outside. Contracts toward the window center.
HermitianMatrix fit_to_window(HermitianMatrix h, const SpectralWindow& w) {
    const double center = 0.5 * (w.lo + w.hi);
    const double half = 0.5 * w.width();
    for (int attempt = 0; attempt < 16; ++attempt) {
        const RealVector values = eigenvalues_hermitian(h);
        const double excess = std::max(w.lo - values(0), values(values.size() - 1) - w.hi);
        if (excess <= 0.0) return h;
        const double shrink = 1.0 - 4.0 * (excess + 1e-16 * half) / half;
        const HermitianMatrix centered = h - center * HermitianMatrix::identity(h.dim());
        h = shrink * centered + center * HermitianMatrix::identity(h.dim());
    }
    throw GenerationError("could not place generated spectrum inside the window");
}

void require_verified(const CertifiedPair& pair) {
    if (!verify_certificate(pair)) {
        throw GenerationError(std::string("generated pair failed its ") +
                              to_string(pair.certificate) + " certificate (seed " +
                              std::to_string(pair.seed) + ")");
    }
}

void require_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) throw DimensionError("generator dimension out of range");
}

ComplexMatrix complex_gaussian_matrix(int rows, int cols, RngState& rng) {
    ComplexMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_gaussian();
    }
    return g;
}

}  // namespace

std::uint64_t RngState::next_u64() {
    const std::uint64_t draw = splitmix64(seed_ + (counter_ + 1) * kGoldenGamma);
    ++counter_;
    return draw;
}

double RngState::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngState::gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex RngState::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

const char* to_string(Certificate c) {
    switch (c) {
        case Certificate::dominated: return "dominated";
        case Certificate::dominated_lower: return "dominated_lower";
        case Certificate::chaotic: return "chaotic";
        case Certificate::relative: return "relative";
    }
    return "unknown";
}

Certificate certificate_from_string(const std::string& name) {
    if (name == "dominated") return Certificate::dominated;
    if (name == "dominated_lower") return Certificate::dominated_lower;
    if (name == "chaotic") return Certificate::chaotic;
    if (name == "relative") return Certificate::relative;
    throw ParameterError("unknown certificate '" + name + "'");
}

bool verify_certificate(const CertifiedPair& pair, const TolerancePolicy& policy) {
    const SpectralWindow& w = pair.window;
    if (pair.a.dim() != pair.b.dim()) return false;
    const RealVector a_values = eigenvalues_hermitian(pair.a);
    if (!(a_values(0) > 0.0)) return false;

    switch (pair.certificate) {
        case Certificate::dominated:
            return loewner_leq(pair.a, pair.b, policy).holds && spectrum_in_window(pair.b, w);
        case Certificate::dominated_lower:
            return loewner_leq(pair.a, pair.b, policy).holds && spectrum_in_window(pair.a, w);
        case Certificate::chaotic:
            return spectrum_in_window(pair.b, w, window_tolerance(w)) &&
                   loewner_leq(matrix_log(pair.a), matrix_log(pair.b), policy).holds;
        case Certificate::relative:
            return loewner_leq(w.lo * pair.a, pair.b, policy).holds &&
                   loewner_leq(pair.b, w.hi * pair.a, policy).holds;
    }
    return false;
}

ComplexMatrix random_unitary(int dim, RngState& rng) {
    require_dim(dim);
    const ComplexMatrix g = complex_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const double magnitude = std::abs(r(j, j));
        if (magnitude > 0.0) q.col(j) *= r(j, j) / magnitude;
    }
    return q;
}

HermitianMatrix gen_hermitian_in_window(int dim, const SpectralWindow& w, RngState& rng) {
    require_dim(dim);
    RealVector values(dim);
    for (int i = 0; i < dim; ++i) {
        const double u = rng.uniform();
        if (u < 0.2) {
            values(i) = w.lo;
        } else if (u < 0.4) {
            values(i) = w.hi;
        } else {
            values(i) = rng.uniform(w.lo, w.hi);
        }
    }
    if (dim == 1) return HermitianMatrix::diagonal(values);
    const ComplexMatrix u = random_unitary(dim, rng);
    return fit_to_window(HermitianMatrix::from_trusted(u * values.asDiagonal() * u.adjoint()), w);
}

HermitianMatrix random_psd(int dim, double target_norm, RngState& rng) {
    require_dim(dim);
    const ComplexMatrix g = complex_gaussian_matrix(dim, dim, rng);
    const HermitianMatrix gram = HermitianMatrix::from_trusted(g.adjoint() * g);
    const double identity_share = rng.uniform();
    const double gram_norm = eigenvalues_hermitian(gram).maxCoeff();
    if (!(gram_norm > 0.0) || target_norm == 0.0) return HermitianMatrix::zero(dim);
    // Both pieces have norm <= 1 and share the top of the spectrum up to
    // rounding; rescale by the measured norm to hit target_norm.
    HermitianMatrix blend = (1.0 - identity_share) / gram_norm * gram +
                            identity_share * HermitianMatrix::identity(dim);
    const double blend_norm = eigenvalues_hermitian(blend).maxCoeff();
    return (target_norm / blend_norm) * blend;
}

namespace {

double draw_rho(const DominatedOptions& options, RngState& rng) {
    const double rho = options.rho ? *options.rho : rng.uniform();
    if (rho < 0.0 || rho > 1.0) throw ParameterError("rho must lie in [0, 1]");
    return rho;
}

}  // namespace

CertifiedPair gen_dominated_pair(int dim, const SpectralWindow& w, RngState& rng,
                                 const DominatedOptions& options) {
    w.require_positive();
    const HermitianMatrix b = gen_hermitian_in_window(dim, w, rng);
    const double rho = draw_rho(options, rng);
    const double margin = 1e-6 * w.lo;
    const double lambda_min = eigenvalues_hermitian(b)(0);
    const HermitianMatrix p = random_psd(dim, rho * (lambda_min - margin), rng);

    CertifiedPair pair{b - p, b, w, Certificate::dominated, rng.seed()};
    require_verified(pair);
    return pair;
}

CertifiedPair gen_dominated_lower_pair(int dim, const SpectralWindow& w, RngState& rng,
                                       const DominatedOptions& options) {
    w.require_positive();
    const HermitianMatrix a = gen_hermitian_in_window(dim, w, rng);
    const double rho = draw_rho(options, rng);
    const HermitianMatrix p = random_psd(dim, rho * w.width(), rng);

    CertifiedPair pair{a, a + p, w, Certificate::dominated_lower, rng.seed()};
    require_verified(pair);
    return pair;
}

CertifiedPair gen_chaotic_pair(int dim, const SpectralWindow& w, RngState& rng,
                               const ChaoticOptions& options) {
    w.require_positive();
    const SpectralWindow log_window(std::log(w.lo), std::log(w.hi));
    const HermitianMatrix log_b = gen_hermitian_in_window(dim, log_window, rng);
    const double gap = options.gap_norm ? *options.gap_norm : rng.uniform(0.0, 2.0);
    if (gap < 0.0 || gap > 2.0) throw ParameterError("chaotic gap norm must lie in [0, 2]");
    const HermitianMatrix q = random_psd(dim, gap, rng);

    const HermitianMatrix b = fit_to_window(matrix_exp(log_b), w);
    const HermitianMatrix a = matrix_exp(log_b - q);
    CertifiedPair pair{a, b, w, Certificate::chaotic, rng.seed()};
    require_verified(pair);
    return pair;
}

CertifiedPair gen_relative_pair(int dim, const SpectralWindow& w, RngState& rng) {
    w.require_positive();
    const HermitianMatrix a = gen_hermitian_in_window(dim, SpectralWindow(0.5, 2.0), rng);
    const HermitianMatrix c = gen_hermitian_in_window(dim, w, rng);
    const HermitianMatrix a_half = matrix_power(a, 0.5);
    CertifiedPair pair{a, c.congruence(a_half.matrix()), w, Certificate::relative, rng.seed()};
    require_verified(pair);
    return pair;
}

PositiveLinearMap gen_positive_linear_map(int dim_in, int dim_out, int n_kraus, RngState& rng) {
    require_dim(dim_in);
    require_dim(dim_out);
    if (n_kraus < 1) throw ParameterError("n_kraus must be at least 1");

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<ComplexMatrix> v;
        ComplexMatrix s = ComplexMatrix::Zero(dim_out, dim_out);
        for (int i = 0; i < n_kraus; ++i) {
            v.push_back(complex_gaussian_matrix(dim_in, dim_out, rng));
            s += v.back().adjoint() * v.back();
        }
        const SpectralDecomposition spectral = eig_hermitian(HermitianMatrix::from_trusted(s));
        if (!(spectral.min() > 1e-12 * spectral.max())) continue;
        const HermitianMatrix s_inv_half =
            spectral.apply([](double t) { return 1.0 / std::sqrt(t); });
        for (auto& w : v) w = w * s_inv_half.matrix();
        return PositiveLinearMap(std::move(v));
    }
    throw GenerationError("Kraus normalization matrix is singular (n_kraus * dim_in < dim_out?)");
}

}  // namespace kanto
