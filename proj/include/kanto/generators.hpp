#pragma once

// Seeded instance generators. Every pair is re-verified against its
// certificate before it is returned; a failed verification throws
// GenerationError instead of handing out an untrustworthy instance.

#include <cstdint>
#include <optional>
#include <string>

#include "kanto/hermitian.hpp"
#include "kanto/positive_maps.hpp"

namespace kanto {

/// Counter-based stream: draw k is splitmix64(seed + k * golden_gamma), so a
/// fixed seed yields the same sequence on every platform.
class RngState {
public:
    explicit RngState(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller; consumes two draws.
    double gaussian();
    /// Real and imaginary parts independent N(0, 1/2).
    Complex complex_gaussian();

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

enum class Certificate {
    dominated,        // A <= B, m <= B <= M
    dominated_lower,  // A <= B, m <= A <= M
    chaotic,          // log A <= log B, m <= B <= M
    relative,         // m A <= B <= M A
};

const char* to_string(Certificate c);
Certificate certificate_from_string(const std::string& name);

struct CertifiedPair {
    HermitianMatrix a;
    HermitianMatrix b;
    SpectralWindow window;
    Certificate certificate = Certificate::dominated;
    std::uint64_t seed = 0;
};

/// Re-runs the hermitian-core checks for the pair's certificate.
bool verify_certificate(const CertifiedPair& pair, const TolerancePolicy& policy = {});

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix with the phases of diag(R) divided out.
ComplexMatrix random_unitary(int dim, RngState& rng);

/// Eigenvalues uniform on [m, M], with m and M each drawn with probability
/// 0.2, conjugated by random_unitary. The spectrum is inside the window with
/// zero tolerance.
HermitianMatrix gen_hermitian_in_window(int dim, const SpectralWindow& w, RngState& rng);

/// Random PSD matrix with spectral norm target_norm: normalized G^H G from a
/// square complex Gaussian G, blended with a uniformly drawn fraction of the
/// identity so both near-singular and well-conditioned perturbations occur.
HermitianMatrix random_psd(int dim, double target_norm, RngState& rng);

struct DominatedOptions {
    /// Fraction of the admissible perturbation norm; drawn uniformly when unset.
    std::optional<double> rho;
};

/// B in the window, A = B - P with ||P|| = rho (lambda_min(B) - 1e-6 m).
CertifiedPair gen_dominated_pair(int dim, const SpectralWindow& w, RngState& rng,
                                 const DominatedOptions& options = {});

/// A in the window, B = A + P with ||P|| = rho (M - m).
CertifiedPair gen_dominated_lower_pair(int dim, const SpectralWindow& w, RngState& rng,
                                       const DominatedOptions& options = {});

struct ChaoticOptions {
    /// Norm of the PSD gap Q between log B and log A; uniform on [0, 2] when unset.
    std::optional<double> gap_norm;
};

/// log B drawn in [ln m, ln M], log A = log B - Q with Q PSD, ||Q|| <= 2.
/// A <= B is not asserted; it fails on a small fraction of instances.
CertifiedPair gen_chaotic_pair(int dim, const SpectralWindow& w, RngState& rng,
                               const ChaoticOptions& options = {});

/// A with spectrum in [0.5, 2], C in the window, B = A^{1/2} C A^{1/2}.
CertifiedPair gen_relative_pair(int dim, const SpectralWindow& w, RngState& rng);

/// W_i = V_i S^{-1/2} with V_i complex Gaussian (dim_in x dim_out) and
/// S = sum V_i^H V_i. Needs n_kraus * dim_in >= dim_out.
PositiveLinearMap gen_positive_linear_map(int dim_in, int dim_out, int n_kraus, RngState& rng);

}  // namespace kanto
