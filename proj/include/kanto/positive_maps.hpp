#pragma once

#include <vector>

#include "kanto/hermitian.hpp"

namespace kanto {

/// Normalized positive linear map in Kraus form,
///   Phi(X) = sum_i W_i^H X W_i,   sum_i W_i^H W_i = I_{dim_out},
/// where each W_i is dim_in x dim_out. Normalization is checked to 1e-10.
class PositiveLinearMap {
public:
    explicit PositiveLinearMap(std::vector<ComplexMatrix> kraus);

    static PositiveLinearMap identity(int dim);
    /// Phi(X) = U^H X U.
    static PositiveLinearMap unitary_conjugation(const ComplexMatrix& u);
    /// Keeps the diagonal blocks of the given sizes and zeroes the rest.
    static PositiveLinearMap pinching(const std::vector<int>& block_sizes);

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

    HermitianMatrix operator()(const HermitianMatrix& x) const;

private:
    std::vector<ComplexMatrix> kraus_;
    int dim_in_ = 0;
    int dim_out_ = 0;
};

inline constexpr double kNormalizationTolerance = 1e-10;

HermitianMatrix apply_map(const PositiveLinearMap& phi, const HermitianMatrix& x);

struct WeightedTerm {
    double weight = 0.0;
    PositiveLinearMap map;
    HermitianMatrix operand;
};

/// Convex combination data sum_i w_i Phi_i(A_i) with every A_i inside a
/// common spectral window. Validation throws HypothesisError.
class WeightedFamily {
public:
    WeightedFamily(std::vector<WeightedTerm> items, SpectralWindow window);

    const std::vector<WeightedTerm>& items() const { return items_; }
    const SpectralWindow& window() const { return window_; }
    int dim_in() const { return items_.front().map.dim_in(); }
    int dim_out() const { return items_.front().map.dim_out(); }

    /// sum_i w_i Phi_i(transform(A_i)).
    template <typename Transform>
    HermitianMatrix aggregate(Transform&& transform) const {
        HermitianMatrix sum = HermitianMatrix::zero(dim_out());
        for (const auto& item : items_) sum += item.weight * item.map(transform(item.operand));
        return sum;
    }

private:
    std::vector<WeightedTerm> items_;
    SpectralWindow window_;
};

/// Pieces shared by every mean of (A, B): A^{1/2}, A^{-1/2} and the relative
/// operator A^{-1/2} B A^{-1/2} with its spectral decomposition.
///
/// A must be strictly positive with lambda_min(A) >= 1e-10 lambda_max(A).
struct ConnectionFrame {
    HermitianMatrix a_half;
    HermitianMatrix a_inv_half;
    HermitianMatrix relative;
    SpectralDecomposition relative_spectral;

    /// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}.
    HermitianMatrix connect(const ScalarFunction& f) const;
    /// A^{1/2} X A^{1/2}.
    HermitianMatrix lift(const HermitianMatrix& x) const;
};

inline constexpr double kConditioningGuard = 1e-10;

ConnectionFrame make_connection_frame(const HermitianMatrix& a, const HermitianMatrix& b);

HermitianMatrix f_connection(const HermitianMatrix& a, const HermitianMatrix& b,
                             const ScalarFunction& f);

/// Weighted geometric-type mean A^{1/2} (A^{-1/2} B A^{-1/2})^v A^{1/2}, v real.
HermitianMatrix sharp(const HermitianMatrix& a, const HermitianMatrix& b, double v);
/// Same formula under the name used for negative parameters.
inline HermitianMatrix natural(const HermitianMatrix& a, const HermitianMatrix& b, double v) {
    return sharp(a, b, v);
}

/// (A natural_p B - A) / p for p < 0.
HermitianMatrix tsallis_entropy(const HermitianMatrix& a, const HermitianMatrix& b, double p);

}  // namespace kanto
