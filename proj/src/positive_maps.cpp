#include "kanto/positive_maps.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace kanto {

PositiveLinearMap::PositiveLinearMap(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ParameterError("positive linear map needs at least one Kraus operator");
    dim_in_ = static_cast<int>(kraus_.front().rows());
    dim_out_ = static_cast<int>(kraus_.front().cols());
    if (dim_in_ < 1 || dim_in_ > kMaxDim || dim_out_ < 1 || dim_out_ > kMaxDim) {
        throw DimensionError("Kraus operator shape " + std::to_string(dim_in_) + "x" +
                             std::to_string(dim_out_) + " out of range");
    }
    ComplexMatrix normalization = ComplexMatrix::Zero(dim_out_, dim_out_);
    for (const auto& w : kraus_) {
        if (w.rows() != dim_in_ || w.cols() != dim_out_) {
            throw DimensionError("Kraus operators must share one shape");
        }
        normalization += w.adjoint() * w;
    }
    const double defect =
        (normalization - ComplexMatrix::Identity(dim_out_, dim_out_)).cwiseAbs().maxCoeff();
    if (defect > kNormalizationTolerance) {
        throw ParameterError("Kraus operators are not normalized: max |sum W^H W - I| = " +
                             std::to_string(defect));
    }
}

PositiveLinearMap PositiveLinearMap::identity(int dim) {
    return PositiveLinearMap({ComplexMatrix::Identity(dim, dim)});
}

PositiveLinearMap PositiveLinearMap::unitary_conjugation(const ComplexMatrix& u) {
    return PositiveLinearMap({u});
}

PositiveLinearMap PositiveLinearMap::pinching(const std::vector<int>& block_sizes) {
    const int dim = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
    std::vector<ComplexMatrix> projectors;
    int offset = 0;
    for (int size : block_sizes) {
        if (size < 1) throw ParameterError("pinching blocks must be nonempty");
        ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
        for (int i = offset; i < offset + size; ++i) p(i, i) = 1.0;
        projectors.push_back(std::move(p));
        offset += size;
    }
    return PositiveLinearMap(std::move(projectors));
}

HermitianMatrix PositiveLinearMap::operator()(const HermitianMatrix& x) const {
    if (x.dim() != dim_in_) {
        throw DimensionError("map expects input dimension " + std::to_string(dim_in_) + ", got " +
                             std::to_string(x.dim()));
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_out_, dim_out_);
    for (const auto& w : kraus_) out.noalias() += w.adjoint() * x.matrix() * w;
    return HermitianMatrix::from_trusted(out);
}

HermitianMatrix apply_map(const PositiveLinearMap& phi, const HermitianMatrix& x) { return phi(x); }

WeightedFamily::WeightedFamily(std::vector<WeightedTerm> items, SpectralWindow window)
    : items_(std::move(items)), window_(window) {
    if (items_.empty()) throw HypothesisError("weighted family is empty");
    double total = 0.0;
    for (const auto& item : items_) {
        if (!(item.weight > 0.0)) throw HypothesisError("weights must be positive");
        if (item.map.dim_in() != dim_in() || item.map.dim_out() != dim_out()) {
            throw HypothesisError("family maps must share dimensions");
        }
        if (item.operand.dim() != dim_in()) throw HypothesisError("operand dimension mismatch");
        if (!spectrum_in_window(item.operand, window_, window_tolerance(window_))) {
            throw HypothesisError("family operand spectrum leaves the window");
        }
        total += item.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw HypothesisError("weights sum to " + std::to_string(total) + ", not 1");
    }
}

HermitianMatrix ConnectionFrame::connect(const ScalarFunction& f) const {
    return lift(relative_spectral.apply(f));
}

HermitianMatrix ConnectionFrame::lift(const HermitianMatrix& x) const {
    return x.congruence(a_half.matrix());
}

ConnectionFrame make_connection_frame(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("connection operands differ in dimension");
    const SpectralDecomposition spectral = eig_hermitian(a);
    if (!(spectral.min() > 0.0) || spectral.min() < kConditioningGuard * spectral.max()) {
        throw DomainError("first operand of a connection must be strictly positive and "
                          "well conditioned, lambda_min = " + std::to_string(spectral.min()) +
                          ", lambda_max = " + std::to_string(spectral.max()));
    }
    ConnectionFrame frame;
    frame.a_half = spectral.apply([](double t) { return std::sqrt(t); });
    frame.a_inv_half = spectral.apply([](double t) { return 1.0 / std::sqrt(t); });
    frame.relative = b.congruence(frame.a_inv_half.matrix());
    frame.relative_spectral = eig_hermitian(frame.relative);
    return frame;
}

HermitianMatrix f_connection(const HermitianMatrix& a, const HermitianMatrix& b,
                             const ScalarFunction& f) {
    return make_connection_frame(a, b).connect(f);
}

HermitianMatrix sharp(const HermitianMatrix& a, const HermitianMatrix& b, double v) {
    const ConnectionFrame frame = make_connection_frame(a, b);
    if (v < 0.0 && !(frame.relative_spectral.min() > 0.0)) {
        throw DomainError("sharp with negative weight needs a strictly positive second operand");
    }
    return frame.connect([v](double t) { return std::pow(t, v); });
}

HermitianMatrix tsallis_entropy(const HermitianMatrix& a, const HermitianMatrix& b, double p) {
    if (!(p < 0.0)) {
        throw ParameterError("Tsallis relative entropy is defined here for p < 0, got " +
                             std::to_string(p));
    }
    return (1.0 / p) * (natural(a, b, p) - a);
}

}  // namespace kanto
