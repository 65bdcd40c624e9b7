#include "kanto/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace kanto {

namespace {

void require_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw DimensionError("matrix dimension " + std::to_string(dim) + " outside [1, " +
                             std::to_string(kMaxDim) + "]");
    }
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    ComplexMatrix h = 0.5 * (a + a.adjoint());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        h(i, i) = Complex(h(i, i).real(), 0.0);
    }
    return h;
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    const Eigen::Index n = a.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

// Cyclic complex Jacobi. Each rotation is J = D R D^H with R the real rotation
// annihilating |a_pq| and D = diag(1, e^{-i arg a_pq}) in the (p, q) plane.
void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
    const int n = static_cast<int>(a.rows());
    if (v != nullptr) *v = ComplexMatrix::Identity(n, n);
    if (n == 1) return;

    const double scale = a.norm();
    const double threshold = kJacobiRelativeThreshold * scale;
    for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off <= threshold) return;
        if (sweep == kJacobiMaxSweeps) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double magnitude = std::abs(apq);
                if (magnitude == 0.0) continue;

                const Complex phase = apq / magnitude;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * magnitude);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex s_phase = s * phase;             // J(p, q)
                const Complex s_conj = s * std::conj(phase);   // -J(q, p)

                // a <- a J
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s_conj * akq;
                    a(k, q) = s_phase * akp + c * akq;
                }
                // a <- J^H a
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - s_phase * aqk;
                    a(q, k) = s_conj * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);

                if (v != nullptr) {
                    for (int k = 0; k < n; ++k) {
                        const Complex vkp = (*v)(k, p);
                        const Complex vkq = (*v)(k, q);
                        (*v)(k, p) = c * vkp - s_conj * vkq;
                        (*v)(k, q) = s_phase * vkp + c * vkq;
                    }
                }
            }
        }
    }
    throw ConvergenceError("Jacobi iteration did not converge in " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps (off-diagonal norm " +
                           std::to_string(off_diagonal_norm(a)) + ")");
}

std::vector<int> ascending_order(const ComplexMatrix& diag_form) {
    std::vector<int> order(static_cast<std::size_t>(diag_form.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return diag_form(i, i).real() < diag_form(j, j).real();
    });
    return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix() : entries_(ComplexMatrix::Zero(1, 1)) {}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& entries) {
    if (entries.rows() != entries.cols()) {
        throw DimensionError("Hermitian matrix must be square, got " +
                             std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
    }
    require_dim(static_cast<int>(entries.rows()));
    if (!entries.allFinite()) throw DomainError("matrix has non-finite entries");

    const double tol = 1e-12 * entries.norm();
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        throw HermiticityError("matrix is not Hermitian: max |a_ij - conj(a_ji)| = " +
                               std::to_string(asym));
    }
    entries_ = hermitian_part(entries);
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& entries, Trusted)
    : entries_(hermitian_part(entries)) {}

HermitianMatrix HermitianMatrix::from_trusted(const ComplexMatrix& entries) {
    require_dim(static_cast<int>(entries.rows()));
    return HermitianMatrix(entries, Trusted{});
}

HermitianMatrix HermitianMatrix::identity(int dim) {
    require_dim(dim);
    return HermitianMatrix(ComplexMatrix::Identity(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(int dim) {
    require_dim(dim);
    return HermitianMatrix(ComplexMatrix::Zero(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    require_dim(n);
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = values[static_cast<std::size_t>(i)];
    return HermitianMatrix(d);
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& values) {
    return diagonal(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

HermitianMatrix HermitianMatrix::from_real(const Eigen::MatrixXd& entries) {
    return HermitianMatrix(ComplexMatrix(entries.cast<Complex>()));
}

HermitianMatrix HermitianMatrix::congruence(const ComplexMatrix& t) const {
    if (t.rows() != entries_.rows()) {
        throw DimensionError("congruence factor has " + std::to_string(t.rows()) +
                             " rows, matrix dimension is " + std::to_string(dim()));
    }
    return from_trusted(t.adjoint() * entries_ * t);
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
    if (other.dim() != dim()) throw DimensionError("dimension mismatch in addition");
    entries_ += other.entries_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
    if (other.dim() != dim()) throw DimensionError("dimension mismatch in subtraction");
    entries_ -= other.entries_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
    entries_ *= s;
    return *this;
}

// ---------------------------------------------------------------------------
// SpectralWindow

SpectralWindow::SpectralWindow(double lower, double upper) : lo(lower), hi(upper) {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw DomainError("spectral window requires finite m < M, got [" + std::to_string(lower) +
                          ", " + std::to_string(upper) + "]");
    }
}

void SpectralWindow::require_positive() const {
    if (!(lo > 0.0)) {
        throw DomainError("spectral window must satisfy 0 < m, got m = " + std::to_string(lo));
    }
}

// ---------------------------------------------------------------------------
// Spectral calculus

HermitianMatrix SpectralDecomposition::apply(const ScalarFunction& f) const {
    const Eigen::Index n = eigenvalues.size();
    RealVector values(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        values(i) = f(eigenvalues(i));
        if (!std::isfinite(values(i))) {
            throw DomainError("scalar function undefined at eigenvalue " +
                              std::to_string(eigenvalues(i)));
        }
    }
    return HermitianMatrix::from_trusted(eigenvectors * values.asDiagonal() *
                                         eigenvectors.adjoint());
}

HermitianMatrix SpectralDecomposition::reconstruct() const {
    return HermitianMatrix::from_trusted(eigenvectors * eigenvalues.asDiagonal() *
                                         eigenvectors.adjoint());
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& a) {
    ComplexMatrix work = a.matrix();
    ComplexMatrix v;
    jacobi_diagonalize(work, &v);

    const std::vector<int> order = ascending_order(work);
    const int n = a.dim();
    SpectralDecomposition out{RealVector(n), ComplexMatrix(n, n)};
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = work(src, src).real();
        out.eigenvectors.col(k) = v.col(src);
    }
    return out;
}

RealVector eigenvalues_hermitian(const HermitianMatrix& a) {
    ComplexMatrix work = a.matrix();
    jacobi_diagonalize(work, nullptr);
    RealVector values = work.diagonal().real();
    std::sort(values.data(), values.data() + values.size());
    return values;
}

HermitianMatrix apply_scalar_function(const HermitianMatrix& a, const ScalarFunction& f) {
    return eig_hermitian(a).apply(f);
}

namespace {

void require_strictly_positive(const SpectralDecomposition& spectral, const char* what) {
    if (!(spectral.min() > 0.0)) {
        throw DomainError(std::string(what) + " requires a strictly positive matrix, lambda_min = " +
                          std::to_string(spectral.min()));
    }
}

}  // namespace

HermitianMatrix matrix_power(const SpectralDecomposition& spectral, double p) {
    require_strictly_positive(spectral, "matrix_power");
    if (p == 0.0) {
        return HermitianMatrix::identity(spectral.dim());
    }
    return spectral.apply([p](double t) { return std::pow(t, p); });
}

HermitianMatrix matrix_power(const HermitianMatrix& a, double p) {
    return matrix_power(eig_hermitian(a), p);
}

HermitianMatrix matrix_log(const SpectralDecomposition& spectral) {
    require_strictly_positive(spectral, "matrix_log");
    return spectral.apply([](double t) { return std::log(t); });
}

HermitianMatrix matrix_log(const HermitianMatrix& a) { return matrix_log(eig_hermitian(a)); }

HermitianMatrix matrix_exp(const HermitianMatrix& a) {
    return eig_hermitian(a).apply([](double t) { return std::exp(t); });
}

LoewnerVerdict loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b,
                           const TolerancePolicy& policy) {
    if (a.dim() != b.dim()) {
        throw DimensionError("loewner_leq: dimensions " + std::to_string(a.dim()) + " and " +
                             std::to_string(b.dim()) + " differ");
    }
    const HermitianMatrix difference = b - a;
    LoewnerVerdict verdict;
    verdict.min_slack = eigenvalues_hermitian(difference)(0);
    verdict.tolerance_used = policy.tolerance_for(difference.frobenius_norm());
    verdict.holds = verdict.min_slack >= -verdict.tolerance_used;
    return verdict;
}

bool spectrum_in_window(const SpectralDecomposition& spectral, const SpectralWindow& w,
                        double tol) {
    return spectral.min() >= w.lo - tol && spectral.max() <= w.hi + tol;
}

bool spectrum_in_window(const HermitianMatrix& a, const SpectralWindow& w, double tol) {
    const RealVector values = eigenvalues_hermitian(a);
    return values(0) >= w.lo - tol && values(values.size() - 1) <= w.hi + tol;
}

double window_tolerance(const SpectralWindow& w) {
    return 1e-9 * (1.0 + std::max(std::abs(w.lo), std::abs(w.hi)));
}

double log_interpolant(double t, const SpectralWindow& w, double f_lo, double f_hi) {
    const double weight_hi = (t - w.lo) / w.width();
    const double weight_lo = (w.hi - t) / w.width();
    return std::exp(weight_lo * std::log(f_lo) + weight_hi * std::log(f_hi));
}

HermitianMatrix superlog_bound(const SpectralDecomposition& b, const SpectralWindow& w,
                               double f_lo, double f_hi) {
    if (!(f_lo > 0.0) || !(f_hi > 0.0)) {
        throw DomainError("superlog_bound needs f(m) > 0 and f(M) > 0, got " +
                          std::to_string(f_lo) + ", " + std::to_string(f_hi));
    }
    if (!spectrum_in_window(b, w, window_tolerance(w))) {
        throw HypothesisError("superlog_bound: spectrum [" + std::to_string(b.min()) + ", " +
                              std::to_string(b.max()) + "] outside window [" +
                              std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
    }
    return b.apply([&](double t) { return log_interpolant(t, w, f_lo, f_hi); });
}

HermitianMatrix superlog_bound(const HermitianMatrix& b, const SpectralWindow& w, double f_lo,
                               double f_hi) {
    return superlog_bound(eig_hermitian(b), w, f_lo, f_hi);
}

}  // namespace kanto
