#pragma once

// Complex Hermitian matrices, Jacobi eigendecomposition, spectral functional
// calculus and the Loewner order.

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "kanto/errors.hpp"

namespace kanto {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ScalarFunction = std::function<double(double)>;

inline constexpr int kMaxDim = 64;

/// Finite-dimensional stand-in for a bounded self-adjoint operator.
///
/// Construction checks squareness, the dimension cap, finiteness and
/// hermiticity (|a_ij - conj(a_ji)| <= 1e-12 * ||A||_F), then stores the
/// exactly Hermitian part (A + A^H) / 2.
class HermitianMatrix {
public:
    HermitianMatrix();
    explicit HermitianMatrix(const ComplexMatrix& entries);

    static HermitianMatrix identity(int dim);
    static HermitianMatrix zero(int dim);
    static HermitianMatrix diagonal(std::span<const double> values);
    static HermitianMatrix diagonal(const RealVector& values);
    static HermitianMatrix from_real(const Eigen::MatrixXd& entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const ComplexMatrix& matrix() const { return entries_; }
    Complex operator()(int i, int j) const { return entries_(i, j); }
    double frobenius_norm() const { return entries_.norm(); }

    /// T^H X T for any (possibly rectangular) T with T.rows() == dim().
    HermitianMatrix congruence(const ComplexMatrix& t) const;

    HermitianMatrix& operator+=(const HermitianMatrix& other);
    HermitianMatrix& operator-=(const HermitianMatrix& other);
    HermitianMatrix& operator*=(double s);

    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

    /// Skips the hermiticity check; used where the result is Hermitian by
    /// construction (spectral synthesis, congruences of Hermitian matrices).
    static HermitianMatrix from_trusted(const ComplexMatrix& entries);

private:
    struct Trusted {};
    HermitianMatrix(const ComplexMatrix& entries, Trusted);

    ComplexMatrix entries_;
};

struct SpectralWindow {
    double lo = 0.0;
    double hi = 1.0;

    SpectralWindow() = default;
    SpectralWindow(double lower, double upper);

    double width() const { return hi - lo; }
    bool contains(double t) const { return lo <= t && t <= hi; }
    /// Throws DomainError unless 0 < lo.
    void require_positive() const;

    friend bool operator==(const SpectralWindow&, const SpectralWindow&) = default;
};

/// Eigenvalues ascending with the unitary eigenbasis in the columns.
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    double min() const { return eigenvalues(0); }
    double max() const { return eigenvalues(eigenvalues.size() - 1); }

    /// U diag(f(lambda_i)) U^H. Throws DomainError if f is not finite at some
    /// eigenvalue.
    HermitianMatrix apply(const ScalarFunction& f) const;
    HermitianMatrix reconstruct() const;
};

struct LoewnerVerdict {
    bool holds = false;
    double min_slack = 0.0;
    double tolerance_used = 0.0;
};

struct TolerancePolicy {
    double rel_tol = 1e-8;

    double tolerance_for(double difference_norm) const { return rel_tol * (1.0 + difference_norm); }
};

// Cyclic Jacobi: stop when the off-diagonal Frobenius norm drops below
// 1e-13 * ||A||_F, give up after 100 sweeps.
inline constexpr double kJacobiRelativeThreshold = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

SpectralDecomposition eig_hermitian(const HermitianMatrix& a);
/// Same rotations as eig_hermitian without accumulating eigenvectors.
RealVector eigenvalues_hermitian(const HermitianMatrix& a);

HermitianMatrix apply_scalar_function(const HermitianMatrix& a, const ScalarFunction& f);

/// Require every eigenvalue to be strictly positive (DomainError otherwise).
HermitianMatrix matrix_power(const HermitianMatrix& a, double p);
HermitianMatrix matrix_power(const SpectralDecomposition& spectral, double p);
HermitianMatrix matrix_log(const HermitianMatrix& a);
HermitianMatrix matrix_log(const SpectralDecomposition& spectral);
HermitianMatrix matrix_exp(const HermitianMatrix& a);

/// holds <=> lambda_min(b - a) >= -rel_tol * (1 + ||b - a||_F).
LoewnerVerdict loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b,
                           const TolerancePolicy& policy = {});

bool spectrum_in_window(const HermitianMatrix& a, const SpectralWindow& w, double tol = 0.0);
bool spectrum_in_window(const SpectralDecomposition& spectral, const SpectralWindow& w,
                        double tol = 0.0);

/// Tolerance used when a hypothesis "m <= X <= M" is checked on a derived
/// matrix (one that carries rounding from products or inverse roots).
double window_tolerance(const SpectralWindow& w);

/// f_lo^((hi - t)/(hi - lo)) * f_hi^((t - lo)/(hi - lo)), the geometric
/// interpolation of a positive function between the window endpoints.
double log_interpolant(double t, const SpectralWindow& w, double f_lo, double f_hi);

/// exp(((hi - B) ln f_lo + (B - lo) ln f_hi) / (hi - lo)), evaluated as the
/// single scalar function log_interpolant applied to B.
HermitianMatrix superlog_bound(const HermitianMatrix& b, const SpectralWindow& w, double f_lo,
                               double f_hi);
HermitianMatrix superlog_bound(const SpectralDecomposition& b, const SpectralWindow& w,
                               double f_lo, double f_hi);

}  // namespace kanto
