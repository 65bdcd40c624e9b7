#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kanto/generators.hpp"
#include "kanto/hermitian.hpp"

namespace test_support {

using kanto::ComplexMatrix;
using kanto::HermitianMatrix;

inline HermitianMatrix random_hermitian(int dim, kanto::RngState& rng, double scale = 1.0) {
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = scale * rng.complex_gaussian();
    }
    return HermitianMatrix(ComplexMatrix((g + g.adjoint()) / 2.0));
}

inline Eigen::VectorXd reference_eigenvalues(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
    return (x - y).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const HermitianMatrix& x, const HermitianMatrix& y) {
    return max_abs_diff(x.matrix(), y.matrix());
}

inline HermitianMatrix diag(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return HermitianMatrix::diagonal(v);
}

}  // namespace test_support
