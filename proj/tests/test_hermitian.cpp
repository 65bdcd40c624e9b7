#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "kanto/io.hpp"
#include "support.hpp"

using namespace kanto;
using test_support::diag;
using test_support::max_abs_diff;
using test_support::random_hermitian;

TEST_SUITE("hermitian") {

TEST_CASE("construction validates shape, finiteness and hermiticity") {
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Zero(2, 3)), DimensionError);
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Identity(65, 65)), DimensionError);
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix(0, 0)), DimensionError);

    ComplexMatrix skew(2, 2);
    skew << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
    CHECK_THROWS_AS(HermitianMatrix{skew}, HermiticityError);

    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianMatrix{bad}, DomainError);

    // Asymmetry below 1e-12 ||A||_F is accepted and symmetrized.
    ComplexMatrix near(2, 2);
    near << 1.0, Complex(0.5, 1e-14), Complex(0.5, 0.0), 1.0;
    const HermitianMatrix h(near);
    CHECK(h(0, 1) == std::conj(h(1, 0)));
}

TEST_CASE("eig_hermitian on diagonal input returns sorted values and permutation vectors") {
    const SpectralDecomposition s = eig_hermitian(diag({3.0, 1.0, 2.0}));
    CHECK(s.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(s.eigenvalues(2) == doctest::Approx(3.0));
    const int expected_row[] = {1, 2, 0};
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(s.eigenvectors(expected_row[j], j)) == doctest::Approx(1.0));
    }
}

TEST_CASE("eig_hermitian on the identity") {
    const SpectralDecomposition s = eig_hermitian(HermitianMatrix::identity(4));
    for (int i = 0; i < 4; ++i) CHECK(s.eigenvalues(i) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian on [[2,1],[1,2]]") {
    Eigen::MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    const SpectralDecomposition s = eig_hermitian(HermitianMatrix::from_real(a));
    CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-14));
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(s.eigenvectors(0, 0) * r - s.eigenvectors(1, 0) * r) == doctest::Approx(1.0));
    CHECK(std::abs(s.eigenvectors(0, 1) * r + s.eigenvectors(1, 1) * r) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian agrees with an independent eigensolver") {
    RngState rng(2024);
    for (int dim : {1, 2, 3, 5, 8, 16, 33, 64}) {
        for (int rep = 0; rep < 3; ++rep) {
            const HermitianMatrix a = random_hermitian(dim, rng, 3.0);
            const SpectralDecomposition s = eig_hermitian(a);
            const Eigen::VectorXd reference = test_support::reference_eigenvalues(a);
            const double scale = 1.0 + s.eigenvalues.cwiseAbs().maxCoeff();
            CHECK((s.eigenvalues - reference).cwiseAbs().maxCoeff() <= 1e-10 * scale);
            for (int i = 1; i < dim; ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
            const ComplexMatrix& u = s.eigenvectors;
            CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(dim, dim)) <= 1e-10);
            CHECK(max_abs_diff(s.reconstruct(), a) <= 1e-10 * scale);
            CHECK((eigenvalues_hermitian(a) - s.eigenvalues).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("eig_hermitian handles repeated eigenvalues and the zero matrix") {
    RngState rng(5);
    const ComplexMatrix u = random_unitary(6, rng);
    Eigen::VectorXd values(6);
    values << 1, 1, 1, 2, 2, 7;
    const HermitianMatrix a =
        HermitianMatrix::from_trusted(u * values.asDiagonal() * u.adjoint());
    const SpectralDecomposition s = eig_hermitian(a);
    CHECK((s.eigenvalues - values).cwiseAbs().maxCoeff() <= 1e-12 * 8);
    CHECK(eig_hermitian(HermitianMatrix::zero(3)).eigenvalues.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_scalar_function examples") {
    RngState rng(1);
    const HermitianMatrix a = random_hermitian(4, rng);
    CHECK(max_abs_diff(apply_scalar_function(a, [](double t) { return t; }), a) <= 1e-12);
    const HermitianMatrix fi =
        apply_scalar_function(HermitianMatrix::identity(3), [](double t) { return 5.0 * t * t; });
    CHECK(max_abs_diff(fi, 5.0 * HermitianMatrix::identity(3)) <= 1e-14);
    CHECK(max_abs_diff(apply_scalar_function(diag({1.0, 4.0}), [](double t) { return std::sqrt(t); }),
                       diag({1.0, 2.0})) <= 1e-14);
    CHECK_THROWS_AS(apply_scalar_function(diag({-1.0, 1.0}), [](double t) { return std::log(t); }),
                    DomainError);
}

TEST_CASE("matrix_power, matrix_log and matrix_exp") {
    CHECK(max_abs_diff(matrix_power(diag({1.0, 2.0}), 0.0), HermitianMatrix::identity(2)) == 0.0);
    CHECK(max_abs_diff(matrix_power(diag({4.0}), -1.0), diag({0.25})) <= 1e-15);
    CHECK_THROWS_AS(matrix_power(diag({0.0, 1.0}), 0.5), DomainError);
    CHECK_THROWS_AS(matrix_log(diag({-1.0, 1.0})), DomainError);

    RngState rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        HermitianMatrix a = random_hermitian(5, rng);
        const double norm = eigenvalues_hermitian(a).cwiseAbs().maxCoeff();
        a = (5.0 * rng.uniform() / norm) * a;
        CHECK(max_abs_diff(matrix_log(matrix_exp(a)), a) <= 1e-9);
    }
}

TEST_CASE("loewner_leq examples") {
    RngState rng(3);
    const HermitianMatrix a = random_hermitian(3, rng);
    const LoewnerVerdict same = loewner_leq(a, a);
    CHECK(same.holds);
    CHECK(same.min_slack == 0.0);

    const LoewnerVerdict up = loewner_leq(diag({1, 2}), diag({2, 3}));
    CHECK(up.holds);
    CHECK(up.min_slack == doctest::Approx(1.0));

    const LoewnerVerdict swap = loewner_leq(diag({2, 1}), diag({1, 2}));
    CHECK_FALSE(swap.holds);
    CHECK(swap.min_slack == doctest::Approx(-1.0));
    CHECK(swap.tolerance_used == doctest::Approx(1e-8 * (1.0 + std::sqrt(2.0))));

    CHECK_THROWS_AS(loewner_leq(diag({1}), diag({1, 2})), DimensionError);

    // holds exactly when min_slack >= -tolerance_used
    const LoewnerVerdict edge = loewner_leq(diag({1.0 + 5e-9}), diag({1.0}));
    CHECK(edge.holds);
    const LoewnerVerdict past = loewner_leq(diag({1.0 + 5e-8}), diag({1.0}), TolerancePolicy{1e-8});
    CHECK_FALSE(past.holds);
}

TEST_CASE("spectrum_in_window examples") {
    CHECK(spectrum_in_window(diag({1, 2}), SpectralWindow(1, 2)));
    CHECK_FALSE(spectrum_in_window(diag({0.5, 2}), SpectralWindow(1, 2)));
    CHECK(spectrum_in_window(0.7 * HermitianMatrix::identity(3), SpectralWindow(0.7, 2)));
    CHECK(spectrum_in_window(diag({0.999, 2}), SpectralWindow(1, 2), 1e-3));
    CHECK_THROWS_AS(SpectralWindow(2, 1), DomainError);
}

TEST_CASE("superlog_bound endpoints, errors and two-route evaluation") {
    const SpectralWindow w(1.0, 2.0);
    CHECK(max_abs_diff(superlog_bound(HermitianMatrix::identity(3), w, 0.7, 3.0),
                       0.7 * HermitianMatrix::identity(3)) <= 1e-15);
    CHECK(max_abs_diff(superlog_bound(2.0 * HermitianMatrix::identity(3), w, 0.7, 3.0),
                       3.0 * HermitianMatrix::identity(3)) <= 1e-14);
    CHECK_THROWS_AS(superlog_bound(HermitianMatrix::identity(2), w, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(superlog_bound(HermitianMatrix::identity(2), w, 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(superlog_bound(diag({0.5, 1.5}), w, 1.0, 2.0), HypothesisError);

    RngState rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix b = gen_hermitian_in_window(4, w, rng);
        const double f_lo = 0.5 + rng.uniform();
        const double f_hi = 0.5 + 2.0 * rng.uniform();
        const HermitianMatrix identity = HermitianMatrix::identity(4);
        const HermitianMatrix exponent =
            (std::log(f_lo) / w.width()) * (w.hi * identity - b) +
            (std::log(f_hi) / w.width()) * (b - w.lo * identity);
        CHECK(max_abs_diff(superlog_bound(b, w, f_lo, f_hi), matrix_exp(exponent)) <= 1e-10);
    }
}

TEST_CASE("functional calculus is a homomorphism under composition") {
    RngState rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix a = gen_hermitian_in_window(5, SpectralWindow(0.5, 3.0), rng);
        auto g = [](double t) { return std::log(t); };
        auto f = [](double t) { return std::exp(2.0 * t) + t; };
        const HermitianMatrix composed = apply_scalar_function(a, [&](double t) { return f(g(t)); });
        const HermitianMatrix nested = apply_scalar_function(apply_scalar_function(a, g), f);
        CHECK(max_abs_diff(composed, nested) <= 1e-9);
    }
}

TEST_CASE("functional calculus is unitarily covariant") {
    RngState rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix a = gen_hermitian_in_window(4, SpectralWindow(0.5, 3.0), rng);
        const ComplexMatrix u = random_unitary(4, rng);
        auto f = [](double t) { return std::pow(t, -1.5); };
        const HermitianMatrix left = apply_scalar_function(a.congruence(u.adjoint()), f);
        const HermitianMatrix right = apply_scalar_function(a, f).congruence(u.adjoint());
        CHECK(max_abs_diff(left, right) <= 1e-9);
    }
}

TEST_CASE("Loewner-Heinz: A <= B implies A^p <= B^p for p in [0, 1]") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        RngState rng(seed);
        const CertifiedPair pair = gen_dominated_pair(2 + static_cast<int>(seed % 4),
                                                      SpectralWindow(0.5, 4.0), rng);
        for (double p : {0.25, 0.5, 0.75, 1.0}) {
            const LoewnerVerdict v = loewner_leq(matrix_power(pair.a, p), matrix_power(pair.b, p));
            if (!v.holds) FAIL_CHECK("seed " << seed << " p " << p << " slack " << v.min_slack);
            ++checked;
        }
    }
    CHECK(checked == 4000);
}

TEST_CASE("negative control: A <= B does not give A^2 <= B^2") {
    Eigen::MatrixXd a(2, 2);
    Eigen::MatrixXd b(2, 2);
    a << 1.01, 0, 0, 0.01;
    b << 2.01, 1, 1, 1.01;
    const HermitianMatrix a0 = HermitianMatrix::from_real(a);
    const HermitianMatrix b0 = HermitianMatrix::from_real(b);
    CHECK(loewner_leq(a0, b0).holds);
    const LoewnerVerdict squares = loewner_leq(matrix_power(a0, 2.0), matrix_power(b0, 2.0));
    CHECK_FALSE(squares.holds);
    CHECK(squares.min_slack <= -0.1);
    CHECK(squares.min_slack == doctest::Approx(-0.16125761).epsilon(1e-6));
}

TEST_CASE("scalar interpolation bound f(t) <= G(t) <= L(t) for t^p, p in [-3, 0]") {
    RngState rng(99);
    for (const SpectralWindow w : {SpectralWindow(1, 2), SpectralWindow(0.5, 4), SpectralWindow(2, 3)}) {
        for (double p : {-3.0, -2.0, -1.0, -0.5, -0.25, 0.0}) {
            const double f_lo = std::pow(w.lo, p);
            const double f_hi = std::pow(w.hi, p);
            const double slope = (f_hi - f_lo) / w.width();
            const double intercept = (w.hi * f_lo - w.lo * f_hi) / w.width();
            double worst = 0.0;
            for (int i = 0; i < 10000; ++i) {
                const double t = i == 0 ? w.lo : (i == 1 ? w.hi : rng.uniform(w.lo, w.hi));
                const double g = log_interpolant(t, w, f_lo, f_hi);
                worst = std::min(worst, g - std::pow(t, p));
                worst = std::min(worst, slope * t + intercept - g);
            }
            CHECK(worst >= -1e-12);
        }
    }
}

TEST_CASE("matrix exchange format round trip") {
    RngState rng(4);
    const HermitianMatrix a = random_hermitian(3, rng);
    const Json j = matrix_to_json(a);
    CHECK(j.at("dim").get<int>() == 3);
    CHECK(j.at("re").size() == 3);
    const HermitianMatrix back = matrix_from_json(Json::parse(j.dump()));
    CHECK(max_abs_diff(a, back) == 0.0);
    Json bad = j;
    bad["im"][0][1] = 5.0;
    CHECK_THROWS_AS(matrix_from_json(bad), HermiticityError);
}

}
