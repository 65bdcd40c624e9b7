#include <cmath>
#include <functional>
#include <optional>

#include "doctest.h"
#include "kanto/constants.hpp"

using namespace kanto;

namespace {

const SpectralWindow kWindows[] = {SpectralWindow(1, 2), SpectralWindow(0.5, 4), SpectralWindow(2, 3),
                                   SpectralWindow(0.1, 10)};

bool close_rel(double x, double y, double rel) {
    return std::abs(x - y) <= rel * std::max(1.0, std::abs(y));
}

// Root of fn on [lo, hi] by bisection, or nullopt when fn does not change sign.
std::optional<double> bisect(const std::function<double(double)>& fn, double lo, double hi) {
    double f_lo = fn(lo);
    if (f_lo * fn(hi) > 0.0) return std::nullopt;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = fn(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Every crossing of critical(x) through m or M for x on a scan of [lo, hi].
std::vector<double> seam_points(const std::function<double(double)>& critical, const SpectralWindow& w,
                                double lo, double hi) {
    std::vector<double> roots;
    const int steps = 400;
    for (double edge : {w.lo, w.hi}) {
        auto fn = [&](double x) { return critical(x) - edge; };
        for (int i = 0; i < steps; ++i) {
            const double a = lo + (hi - lo) * i / steps;
            const double b = lo + (hi - lo) * (i + 1) / steps;
            if (!std::isfinite(fn(a)) || !std::isfinite(fn(b))) continue;
            auto root = bisect(fn, a, b);
            if (root && std::abs(fn(*root)) <= 1e-9 * std::max(1.0, edge)) roots.push_back(*root);
        }
    }
    return roots;
}

}  // namespace

TEST_SUITE("constants") {

TEST_CASE("frozen reference values") {
    const SpectralWindow w12(1, 2);
    CHECK(kantorovich_K2(w12, -1, -0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kantorovich_K2(w12, -1, -1) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(kantorovich_C2(w12, -1, -1) == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(kantorovich_C2(w12, -2, -1) == doctest::Approx(1.75 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK(kantorovich_C(w12, -0.5) == doctest::Approx(0.03781431455270201).epsilon(1e-12));
    CHECK(beta_power_closed(w12, -1, -1, 1) == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(beta_power_closed(w12, -2, -1, 1) == doctest::Approx(1.75 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK(std::abs(beta_power_closed(w12, -1, -1, 1.125)) <= 1e-14);
    CHECK(kantorovich_K(w12, 2) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(kantorovich_K2(SpectralWindow(0.5, 4), -2, -0.5) ==
          doctest::Approx(3.5365204077808188).epsilon(1e-12));
    CHECK(kantorovich_C2(SpectralWindow(0.5, 4), -3, -0.25) ==
          doctest::Approx(6.810792884997279).epsilon(1e-12));
}

TEST_CASE("K(m, M, p) equals K2(m, M, p, p)") {
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -1.0, -0.5, -0.25}) {
            CHECK(close_rel(kantorovich_K(w, p), kantorovich_K2(w, p, p), 1e-12));
        }
    }
}

TEST_CASE("closed forms agree with the grid oracle") {
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -2.0, -1.0, -0.5, -0.25, -0.05}) {
            const ScalarFunction f = power_function(p);
            CHECK(close_rel(kantorovich_K(w, p), alpha_ratio(f, f, w).value, 1e-9));
            CHECK(close_rel(kantorovich_C(w, p), beta_generic(f, f, 1.0, w).value, 1e-9));
            for (double q : {-1.0, -0.75, -0.5, -0.25, -0.05}) {
                const ScalarFunction g = power_function(q);
                INFO("window [" << w.lo << ", " << w.hi << "] p " << p << " q " << q);
                CHECK(close_rel(kantorovich_K2(w, p, q), alpha_ratio(f, g, w).value, 1e-9));
                CHECK(close_rel(kantorovich_C2(w, p, q), beta_generic(f, g, 1.0, w).value, 1e-9));
                for (double alpha : {0.5, 2.0}) {
                    CHECK(close_rel(beta_power_closed(w, p, q, alpha),
                                    beta_generic(f, g, alpha, w).value, 1e-9));
                }
            }
        }
    }
    for (double p : {1.5, 2.0, 3.0}) {
        const ScalarFunction f = power_function(p);
        CHECK(close_rel(kantorovich_K(SpectralWindow(1, 2), p),
                        alpha_ratio(f, f, SpectralWindow(1, 2)).value, 1e-9));
    }
}

TEST_CASE("grid oracle finds interior and endpoint maxima") {
    const SpectralWindow w(0.0, 1.0);
    const ExtremumResult inner = grid_max_1d([](double t) { return -(t - 0.3) * (t - 0.3); }, w);
    CHECK(inner.t_star == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(inner.branch == ExtremumBranch::interior);
    CHECK(grid_max_1d([](double t) { return t; }, w).branch == ExtremumBranch::endpoint_hi);
    CHECK(grid_max_1d([](double t) { return -t; }, w).branch == ExtremumBranch::endpoint_lo);
    CHECK_THROWS_AS(grid_max_1d([](double t) { return std::log(t); }, w), DomainError);
}

TEST_CASE("branch seams: interior and endpoint expressions coincide where t0 meets m or M") {
    int seams = 0;
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -1.0, -0.5, -0.1}) {
            auto k2_t0 = [&](double q) { return kantorovich_K2_detail(w, p, q).critical_point; };
            for (double q : seam_points(k2_t0, w, -4.0, -0.01)) {
                const PiecewiseConstant d = kantorovich_K2_detail(w, p, q);
                CHECK(close_rel(d.interior_value, d.endpoint_value, 1e-8));
                ++seams;
            }
            auto c2_t0 = [&](double q) { return kantorovich_C2_detail(w, p, q).critical_point; };
            for (double q : seam_points(c2_t0, w, -4.0, -0.01)) {
                const PiecewiseConstant d = kantorovich_C2_detail(w, p, q);
                CHECK(close_rel(d.interior_value, d.endpoint_value, 1e-8));
                ++seams;
            }
            for (double q : {-2.0, -1.0, -0.5}) {
                auto beta_t0 = [&](double a) {
                    return beta_power_closed_detail(w, p, q, a).critical_point;
                };
                for (double a : seam_points(beta_t0, w, 0.01, 20.0)) {
                    const PiecewiseConstant d = beta_power_closed_detail(w, p, q, a);
                    CHECK(close_rel(d.interior_value, d.endpoint_value, 1e-8));
                    ++seams;
                }
            }
        }
        auto c_t0 = [&](double p) { return kantorovich_C_detail(w, p).critical_point; };
        for (double p : seam_points(c_t0, w, -8.0, -0.01)) {
            const PiecewiseConstant d = kantorovich_C_detail(w, p);
            CHECK(std::abs(d.interior_value - d.endpoint_value) <= 1e-8);
            ++seams;
        }
    }
    CHECK(seams >= 10);
}

TEST_CASE("the two algebraic forms of the critical point agree") {
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -1.0, -0.5, -0.25}) {
            for (double q : {-1.0, -0.5, -0.25, -2.0}) {
                const CriticalPointForms forms = k2_critical_points(w, p, q);
                CHECK(close_rel(forms.branch_test_form, forms.derivative_form, 1e-10));
            }
        }
    }
}

TEST_CASE("chord of t^p: endpoint tightness and sign of the coefficients") {
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -1.0, -0.5, -0.25, 0.5, 2.0}) {
            const ChordCoefficients chord = power_chord(w, p);
            CHECK(std::abs(chord(w.lo) - std::pow(w.lo, p)) <= 1e-8);
            CHECK(std::abs(chord(w.hi) - std::pow(w.hi, p)) <= 1e-8);
            const ChordCoefficients generic = chord_coefficients(power_function(p), w);
            CHECK(close_rel(chord.slope, generic.slope, 1e-12));
            CHECK(close_rel(chord.intercept, generic.intercept, 1e-12));
            if (p <= 0.0) {
                CHECK(chord.intercept >= 0.0);
                CHECK(chord.slope <= 0.0);
            }
        }
    }
}

TEST_CASE("(a t + b) / t^q is concave on the window for p <= 0, -1 <= q <= 0") {
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-3.0, -1.0, -0.5, -0.25}) {
            const ChordCoefficients c = power_chord(w, p);
            for (double q : {-1.0, -0.75, -0.5, -0.25, -0.01}) {
                double worst = -1.0;
                for (int i = 0; i <= 200; ++i) {
                    const double t = w.lo + w.width() * i / 200.0;
                    const double second = c.slope * (1 - q) * (-q) * std::pow(t, -q - 1) +
                                          c.intercept * (-q) * (-q - 1) * std::pow(t, -q - 2);
                    worst = std::max(worst, second);
                }
                CHECK(worst <= 1e-10);
            }
        }
    }
}

TEST_CASE("beta changes sign at alpha = K2") {
    for (const SpectralWindow& w : kWindows) {
        for (double p : {-2.0, -1.0, -0.5}) {
            for (double q : {-1.0, -0.5, -0.25}) {
                const double k = alpha_ratio(power_function(p), power_function(q), w).value;
                CHECK(std::abs(beta_power_closed(w, p, q, k)) <= 1e-9 * std::max(1.0, k));
                CHECK(beta_power_closed(w, p, q, 0.9 * k) > 0.0);
                CHECK(beta_power_closed(w, p, q, 1.1 * k) < 0.0);
            }
        }
    }
}

TEST_CASE("regime flag on K2") {
    CHECK(kantorovich_K2_detail(SpectralWindow(1, 2), -1, -0.5).in_regime);
    CHECK_FALSE(kantorovich_K2_detail(SpectralWindow(1, 2), -1, -2).in_regime);
    CHECK_FALSE(kantorovich_K2_detail(SpectralWindow(1, 2), 1.5, -0.5).in_regime);
}

TEST_CASE("degenerate exponents and parameter errors") {
    const SpectralWindow w(1, 2);
    CHECK_THROWS_AS(kantorovich_K(w, 0), DegenerateExponentError);
    CHECK_THROWS_AS(kantorovich_K(w, 1), DegenerateExponentError);
    CHECK_THROWS_AS(kantorovich_K2(w, -1, 0), DegenerateExponentError);
    CHECK_THROWS_AS(kantorovich_K2(w, -1, 1), DegenerateExponentError);
    CHECK_THROWS_AS(kantorovich_C2(w, -1, 0), DegenerateExponentError);
    CHECK_THROWS_AS(kantorovich_C(w, 0), DegenerateExponentError);
    CHECK_THROWS_AS(beta_power_closed(w, -1, 0, 1), DegenerateExponentError);
    CHECK_THROWS_AS(beta_power_closed(w, 1, -1, 1), ParameterError);
    CHECK_THROWS_AS(beta_power_closed(w, -1, -1, 0), ParameterError);
    CHECK_THROWS_AS(beta_power_closed(ConstantQuery{w, -1, -1, std::nullopt}), ParameterError);
    CHECK_THROWS_AS(kantorovich_C2(w, 0.5, -1), ParameterError);
    CHECK_THROWS_AS(kantorovich_C(w, 0.5), ParameterError);
    CHECK_THROWS_AS(kantorovich_K(SpectralWindow(0, 2), -1), DomainError);
}

}
