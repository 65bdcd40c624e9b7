#pragma once

// Kantorovich-type constants for power functions on a spectral window, and
// the brute-force univariate maximizer every closed form is checked against.

#include <optional>

#include "kanto/hermitian.hpp"

namespace kanto {

/// The chord L(t) = slope * t + intercept through (m, f(m)) and (M, f(M)).
struct ChordCoefficients {
    double slope = 0.0;
    double intercept = 0.0;

    double operator()(double t) const { return slope * t + intercept; }
};

ChordCoefficients chord_coefficients(const ScalarFunction& f, const SpectralWindow& w);
/// Chord of t^p, written with the closed forms (M^p - m^p)/(M - m) and
/// (M m^p - m M^p)/(M - m).
ChordCoefficients power_chord(const SpectralWindow& w, double p);

enum class ExtremumBranch { interior, endpoint_lo, endpoint_hi };

const char* to_string(ExtremumBranch branch);

struct ExtremumResult {
    double t_star = 0.0;
    double value = 0.0;
    ExtremumBranch branch = ExtremumBranch::interior;
};

struct GridOptions {
    int resolution = 20000;
    int refinement_iters = 60;
};

/// Dense scan of h over [m, M] followed by golden-section refinement inside
/// the two cells around the best grid point. Throws DomainError on a
/// non-finite sample.
ExtremumResult grid_max_1d(const ScalarFunction& h, const SpectralWindow& w,
                           const GridOptions& options = {});

/// max over [m, M] of a_f t + b_f - alpha g(t).
ExtremumResult beta_generic(const ScalarFunction& f, const ScalarFunction& g, double alpha,
                            const SpectralWindow& w, const GridOptions& options = {});

/// max over [m, M] of (a_f t + b_f) / g(t); g must stay positive.
ExtremumResult alpha_ratio(const ScalarFunction& f, const ScalarFunction& g,
                           const SpectralWindow& w, const GridOptions& options = {});

struct ConstantQuery {
    SpectralWindow window;
    double p = 0.0;
    double q = 0.0;
    std::optional<double> alpha;
};

/// A closed form with two branches: the interior critical-point expression
/// and the endpoint maximum. Both are evaluated so callers can compare them
/// on the seam where the critical point crosses m or M.
struct PiecewiseConstant {
    double value = 0.0;
    double interior_value = 0.0;
    double endpoint_value = 0.0;
    double critical_point = 0.0;
    bool interior_active = false;
    bool on_seam = false;
    /// false when the exponents leave the range where the closed form is a
    /// proven maximum (reported, not refused).
    bool in_regime = true;
};

/// Slack applied to the printed branch membership tests m <= t0 <= M,
/// relative to max(1, M).
inline constexpr double kBranchSlack = 1e-12;

/// max{a t + b - alpha t^q} for f = t^p, g = t^q in closed form.
/// Requires p <= 0, q < 0, alpha > 0; q in {0, 1} is degenerate.
PiecewiseConstant beta_power_closed_detail(const SpectralWindow& w, double p, double q,
                                           double alpha);
double beta_power_closed(const SpectralWindow& w, double p, double q, double alpha);
double beta_power_closed(const ConstantQuery& query);

/// Generalized Kantorovich constant K(m, M, p); p in {0, 1} is degenerate.
double kantorovich_K(const SpectralWindow& w, double p);

/// Two-parameter constant K(m, M, p, q) = max (a t + b) / t^q for f = t^p.
/// q in {0, 1} is degenerate; outside p <= 0, -1 <= q <= 0 the value is
/// still computed with in_regime = false.
PiecewiseConstant kantorovich_K2_detail(const SpectralWindow& w, double p, double q);
double kantorovich_K2(const SpectralWindow& w, double p, double q);

/// The two algebraic forms of the K2 critical point: as printed in the
/// branch test, q (m M^p - M m^p) / ((q - 1)(M^p - m^p)), and from the
/// derivative of the chord ratio, q b / ((1 - q) a).
struct CriticalPointForms {
    double branch_test_form = 0.0;
    double derivative_form = 0.0;
};
CriticalPointForms k2_critical_points(const SpectralWindow& w, double p, double q);

/// Difference constant C(m, M, p, q) = max{a t + b - t^q}; p <= 0, q < 0.
PiecewiseConstant kantorovich_C2_detail(const SpectralWindow& w, double p, double q);
double kantorovich_C2(const SpectralWindow& w, double p, double q);

/// C(m, M, p): the q = p case, whose endpoint branch is exactly 0; p < 0.
PiecewiseConstant kantorovich_C_detail(const SpectralWindow& w, double p);
double kantorovich_C(const SpectralWindow& w, double p);

/// Power function t^p as a ScalarFunction.
ScalarFunction power_function(double p);

}  // namespace kanto
