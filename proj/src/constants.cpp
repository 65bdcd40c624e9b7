#include "kanto/constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kanto {

namespace {

void require_finite(double v, double t) {
    if (!std::isfinite(v)) {
        throw DomainError("objective is not finite at t = " + std::to_string(t));
    }
}

void require_not_degenerate(double exponent, const char* name, const char* constant) {
    if (exponent == 0.0 || exponent == 1.0) {
        throw DegenerateExponentError(std::string(constant) + ": exponent " + name + " = " +
                                      std::to_string(exponent) + " is degenerate");
    }
}

// Branch membership m <= t0 <= M with kBranchSlack; also flags the seam.
void classify(PiecewiseConstant& out, const SpectralWindow& w) {
    const double slack = kBranchSlack * std::max(1.0, std::abs(w.hi));
    const double t0 = out.critical_point;
    out.interior_active = std::isfinite(t0) && t0 >= w.lo - slack && t0 <= w.hi + slack;
    out.on_seam = std::isfinite(t0) &&
                  (std::abs(t0 - w.lo) <= slack || std::abs(t0 - w.hi) <= slack);
    out.value = out.interior_active ? out.interior_value : out.endpoint_value;
}

struct PowerTerms {
    double lo_p;   // m^p
    double hi_p;   // M^p
    double cross;  // m M^p - M m^p
};

PowerTerms power_terms(const SpectralWindow& w, double p) {
    const double lo_p = std::pow(w.lo, p);
    const double hi_p = std::pow(w.hi, p);
    return {lo_p, hi_p, w.lo * hi_p - w.hi * lo_p};
}

}  // namespace

const char* to_string(ExtremumBranch branch) {
    switch (branch) {
        case ExtremumBranch::interior: return "interior";
        case ExtremumBranch::endpoint_lo: return "endpoint_m";
        case ExtremumBranch::endpoint_hi: return "endpoint_M";
    }
    return "unknown";
}

ScalarFunction power_function(double p) {
    return [p](double t) { return std::pow(t, p); };
}

ChordCoefficients chord_coefficients(const ScalarFunction& f, const SpectralWindow& w) {
    const double f_lo = f(w.lo);
    const double f_hi = f(w.hi);
    require_finite(f_lo, w.lo);
    require_finite(f_hi, w.hi);
    return {(f_hi - f_lo) / w.width(), (w.hi * f_lo - w.lo * f_hi) / w.width()};
}

ChordCoefficients power_chord(const SpectralWindow& w, double p) {
    const PowerTerms terms = power_terms(w, p);
    return {(terms.hi_p - terms.lo_p) / w.width(), -terms.cross / w.width()};
}

ExtremumResult grid_max_1d(const ScalarFunction& h, const SpectralWindow& w,
                           const GridOptions& options) {
    const int cells = std::max(1, options.resolution);
    const double step = w.width() / cells;
    auto grid_point = [&](int k) { return k == cells ? w.hi : w.lo + k * step; };

    int best_k = 0;
    double best_value = h(w.lo);
    require_finite(best_value, w.lo);
    for (int k = 1; k <= cells; ++k) {
        const double t = grid_point(k);
        const double v = h(t);
        require_finite(v, t);
        if (v > best_value) {
            best_value = v;
            best_k = k;
        }
    }

    ExtremumResult result{grid_point(best_k), best_value, ExtremumBranch::interior};

    // Golden-section search on the bracket of neighbouring cells.
    double a = grid_point(std::max(best_k - 1, 0));
    double b = grid_point(std::min(best_k + 1, cells));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double hc = h(c);
    double hd = h(d);
    require_finite(hc, c);
    require_finite(hd, d);
    for (int it = 0; it < options.refinement_iters; ++it) {
        if (hc > result.value) result = {c, hc, ExtremumBranch::interior};
        if (hd > result.value) result = {d, hd, ExtremumBranch::interior};
        if (hc >= hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
            require_finite(hc, c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
            require_finite(hd, d);
        }
    }
    if (hc > result.value) result = {c, hc, ExtremumBranch::interior};
    if (hd > result.value) result = {d, hd, ExtremumBranch::interior};

    if (result.t_star == w.lo) {
        result.branch = ExtremumBranch::endpoint_lo;
    } else if (result.t_star == w.hi) {
        result.branch = ExtremumBranch::endpoint_hi;
    }
    return result;
}

ExtremumResult beta_generic(const ScalarFunction& f, const ScalarFunction& g, double alpha,
                            const SpectralWindow& w, const GridOptions& options) {
    const ChordCoefficients chord = chord_coefficients(f, w);
    return grid_max_1d([&](double t) { return chord(t) - alpha * g(t); }, w, options);
}

ExtremumResult alpha_ratio(const ScalarFunction& f, const ScalarFunction& g,
                           const SpectralWindow& w, const GridOptions& options) {
    const ChordCoefficients chord = chord_coefficients(f, w);
    return grid_max_1d(
        [&](double t) {
            const double denominator = g(t);
            if (!(denominator > 0.0)) {
                throw DomainError("alpha_ratio: g(t) = " + std::to_string(denominator) +
                                  " is not positive at t = " + std::to_string(t));
            }
            return chord(t) / denominator;
        },
        w, options);
}

PiecewiseConstant beta_power_closed_detail(const SpectralWindow& w, double p, double q,
                                           double alpha) {
    w.require_positive();
    require_not_degenerate(q, "q", "beta_power_closed");
    if (p > 0.0 || q > 0.0 || !(alpha > 0.0)) {
        throw ParameterError("beta_power_closed requires p <= 0, q < 0, alpha > 0");
    }
    const PowerTerms terms = power_terms(w, p);
    const double base = (terms.hi_p - terms.lo_p) / (alpha * q * w.width());

    PiecewiseConstant out;
    out.critical_point = std::pow(base, 1.0 / (q - 1.0));
    out.interior_value = alpha * (q - 1.0) * std::pow(base, q / (q - 1.0)) +
                         (w.hi * terms.lo_p - w.lo * terms.hi_p) / w.width();
    out.endpoint_value = std::max(terms.lo_p - alpha * std::pow(w.lo, q),
                                  terms.hi_p - alpha * std::pow(w.hi, q));
    classify(out, w);
    return out;
}

double beta_power_closed(const SpectralWindow& w, double p, double q, double alpha) {
    return beta_power_closed_detail(w, p, q, alpha).value;
}

double beta_power_closed(const ConstantQuery& query) {
    if (!query.alpha) throw ParameterError("beta_power_closed: query carries no alpha");
    return beta_power_closed(query.window, query.p, query.q, *query.alpha);
}

double kantorovich_K(const SpectralWindow& w, double p) {
    w.require_positive();
    require_not_degenerate(p, "p", "kantorovich_K");
    const PowerTerms terms = power_terms(w, p);
    return terms.cross / ((p - 1.0) * w.width()) *
           std::pow((p - 1.0) / p * (terms.hi_p - terms.lo_p) / terms.cross, p);
}

PiecewiseConstant kantorovich_K2_detail(const SpectralWindow& w, double p, double q) {
    w.require_positive();
    require_not_degenerate(q, "q", "kantorovich_K2");
    const PowerTerms terms = power_terms(w, p);

    PiecewiseConstant out;
    out.in_regime = p <= 0.0 && q >= -1.0 && q <= 0.0;
    out.critical_point = q * terms.cross / ((q - 1.0) * (terms.hi_p - terms.lo_p));
    out.interior_value =
        terms.cross / ((q - 1.0) * w.width()) *
        std::pow((q - 1.0) / q * (terms.hi_p - terms.lo_p) / terms.cross, q);
    out.endpoint_value = std::max(std::pow(w.lo, p - q), std::pow(w.hi, p - q));
    classify(out, w);
    return out;
}

double kantorovich_K2(const SpectralWindow& w, double p, double q) {
    return kantorovich_K2_detail(w, p, q).value;
}

CriticalPointForms k2_critical_points(const SpectralWindow& w, double p, double q) {
    const PowerTerms terms = power_terms(w, p);
    const ChordCoefficients chord = power_chord(w, p);
    return {q * terms.cross / ((q - 1.0) * (terms.hi_p - terms.lo_p)),
            q * chord.intercept / ((1.0 - q) * chord.slope)};
}

PiecewiseConstant kantorovich_C2_detail(const SpectralWindow& w, double p, double q) {
    w.require_positive();
    require_not_degenerate(q, "q", "kantorovich_C2");
    if (p > 0.0 || q > 0.0) throw ParameterError("kantorovich_C2 requires p <= 0 and q < 0");
    const PowerTerms terms = power_terms(w, p);
    const double base = (terms.hi_p - terms.lo_p) / (q * w.width());

    PiecewiseConstant out;
    out.critical_point = std::pow(base, 1.0 / (q - 1.0));
    out.interior_value = (w.hi * terms.lo_p - w.lo * terms.hi_p) / w.width() +
                         (q - 1.0) * std::pow(base, q / (q - 1.0));
    out.endpoint_value = std::max(terms.hi_p - std::pow(w.hi, q), terms.lo_p - std::pow(w.lo, q));
    classify(out, w);
    return out;
}

double kantorovich_C2(const SpectralWindow& w, double p, double q) {
    return kantorovich_C2_detail(w, p, q).value;
}

PiecewiseConstant kantorovich_C_detail(const SpectralWindow& w, double p) {
    w.require_positive();
    require_not_degenerate(p, "p", "kantorovich_C");
    if (p > 0.0) throw ParameterError("kantorovich_C requires p < 0");
    const PowerTerms terms = power_terms(w, p);
    const double base = (terms.hi_p - terms.lo_p) / (p * w.width());

    PiecewiseConstant out;
    out.critical_point = std::pow(base, 1.0 / (p - 1.0));
    out.interior_value = (w.hi * terms.lo_p - w.lo * terms.hi_p) / w.width() +
                         (p - 1.0) * std::pow(base, p / (p - 1.0));
    out.endpoint_value = 0.0;
    classify(out, w);
    return out;
}

double kantorovich_C(const SpectralWindow& w, double p) {
    return kantorovich_C_detail(w, p).value;
}

}  // namespace kanto
