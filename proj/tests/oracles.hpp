#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's rfcore/antmodel/resosynth evaluation paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// jwL / (1 - w^2 L C): the series-form algebra of a parallel LC.
inline double lc_reactance(double l, double c, double f) {
    const double w = 2.0 * kPi * f;
    return w * l / (1.0 - w * w * l * c);
}

/// Lossless line via its ABCD matrix [cos, j z0 sin; j sin/z0, cos].
inline cplx abcd_line(double z0, double theta, cplx z_load) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx a{c, 0.0}, b{0.0, z0 * s}, cc{0.0, s / z0}, d{c, 0.0};
    return (a * z_load + b) / (cc * z_load + d);
}

/// Open-ended line: ABCD with I_load = 0 gives A/C.
inline cplx abcd_open(double z0, double theta) {
    return cplx{std::cos(theta), 0.0} / cplx{0.0, std::sin(theta) / z0};
}

/// Shorted line: ABCD with V_load = 0 gives B/D.
inline cplx abcd_short(double z0, double theta) {
    return cplx{0.0, z0 * std::sin(theta)} / cplx{std::cos(theta), 0.0};
}

struct arm {
    double z0;
    double theta_open_ref;
    double theta_short_ref;
    double f_ref;
    std::optional<cplx> z_end;  // nullopt = open
};

inline cplx toward_open(const arm& a, double f) {
    const double th = a.theta_open_ref * f / a.f_ref;
    return a.z_end ? abcd_line(a.z0, th, *a.z_end) : abcd_open(a.z0, th);
}

inline cplx toward_short(const arm& a, double f) {
    return abcd_short(a.z0, a.theta_short_ref * f / a.f_ref);
}

/// Imaginary part of the loop resonance residual, computed independently.
inline double residual_im(const arm& a, double l, double c, double f) {
    return lc_reactance(l, c, f) + (toward_short(a, f) + toward_open(a, f)).imag();
}

/// Roots of Im(residual) by a dense scan with linear interpolation. Sign
/// changes where |residual| exceeds `pole_level` on either side are poles.
inline std::vector<double> scan_roots(const arm& a, double l, double c, double f_lo, double f_hi,
                                      int n, double pole_level = 1e3) {
    std::vector<double> roots;
    double fa = f_lo;
    double ra = residual_im(a, l, c, fa);
    for (int i = 1; i <= n; ++i) {
        const double fb = f_lo + (f_hi - f_lo) * i / n;
        const double rb = residual_im(a, l, c, fb);
        if ((ra < 0.0) != (rb < 0.0) && std::abs(ra) < pole_level && std::abs(rb) < pole_level) {
            roots.push_back(fa - ra * (fb - fa) / (rb - ra));
        }
        fa = fb;
        ra = rb;
    }
    return roots;
}

/// Exact (L, C) for two required reactances: the resonance conditions are
/// linear in (C, 1/L):  w_k C - (1/L)/w_k = -1/X_k. Solved by Cramer's rule.
inline std::optional<std::pair<double, double>> solve_lc(double f1, double x1, double f2, double x2) {
    const double w1 = 2.0 * kPi * f1, w2 = 2.0 * kPi * f2;
    const double a11 = w1, a12 = -1.0 / w1, a21 = w2, a22 = -1.0 / w2;
    const double b1 = -1.0 / x1, b2 = -1.0 / x2;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0) return std::nullopt;
    const double c = (b1 * a22 - a12 * b2) / det;
    const double inv_l = (a11 * b2 - b1 * a21) / det;
    if (!(c > 0.0) || !(inv_l > 0.0)) return std::nullopt;
    return std::make_pair(1.0 / inv_l, c);
}

/// Required series reactance -(X_short + X_open) on an open-ended arm.
inline double required_reactance(const arm& a, double f) {
    return -(toward_short(a, f) + toward_open(a, f)).imag();
}

}  // namespace oracle
