#include "ifatune/resosynth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace ifatune::resosynth {

using antmodel::impedance_toward_open;
using antmodel::impedance_toward_short;
using rfcore::kPoleClipOhms;
using rfcore::kTwoPi;

std::string_view to_string(synthesis_method m) {
    switch (m) {
        case synthesis_method::closed_form: return "closed_form";
        case synthesis_method::numeric: return "numeric";
        case synthesis_method::automatic: return "auto";
    }
    return "?";
}

synthesis_method parse_synthesis_method(std::string_view s) {
    if (s == "closed_form" || s == "closed-form") return synthesis_method::closed_form;
    if (s == "numeric") return synthesis_method::numeric;
    if (s == "auto") return synthesis_method::automatic;
    throw std::invalid_argument(fmt::format("unknown synthesis mode '{}'", s));
}

impedance required_resonator_impedance(const antenna_geometry& geom, double f) {
    return -(impedance_toward_short(geom, f) + impedance_toward_open(geom, f));
}

impedance resonance_residual(const antenna_geometry& geom, const resonator_network& net, double f) {
    return rfcore::resonator_impedance(net, f) + impedance_toward_short(geom, f) +
           impedance_toward_open(geom, f);
}

std::vector<double> find_resonances(const antenna_geometry& geom, const resonator_network& net,
                                    double f_start, double f_stop, std::size_t n_grid) {
    if (n_grid < 16) throw std::domain_error("find_resonances needs n_grid >= 16");
    geom.validate();
    if (!net.bypass) net.validate();
    const std::vector<double> grid = antmodel::linear_grid(f_start, f_stop, n_grid);
    const double f0 = net.bypass ? 0.0 : net.self_resonance();

    auto im_res = [&](double f) { return resonance_residual(geom, net, f).imag(); };

    struct sample {
        double f;
        double x;
        bool after_pole;
    };
    // The scan never brackets across f0; a sample just inside each side keeps
    // roots close to the pole reachable.
    constexpr double kPoleGap = 1e-7;
    std::vector<sample> samples;
    samples.reserve(n_grid + 2);
    bool past = false;
    for (double f : grid) {
        if (f0 > 0.0 && !past && f >= f0) {
            past = true;
            const double below = f0 * (1.0 - kPoleGap);
            const double above = f0 * (1.0 + kPoleGap);
            if (below > f_start && (samples.empty() || below > samples.back().f)) {
                samples.push_back({below, im_res(below), false});
            }
            if (above < f_stop && above < f) samples.push_back({above, im_res(above), true});
        }
        if (f0 > 0.0 && std::abs(f - f0) <= kPoleGap * f0) continue;
        samples.push_back({f, im_res(f), past});
    }

    std::vector<double> roots;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const sample a = samples[i];
        if (a.x == 0.0) {
            roots.push_back(a.f);
            continue;
        }
        if (i + 1 == samples.size()) break;
        const sample b = samples[i + 1];
        if (a.after_pole != b.after_pole) continue;
        if (b.x == 0.0 || ((a.x < 0.0) == (b.x < 0.0))) continue;

        double lo = a.f;
        double hi = b.f;
        double x_lo = a.x;
        while (hi - lo > 1e-9 * lo) {
            const double mid = 0.5 * (lo + hi);
            const double x_mid = im_res(mid);
            if (x_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((x_mid < 0.0) == (x_lo < 0.0)) {
                lo = mid;
                x_lo = x_mid;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        // A sign change through a pole bisects onto the pole, where |residual|
        // is a maximum rather than a minimum.
        if (std::abs(im_res(root)) <= std::min(std::abs(a.x), std::abs(b.x))) {
            roots.push_back(root);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

double reactive_residual(const antenna_geometry& geom, double l, double c, double f) {
    resonator_network net;
    net.l1 = l;
    net.c1 = c;
    return std::abs(resonance_residual(geom, net, f).imag());
}

struct reactance_targets {
    double f1, f2;
    double x1, x2;
};

reactance_targets required_reactances(const antenna_geometry& geom, double f1, double f2,
                                      const synthesis_options& opts) {
    if (!(f1 > 0.0) || !(f2 > f1)) {
        throw std::domain_error("synthesis targets must satisfy 0 < f1 < f2");
    }
    geom.validate();
    reactance_targets t{f1, f2, 0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        const double f = k == 0 ? f1 : f2;
        const impedance z = required_resonator_impedance(geom, f);
        if (std::abs(z.real()) > opts.max_real_fraction * geom.z0) {
            throw infeasible_target_error(
                fmt::format("required resonator impedance at {:.6g} Hz is {:.6g}{:+.6g}j ohm; "
                            "its resistive part cannot be realized by a lossless LC",
                            f, z.real(), z.imag()),
                f);
        }
        (k == 0 ? t.x1 : t.x2) = z.imag();
    }
    return t;
}

// L = (-3j/(4 pi f1)) Z2 Z1 / (2 Z2 - Z1)
// C = (-j/(2 pi f1)) (1/Z1 - 1/(j 2 pi f1 L))
std::pair<double, double> closed_form_values(const reactance_targets& t) {
    using cplx = std::complex<double>;
    const cplx j{0.0, 1.0};
    const cplx z1{0.0, t.x1};
    const cplx z2{0.0, t.x2};
    const double pi = std::numbers::pi;
    const cplx l = (-3.0 * j / (4.0 * pi * t.f1)) * (z2 * z1) / (2.0 * z2 - z1);
    const cplx c = (-j / (2.0 * pi * t.f1)) * (1.0 / z1 - 1.0 / (j * 2.0 * pi * t.f1 * l));
    constexpr double kImagTolerance = 1e-9;
    if (std::abs(l.imag()) > kImagTolerance * std::abs(l) ||
        std::abs(c.imag()) > kImagTolerance * std::abs(c)) {
        throw convergence_error("closed-form L/C has a non-negligible imaginary part");
    }
    return {l.real(), c.real()};
}

synthesis_result closed_form(const antenna_geometry& geom, const reactance_targets& t) {
    const auto [l, c] = closed_form_values(t);
    if (!(l > 0.0) || !(c > 0.0) || !std::isfinite(l) || !std::isfinite(c)) {
        throw convergence_error(
            fmt::format("closed form gives non-physical L = {:.6g} H, C = {:.6g} F", l, c));
    }
    synthesis_result r;
    r.l = l;
    r.c = c;
    r.method = synthesis_method::closed_form;
    r.residual_f1 = reactive_residual(geom, l, c, t.f1);
    r.residual_f2 = reactive_residual(geom, l, c, t.f2);
    return r;
}

// Damped Newton on (log L, log C). The residual is written in susceptance
// form, w C - 1/(w L) + 1/X_req, which is smooth across the LC pole.
synthesis_result numeric(const antenna_geometry& geom, const reactance_targets& t,
                         const synthesis_options& opts) {
    double l = 10e-9;
    double c = 1e-12;
    try {
        const auto [l0, c0] = closed_form_values(t);
        if (l0 > 0.0 && c0 > 0.0 && std::isfinite(l0) && std::isfinite(c0)) {
            l = l0;
            c = c0;
        }
    } catch (const convergence_error&) {
    }

    const std::array<double, 2> w{kTwoPi * t.f1, kTwoPi * t.f2};
    const std::array<double, 2> b_req{-1.0 / t.x1, -1.0 / t.x2};
    const double tol = opts.residual_tolerance * geom.z0;

    auto g = [&](double u, double v) {
        const double ll = std::exp(u);
        const double cc = std::exp(v);
        return std::array<double, 2>{w[0] * cc - 1.0 / (w[0] * ll) - b_req[0],
                                     w[1] * cc - 1.0 / (w[1] * ll) - b_req[1]};
    };
    auto norm = [&](const std::array<double, 2>& r) { return geom.z0 * std::hypot(r[0], r[1]); };

    double u = std::log(l);
    double v = std::log(c);
    auto r = g(u, v);
    for (int it = 0; it < opts.max_iterations; ++it) {
        l = std::exp(u);
        c = std::exp(v);
        const double res1 = reactive_residual(geom, l, c, t.f1);
        const double res2 = reactive_residual(geom, l, c, t.f2);
        if (res1 < tol && res2 < tol) {
            return {l, c, synthesis_method::numeric, res1, res2, it};
        }
        // d/du = 1/(w L), d/dv = w C
        const double a11 = 1.0 / (w[0] * l), a12 = w[0] * c;
        const double a21 = 1.0 / (w[1] * l), a22 = w[1] * c;
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double du = (-r[0] * a22 + r[1] * a12) / det;
        double dv = (-r[1] * a11 + r[0] * a21) / det;
        const double step = std::max(std::abs(du), std::abs(dv));
        if (step > 2.0) {
            du *= 2.0 / step;
            dv *= 2.0 / step;
        }
        const double n0 = norm(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            const auto trial = g(u + lambda * du, v + lambda * dv);
            if (norm(trial) < n0) {
                u += lambda * du;
                v += lambda * dv;
                r = trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    throw convergence_error(fmt::format(
        "Newton synthesis did not converge for f1 = {:.6g} Hz, f2 = {:.6g} Hz", t.f1, t.f2));
}

}  // namespace

synthesis_result synthesize_lc(const antenna_geometry& geom, double f1, double f2,
                               synthesis_method mode, const synthesis_options& opts) {
    const reactance_targets t = required_reactances(geom, f1, f2, opts);
    switch (mode) {
        case synthesis_method::closed_form: return closed_form(geom, t);
        case synthesis_method::numeric: return numeric(geom, t, opts);
        case synthesis_method::automatic: {
            const double tol = opts.residual_tolerance * geom.z0;
            try {
                synthesis_result r = closed_form(geom, t);
                if (r.residual_f1 < tol && r.residual_f2 < tol) return r;
            } catch (const convergence_error&) {
            }
            return numeric(geom, t, opts);
        }
    }
    throw std::invalid_argument("unknown synthesis mode");
}

double effective_electrical_length(const resonator_network& net, double f, double z0) {
    if (!(f > 0.0)) throw std::domain_error("frequency must be positive");
    if (!(z0 > 0.0)) throw std::domain_error("z0 must be positive");
    const double x = rfcore::resonator_impedance(net, f).imag();
    // at the pole (either clip sign) report the inductive limit
    if (std::abs(x) >= kPoleClipOhms) return std::numbers::pi / 2.0;
    return std::atan(x / z0);
}

double quarter_wave_residual(const antenna_geometry& geom, const resonator_network& net, double f) {
    return geom.theta_open(f) + geom.theta_short(f) +
           effective_electrical_length(net, f, geom.z0) - std::numbers::pi / 2.0;
}

std::vector<double> predicted_pair(const antenna_geometry& geom, const resonator_network& net,
                                   double f1, double f2, std::size_t n_grid) {
    std::vector<double> roots = find_resonances(geom, net, 0.5 * f1, 2.0 * f2, n_grid);
    if (roots.size() > 2) roots.resize(2);
    return roots;
}

namespace {

constexpr double kMissingResonancePenalty = 100.0;

class calibration_problem {
public:
    calibration_problem(const antenna_geometry& initial, const resonator_network& net, double f1,
                        double f2, const calibration_options& opts)
        : base_(initial), net_(net), f1_(f1), f2_(f2), opts_(opts) {
        lower_ = {opts.theta_open_min, opts.theta_short_min, opts.z0_min};
        upper_ = {opts.theta_open_max, opts.theta_short_max, opts.z0_max};
    }

    std::size_t dims() const { return opts_.release_z0 ? 3 : 2; }

    std::array<double, 3> clamp(std::array<double, 3> p) const {
        for (std::size_t d = 0; d < dims(); ++d) p[d] = std::clamp(p[d], lower_[d], upper_[d]);
        return p;
    }

    antenna_geometry geometry(const std::array<double, 3>& p) const {
        antenna_geometry g = base_;
        g.theta_open_ref = p[0];
        g.theta_short_ref = p[1];
        if (opts_.release_z0) g.z0 = p[2];
        return g;
    }

    double objective(const std::array<double, 3>& p) const {
        const std::vector<double> pred = predicted_pair(geometry(p), net_, f1_, f2_, opts_.n_grid);
        if (pred.size() < 2) return kMissingResonancePenalty + static_cast<double>(2 - pred.size());
        const double e1 = (pred[0] - f1_) / f1_;
        const double e2 = (pred[1] - f2_) / f2_;
        return e1 * e1 + e2 * e2;
    }

    double width(std::size_t d) const { return upper_[d] - lower_[d]; }
    double lower(std::size_t d) const { return lower_[d]; }

private:
    antenna_geometry base_;
    resonator_network net_;
    double f1_, f2_;
    calibration_options opts_;
    std::array<double, 3> lower_{}, upper_{};
};

}  // namespace

calibration_result calibrate(const antenna_geometry& initial, const resonator_network& net,
                             double f1_measured, double f2_measured,
                             const calibration_options& opts) {
    if (!(f1_measured > 0.0) || !(f2_measured > f1_measured)) {
        throw std::domain_error("calibration needs two ascending measured frequencies");
    }
    initial.validate();
    net.validate();
    const calibration_problem prob(initial, net, f1_measured, f2_measured, opts);
    const std::size_t n = prob.dims();

    using point = std::array<double, 3>;
    const point start_raw{initial.theta_open_ref, initial.theta_short_ref, initial.z0};

    calibration_result result;
    result.initial_objective = prob.objective(start_raw);
    auto finish = [&](const point& p, double obj, int iterations) {
        result.geometry = prob.geometry(p);
        result.objective = obj;
        result.iterations = iterations;
        result.converged = obj < opts.target_objective;
        result.predicted = predicted_pair(result.geometry, net, f1_measured, f2_measured, opts.n_grid);
        if (!result.converged) {
            spdlog::warn("calibration stopped at objective {:.3g} after {} iterations", obj, iterations);
        }
        return result;
    };
    if (result.initial_objective < opts.target_objective) {
        return finish(start_raw, result.initial_objective, 0);
    }

    // Seed from the better of the initial geometry and a coarse box scan.
    point start = prob.clamp(start_raw);
    double start_obj = prob.objective(start);
    constexpr int kScanOpen = 17;
    constexpr int kScanShort = 18;
    for (int i = 0; i < kScanOpen; ++i) {
        for (int k = 0; k < kScanShort; ++k) {
            point p = start_raw;
            p[0] = prob.lower(0) + prob.width(0) * i / (kScanOpen - 1);
            p[1] = prob.lower(1) + prob.width(1) * k / (kScanShort - 1);
            p = prob.clamp(p);
            const double o = prob.objective(p);
            if (o < start_obj) {
                start_obj = o;
                start = p;
            }
        }
    }

    std::vector<point> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    auto build_simplex = [&](const point& centre, double scale) {
        simplex.assign(n + 1, centre);
        for (std::size_t d = 0; d < n; ++d) {
            double step = scale * prob.width(d);
            point p = centre;
            p[d] += step;
            if (prob.clamp(p)[d] != p[d]) p[d] = centre[d] - step;
            simplex[d + 1] = prob.clamp(p);
        }
        for (std::size_t v = 0; v <= n; ++v) values[v] = prob.objective(simplex[v]);
    };
    build_simplex(start, 0.05);

    auto order = [&]() {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<point> s(n + 1);
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s[i] = simplex[idx[i]];
            v[i] = values[idx[i]];
        }
        simplex = std::move(s);
        values = std::move(v);
    };

    int it = 0;
    double restart_scale = 0.02;
    for (; it < opts.max_iterations; ++it) {
        order();
        if (values[0] < opts.target_objective) break;

        double diameter = 0.0;
        for (std::size_t v = 1; v <= n; ++v) {
            for (std::size_t d = 0; d < n; ++d) {
                diameter = std::max(diameter, std::abs(simplex[v][d] - simplex[0][d]) / prob.width(d));
            }
        }
        if (diameter < 1e-12) {
            build_simplex(simplex[0], restart_scale);
            restart_scale *= 0.5;
            continue;
        }

        point centroid{};
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[v][d] / static_cast<double>(n);
        }
        auto along = [&](double t) {
            point p = simplex[n];
            for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + t * (simplex[n][d] - centroid[d]);
            return prob.clamp(p);
        };

        const point reflected = along(-1.0);
        const double f_r = prob.objective(reflected);
        if (f_r < values[0]) {
            const point expanded = along(-2.0);
            const double f_e = prob.objective(expanded);
            if (f_e < f_r) {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if (f_r < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = f_r;
            continue;
        }
        const bool outside = f_r < values[n];
        const point contracted = along(outside ? -0.5 : 0.5);
        const double f_c = prob.objective(contracted);
        if (f_c < (outside ? f_r : values[n])) {
            simplex[n] = contracted;
            values[n] = f_c;
            continue;
        }
        for (std::size_t v = 1; v <= n; ++v) {
            for (std::size_t d = 0; d < n; ++d) {
                simplex[v][d] = simplex[0][d] + 0.5 * (simplex[v][d] - simplex[0][d]);
            }
            values[v] = prob.objective(simplex[v]);
        }
    }
    order();
    return finish(simplex[0], values[0], it);
}

}  // namespace ifatune::resosynth
