#include "ifatune/rfcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <spdlog/spdlog.h>

namespace ifatune::rfcore {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string(what) + " must be positive and finite");
    }
}

// Reactance of a susceptance b, clipped at the pole level. b == 0 is the
// resonator pole; it is reported as +j*clip (the inductive side).
impedance reactance_from_susceptance(double b) {
    if (b == 0.0) return {0.0, kPoleClipOhms};
    const double x = -1.0 / b;
    if (std::abs(x) > kPoleClipOhms) return {0.0, std::copysign(kPoleClipOhms, x)};
    return {0.0, x};
}

}  // namespace

impedance clip_pole(impedance z) {
    const double re = z.real();
    const double im = z.imag();
    if (std::isnan(re) || std::isnan(im)) return {0.0, kPoleClipOhms};
    if (std::isinf(im)) return {0.0, std::copysign(kPoleClipOhms, im)};
    if (std::isinf(re)) return {std::copysign(kPoleClipOhms, re), 0.0};
    const double mag = std::abs(z);
    if (mag > kPoleClipOhms) return z * (kPoleClipOhms / mag);
    return z;
}

void varactor_model::validate() const {
    require_positive(c_max, "varactor.c_max");
    require_positive(v_max, "varactor.v_max");
    require_positive(shape_exponent, "varactor.shape_exponent");
    if (!(tuning_ratio >= 1.0) || !std::isfinite(tuning_ratio)) {
        throw std::domain_error("varactor.tuning_ratio must be >= 1");
    }
}

void resonator_network::validate() const {
    require_positive(l1, "resonator.l1");
    require_positive(c1, "resonator.c1");
    require_positive(c2, "resonator.c2");
    require_positive(r1, "resonator.r1");
}

double resonator_network::self_resonance() const {
    return 1.0 / (kTwoPi * std::sqrt(l1 * c1));
}

impedance parallel_lc_impedance(double l, double c, double f) {
    require_positive(l, "inductance");
    require_positive(c, "capacitance");
    require_positive(f, "frequency");
    const double w = kTwoPi * f;
    return reactance_from_susceptance(w * c - 1.0 / (w * l));
}

impedance resonator_impedance(const resonator_network& net, double f) {
    if (net.bypass) return {0.0, 0.0};
    if (!net.include_c2_in_rf && !net.include_r1_in_rf) {
        return parallel_lc_impedance(net.l1, net.c1, f);
    }
    net.validate();
    require_positive(f, "frequency");
    const double w = kTwoPi * f;
    std::complex<double> y_c1{0.0, w * net.c1};
    if (net.include_r1_in_rf) y_c1 += 1.0 / net.r1;
    std::complex<double> z_branch = 1.0 / y_c1;
    if (net.include_c2_in_rf) z_branch += std::complex<double>{0.0, -1.0 / (w * net.c2)};
    const std::complex<double> y = std::complex<double>{0.0, -1.0 / (w * net.l1)} + 1.0 / z_branch;
    if (std::abs(y) * kPoleClipOhms <= 1.0) return {0.0, kPoleClipOhms};
    return clip_pole(1.0 / y);
}

impedance shorted_stub_impedance(double z0, double theta) {
    require_positive(z0, "z0");
    return clip_pole({0.0, z0 * std::tan(theta)});
}

impedance line_transform(double z0, double theta, impedance z_load) {
    require_positive(z0, "z0");
    if (theta == 0.0) return z_load;
    const double t = std::tan(theta);
    if (is_open(z_load)) {
        // -j z0 cot(theta)
        if (t == 0.0) return {0.0, -kPoleClipOhms};
        return clip_pole({0.0, -z0 / t});
    }
    if (std::abs(t) > 1e15) {
        // quarter-wave: z0^2 / z_load
        if (z_load == impedance{0.0, 0.0}) return {kPoleClipOhms, 0.0};
        return clip_pole(z0 * z0 / z_load);
    }
    const impedance j{0.0, 1.0};
    const impedance num = z_load + j * z0 * t;
    const impedance den = z0 + j * z_load * t;
    if (den == impedance{0.0, 0.0}) return {0.0, kPoleClipOhms};
    return clip_pole(z0 * num / den);
}

impedance parallel(impedance a, impedance b) {
    if (is_open(a)) return b;
    if (is_open(b)) return a;
    const impedance sum = a + b;
    if (sum == impedance{0.0, 0.0}) return open_circuit();
    return clip_pole(a * b / sum);
}

double varactor_capacitance(const varactor_model& model, double v) {
    model.validate();
    if (std::isnan(v)) throw std::domain_error("bias voltage is NaN");
    double bias = std::abs(v);
    if (bias > model.v_max) {
        spdlog::warn("bias {} V clamped to v_max = {} V", v, model.v_max);
        bias = model.v_max;
    }
    if (bias == 0.0) return model.c_max;
    if (bias == model.v_max) return model.c_max / model.tuning_ratio;
    const double x = std::pow(bias / model.v_max, model.shape_exponent);
    return model.c_max / (1.0 + (model.tuning_ratio - 1.0) * x);
}

}  // namespace ifatune::rfcore
