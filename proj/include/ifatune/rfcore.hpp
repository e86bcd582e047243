#pragma once

#include <complex>
#include <numbers>

namespace ifatune::rfcore {

using impedance = std::complex<double>;

/// Magnitude at which an impedance is treated as an open circuit. Poles of
/// lossless elements are clipped to this level instead of producing inf.
inline constexpr double kPoleClipOhms = 1e9;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Canonical open-circuit value used for end loads.
inline impedance open_circuit() { return {kPoleClipOhms, 0.0}; }

inline bool is_open(impedance z) { return std::abs(z) >= kPoleClipOhms; }

/// Scales z down to the clip level if it exceeds it. Non-finite values
/// (0/0 cannot occur in the lossless formulas) become +j*clip.
impedance clip_pole(impedance z);

/// Voltage-controlled capacitor with a rational C(V) law between two
/// published endpoints: C(0) = c_max and C(v_max) = c_max / tuning_ratio.
struct varactor_model {
    double c_max = 2e-12;
    double tuning_ratio = 3.3;
    double v_max = 15.0;
    double shape_exponent = 1.0;

    void validate() const;
    double c_min() const { return c_max / tuning_ratio; }
};

/// Parallel resonator on the radiating arm: L1 across the tunable C1.
/// C2 (DC block, in series with C1) and R1 (bias feed, shunting C1) are
/// left out of the RF path unless their flags are set.
struct resonator_network {
    double l1 = 9.1e-9;
    double c1 = 2e-12;
    double c2 = 68e-12;
    double r1 = 100e3;
    bool include_c2_in_rf = false;
    bool include_r1_in_rf = false;
    /// Replace the resonator by an ideal through connection.
    bool bypass = false;

    void validate() const;
    double self_resonance() const;
};

/// (1/(jwL) + jwC)^-1, purely reactive; |Z| clipped at the pole.
impedance parallel_lc_impedance(double l, double c, double f);

/// Series impedance the resonator inserts into the arm at f.
impedance resonator_impedance(const resonator_network& net, double f);

/// j z0 tan(theta).
impedance shorted_stub_impedance(double z0, double theta);

/// Lossless line of electrical length theta terminated in z_load.
impedance line_transform(double z0, double theta, impedance z_load);

/// a || b with open-circuit handling.
impedance parallel(impedance a, impedance b);

/// C(|V|) with |V| clamped to [0, v_max]; clamping is logged.
double varactor_capacitance(const varactor_model& model, double v);

}  // namespace ifatune::rfcore
