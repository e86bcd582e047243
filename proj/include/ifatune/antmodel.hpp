#pragma once

#include <cstddef>
#include <vector>

#include "ifatune/rfcore.hpp"

namespace ifatune::antmodel {

using rfcore::impedance;
using rfcore::resonator_network;

/// Transmission-line picture of the IFA arm: a line of impedance z0 from
/// the resonator to the open end (load z_end) and from the resonator to the
/// shorted end. The feed taps the short-side line at feed_fraction
/// (0 = at the short, 1 = at the resonator). Electrical lengths are given
/// at f_ref and scale linearly with frequency.
struct antenna_geometry {
    double z0 = 50.0;
    double theta_open_ref = 1.0;
    double theta_short_ref = 0.3;
    double f_ref = 1e9;
    impedance z_end = rfcore::open_circuit();
    double feed_fraction = 0.15;

    void validate() const;
    double theta_open(double f) const { return theta_open_ref * f / f_ref; }
    double theta_short(double f) const { return theta_short_ref * f / f_ref; }
};

struct frequency_profile {
    std::vector<double> freqs;
    std::vector<impedance> z_in;
    std::vector<double> s11_db;
    double z_ref = 50.0;

    std::size_t size() const { return freqs.size(); }
};

inline constexpr double kReturnLossFloorDb = -200.0;

struct return_loss_result {
    double db = 0.0;
    /// z_in == -z_ref; the reflection coefficient is undefined there.
    bool pole = false;
};

impedance impedance_toward_open(const antenna_geometry& geom, double f);
impedance impedance_toward_short(const antenna_geometry& geom, double f);

/// Impedance at the feed tap: the shorted stub below the tap in parallel
/// with the resonator + open-side arm seen through the rest of the line.
impedance input_impedance(const antenna_geometry& geom, const resonator_network& net, double f);

/// 20 log10 |(z_in - z_ref)/(z_in + z_ref)|, floored at -200 dB.
return_loss_result return_loss(impedance z_in, double z_ref);

/// n points from f_start to f_stop inclusive.
std::vector<double> linear_grid(double f_start, double f_stop, std::size_t n_points);

/// Return-loss sweep, OpenMP-parallel over frequency points.
frequency_profile sweep(const antenna_geometry& geom, const resonator_network& net,
                        double f_start, double f_stop, std::size_t n_points,
                        double z_ref = 50.0);

/// Single-threaded reference for sweep(); results are bit-identical.
frequency_profile sweep_serial(const antenna_geometry& geom, const resonator_network& net,
                               double f_start, double f_stop, std::size_t n_points,
                               double z_ref = 50.0);

/// Indices of interior local minima of s11_db that lie at or below below_db.
std::vector<std::size_t> s11_minima(const frequency_profile& p, double below_db);

}  // namespace ifatune::antmodel
