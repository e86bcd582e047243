#include "ifatune/antmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace ifatune::antmodel {

using rfcore::is_open;
using rfcore::line_transform;
using rfcore::shorted_stub_impedance;

void antenna_geometry::validate() const {
    if (!(z0 > 0.0)) throw std::domain_error("geometry.z0 must be positive");
    if (!(theta_open_ref > 0.0)) throw std::domain_error("geometry.theta_open must be positive");
    if (!(theta_short_ref > 0.0)) throw std::domain_error("geometry.theta_short must be positive");
    if (!(f_ref > 0.0)) throw std::domain_error("geometry.f_ref must be positive");
    if (!(feed_fraction >= 0.0 && feed_fraction <= 1.0)) {
        throw std::domain_error("geometry.feed_fraction must lie in [0, 1]");
    }
    if (!std::isfinite(z_end.real()) || !std::isfinite(z_end.imag())) {
        throw std::domain_error("geometry.z_end must be finite");
    }
}

impedance impedance_toward_open(const antenna_geometry& geom, double f) {
    if (!(f > 0.0)) throw std::domain_error("frequency must be positive");
    return line_transform(geom.z0, geom.theta_open(f), geom.z_end);
}

impedance impedance_toward_short(const antenna_geometry& geom, double f) {
    if (!(f > 0.0)) throw std::domain_error("frequency must be positive");
    return shorted_stub_impedance(geom.z0, geom.theta_short(f));
}

impedance input_impedance(const antenna_geometry& geom, const resonator_network& net, double f) {
    if (!(f > 0.0)) throw std::domain_error("frequency must be positive");
    const double theta_s = geom.theta_short(f);
    const impedance below_tap = shorted_stub_impedance(geom.z0, geom.feed_fraction * theta_s);
    const impedance arm = rfcore::resonator_impedance(net, f) + impedance_toward_open(geom, f);
    const impedance above_tap =
        line_transform(geom.z0, (1.0 - geom.feed_fraction) * theta_s, rfcore::clip_pole(arm));
    return rfcore::parallel(below_tap, above_tap);
}

return_loss_result return_loss(impedance z_in, double z_ref) {
    if (!(z_ref > 0.0)) throw std::domain_error("z_ref must be positive");
    if (is_open(z_in)) return {0.0, false};
    const impedance den = z_in + z_ref;
    if (den == impedance{0.0, 0.0}) return {0.0, true};
    const double mag = std::abs((z_in - z_ref) / den);
    if (mag == 0.0) return {kReturnLossFloorDb, false};
    const double db = 20.0 * std::log10(mag);
    return {std::min(std::max(db, kReturnLossFloorDb), 0.0), false};
}

std::vector<double> linear_grid(double f_start, double f_stop, std::size_t n_points) {
    if (!(f_start > 0.0) || !(f_stop > f_start) || !std::isfinite(f_stop)) {
        throw std::domain_error("sweep range must satisfy 0 < f_start < f_stop");
    }
    if (n_points < 2) throw std::domain_error("sweep needs at least 2 points");
    std::vector<double> grid(n_points);
    const double span = f_stop - f_start;
    const double last = static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = f_start + span * (static_cast<double>(i) / last);
    }
    grid.back() = f_stop;
    for (std::size_t i = 1; i < n_points; ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::domain_error("sweep grid is not strictly increasing");
    }
    return grid;
}

namespace {

frequency_profile prepare(const antenna_geometry& geom, const resonator_network& net,
                          double f_start, double f_stop, std::size_t n_points, double z_ref) {
    geom.validate();
    if (!net.bypass) net.validate();
    if (!(z_ref > 0.0)) throw std::domain_error("z_ref must be positive");
    frequency_profile p;
    p.freqs = linear_grid(f_start, f_stop, n_points);
    p.z_in.resize(n_points);
    p.s11_db.resize(n_points);
    p.z_ref = z_ref;
    return p;
}

inline void evaluate_point(const antenna_geometry& geom, const resonator_network& net,
                           frequency_profile& p, std::size_t i) {
    p.z_in[i] = input_impedance(geom, net, p.freqs[i]);
    p.s11_db[i] = return_loss(p.z_in[i], p.z_ref).db;
}

}  // namespace

frequency_profile sweep(const antenna_geometry& geom, const resonator_network& net,
                        double f_start, double f_stop, std::size_t n_points, double z_ref) {
    frequency_profile p = prepare(geom, net, f_start, f_stop, n_points, z_ref);
    const auto n = static_cast<std::ptrdiff_t>(n_points);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        evaluate_point(geom, net, p, static_cast<std::size_t>(i));
    }
    return p;
}

frequency_profile sweep_serial(const antenna_geometry& geom, const resonator_network& net,
                               double f_start, double f_stop, std::size_t n_points, double z_ref) {
    frequency_profile p = prepare(geom, net, f_start, f_stop, n_points, z_ref);
    for (std::size_t i = 0; i < n_points; ++i) evaluate_point(geom, net, p, i);
    return p;
}

std::vector<std::size_t> s11_minima(const frequency_profile& p, double below_db) {
    std::vector<std::size_t> idx;
    const auto& s = p.s11_db;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] <= below_db && s[i] < s[i - 1] && s[i] <= s[i + 1]) idx.push_back(i);
    }
    return idx;
}

}  // namespace ifatune::antmodel
