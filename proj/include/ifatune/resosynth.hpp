#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ifatune/antmodel.hpp"
#include "ifatune/rfcore.hpp"

namespace ifatune::resosynth {

using antmodel::antenna_geometry;
using rfcore::impedance;
using rfcore::resonator_network;

/// Target frequencies the lossless LC cannot reach (non-reactive requirement).
class infeasible_target_error : public std::runtime_error {
public:
    infeasible_target_error(const std::string& what, double frequency)
        : std::runtime_error(what), frequency_(frequency) {}
    double frequency() const { return frequency_; }

private:
    double frequency_;
};

/// Newton did not reach the residual tolerance, or the synthesized values
/// are non-physical (L or C not positive).
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class synthesis_method { closed_form, numeric, automatic };

std::string_view to_string(synthesis_method m);
synthesis_method parse_synthesis_method(std::string_view s);

struct synthesis_result {
    double l = 0.0;
    double c = 0.0;
    synthesis_method method = synthesis_method::closed_form;
    /// |Im(resonance_residual)| at f1 and f2, ohms.
    double residual_f1 = 0.0;
    double residual_f2 = 0.0;
    int iterations = 0;
};

struct synthesis_options {
    /// |Re(required Z_LC)| above this fraction of z0 is infeasible.
    double max_real_fraction = 0.25;
    /// Residual tolerance, as a fraction of z0.
    double residual_tolerance = 1e-6;
    int max_iterations = 200;
};

/// Series impedance the resonator must present for the arm to resonate at f:
/// -(Z_short + Z_open).
impedance required_resonator_impedance(const antenna_geometry& geom, double f);

/// Z_LC(f) + Z_short(f) + Z_open(f); zero at a resonance of the arm.
impedance resonance_residual(const antenna_geometry& geom, const resonator_network& net, double f);

/// Bracket sign changes of Im(residual) on a linear grid (skipping points
/// within 0.1% of the resonator pole), bisect each to 1e-9 relative and keep
/// the ones that are local minima of |residual|. Sorted ascending.
std::vector<double> find_resonances(const antenna_geometry& geom, const resonator_network& net,
                                    double f_start, double f_stop, std::size_t n_grid = 2001);

synthesis_result synthesize_lc(const antenna_geometry& geom, double f1, double f2,
                               synthesis_method mode = synthesis_method::automatic,
                               const synthesis_options& opts = {});

/// arctan(X_LC / z0): positive below the resonator pole, negative above.
double effective_electrical_length(const resonator_network& net, double f, double z0);

/// theta_open(f) + theta_short(f) + theta_LC(f) - pi/2.
double quarter_wave_residual(const antenna_geometry& geom, const resonator_network& net, double f);

struct calibration_options {
    double theta_open_min = 10.0 * rfcore::kTwoPi / 360.0;
    double theta_open_max = 170.0 * rfcore::kTwoPi / 360.0;
    double theta_short_min = 5.0 * rfcore::kTwoPi / 360.0;
    double theta_short_max = 90.0 * rfcore::kTwoPi / 360.0;
    bool release_z0 = false;
    double z0_min = 25.0;
    double z0_max = 400.0;
    double target_objective = 1e-6;
    int max_iterations = 500;
    std::size_t n_grid = 1000;
};

struct calibration_result {
    antenna_geometry geometry;
    double objective = 0.0;
    double initial_objective = 0.0;
    int iterations = 0;
    /// False when the objective stayed above target_objective.
    bool converged = false;
    std::vector<double> predicted;
};

/// The two lowest resonances in [0.5 f1, 2 f2] (fewer if not found).
std::vector<double> predicted_pair(const antenna_geometry& geom, const resonator_network& net,
                                   double f1, double f2, std::size_t n_grid = 1000);

/// Nelder-Mead fit of the arm's electrical lengths (and z0 when released)
/// so the two lowest resonances land on the measured pair.
calibration_result calibrate(const antenna_geometry& initial, const resonator_network& net,
                             double f1_measured, double f2_measured,
                             const calibration_options& opts = {});

}  // namespace ifatune::resosynth
