#pragma once

#include "ifatune/config.hpp"
#include "ifatune/resosynth.hpp"

namespace testsupport {

inline constexpr double kLowerCentre = 844e6;   // midpoint of 822..866 MHz
inline constexpr double kUpperCentre = 1575e6;  // midpoint of 1420..1730 MHz

/// Built-in defaults calibrated to the 0 V band centres.
inline const ifatune::run_config& calibrated_config() {
    static const ifatune::run_config cfg = [] {
        ifatune::run_config c = ifatune::default_config();
        const auto r = ifatune::resosynth::calibrate(c.geometry, c.resonator_at(0.0), kLowerCentre,
                                                     kUpperCentre);
        c.geometry = r.geometry;
        return c;
    }();
    return cfg;
}

}  // namespace testsupport
