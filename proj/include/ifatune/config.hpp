#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ifatune/antmodel.hpp"
#include "ifatune/bandplan.hpp"
#include "ifatune/resosynth.hpp"
#include "ifatune/rfcore.hpp"

namespace ifatune {

/// Everything a CLI run needs. The resonator's C1 is not configured
/// directly; it follows from the varactor law at the requested bias.
struct run_config {
    antmodel::antenna_geometry geometry;
    rfcore::resonator_network resonator;
    rfcore::varactor_model varactor;
    bandplan::sweep_settings sweep;
    std::vector<double> voltages;
    bool release_z0 = false;
    int calibration_max_iterations = 500;
    std::string bandplan_file;
    std::string output_dir = ".";

    /// Re-checks every module invariant; throws config_error.
    void validate() const;
    /// Resonator with C1 set from the varactor at bias v.
    rfcore::resonator_network resonator_at(double v) const;
};

/// Nominal, uncalibrated antenna with the Table-I resonator parts.
run_config default_config();

/// Overlays `section.key = value` lines onto default_config(). Unknown keys
/// are rejected by name.
run_config parse_config(std::istream& in, const std::string& source = "<config>");
run_config load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(write_config(c)) reproduces c.
std::string write_config(const run_config& cfg);

}  // namespace ifatune
