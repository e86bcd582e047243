#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ifatune/antmodel.hpp"
#include "ifatune/rfcore.hpp"

namespace ifatune::bandplan {

/// Closed frequency interval [lo, hi] in hertz. The truncation flags mark an
/// edge that coincides with the end of the sweep it was extracted from.
struct frequency_interval {
    double lo = 0.0;
    double hi = 0.0;
    bool truncated_lo = false;
    bool truncated_hi = false;

    bool truncated() const { return truncated_lo || truncated_hi; }
    friend bool operator==(const frequency_interval&, const frequency_interval&) = default;
};

/// Disjoint, ascending intervals. Construction merges overlapping and
/// touching intervals, so equal sets compare equal.
class interval_set {
public:
    interval_set() = default;
    explicit interval_set(std::vector<frequency_interval> intervals);

    const std::vector<frequency_interval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }

    /// [lo, hi] lies inside a single member interval.
    bool contains(double lo, double hi) const;
    /// Parts of [lo, hi] not covered by the set.
    std::vector<frequency_interval> uncovered(double lo, double hi) const;

    friend bool operator==(const interval_set&, const interval_set&) = default;

private:
    std::vector<frequency_interval> intervals_;
};

struct band_system {
    std::string name;
    std::vector<frequency_interval> intervals;
};

struct band_plan {
    std::vector<band_system> systems;

    void validate() const;
    const band_system* find(std::string_view name) const;
};

/// GSM-850, GSM-900, GPS (L1 C/A), DCS, PCS and UMTS.
band_plan builtin_bandplan();

/// `NAME = lo-hi, lo-hi, ...` lines, MHz, '#' comments.
band_plan parse_bandplan(std::istream& in, const std::string& source = "<bandplan>");
band_plan load_bandplan(const std::filesystem::path& path);

/// Intervals where s11_db <= threshold_db, edges linearly interpolated.
interval_set extract_bands(const antmodel::frequency_profile& profile, double threshold_db = -6.0);

interval_set tuning_union(std::span<const interval_set> band_sets);

enum class verdict { covered, partial, uncovered };

std::string_view to_string(verdict v);

struct system_coverage {
    std::string name;
    verdict status = verdict::uncovered;
    std::vector<frequency_interval> uncovered;
};

struct coverage_report {
    std::vector<system_coverage> systems;
    bool overall = false;
};

coverage_report coverage_report_for(const interval_set& covered, const band_plan& plan);

struct sweep_settings {
    double f_start = 0.5e9;
    double f_stop = 2.5e9;
    std::size_t n_points = 2001;
    double threshold_db = -6.0;
    double z_ref = 50.0;
};

struct tuning_result {
    std::vector<double> voltages;
    std::vector<double> capacitances;
    std::vector<interval_set> per_voltage;
    interval_set combined;
    coverage_report report;
};

/// Sweep the antenna at each bias voltage (OpenMP-parallel over voltages),
/// extract bands, union them and check the plan.
tuning_result tuning_sweep(const antmodel::antenna_geometry& geom,
                           const rfcore::resonator_network& net_template,
                           const rfcore::varactor_model& varactor, std::span<const double> voltages,
                           const sweep_settings& settings, const band_plan& plan);

/// Single-threaded reference for tuning_sweep().
tuning_result tuning_sweep_serial(const antmodel::antenna_geometry& geom,
                                  const rfcore::resonator_network& net_template,
                                  const rfcore::varactor_model& varactor,
                                  std::span<const double> voltages, const sweep_settings& settings,
                                  const band_plan& plan);

}  // namespace ifatune::bandplan
