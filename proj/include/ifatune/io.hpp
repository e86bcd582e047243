#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifatune/antmodel.hpp"
#include "ifatune/bandplan.hpp"

namespace ifatune::io {

/// A file could not be read or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kProfileCsvHeader = "freq_hz,re_zin_ohm,im_zin_ohm,s11_db";
inline constexpr const char* kBandsCsvHeader = "voltage_v,band_lo_hz,band_hi_hz,truncated";
inline constexpr const char* kUnionCsvHeader = "band_lo_hz,band_hi_hz,truncated";
inline constexpr const char* kCoverageCsvHeader = "system,verdict,uncovered_hz";

/// Fixed-point rendering with `digits` significant digits (never exponent form).
std::string format_decimal(double value, int digits = 9);

void write_profile_csv(std::ostream& out, const antmodel::frequency_profile& p);
/// Rows of (freq, re z_in, im z_in, s11 dB) read back from write_profile_csv output.
struct profile_row {
    double freq_hz, re_zin, im_zin, s11_db;
};
std::vector<profile_row> read_profile_csv(std::istream& in);

/// Version-1 one-port Touchstone, `# Hz S RI R <z_ref>`.
void write_touchstone(std::ostream& out, const antmodel::frequency_profile& p);
struct touchstone_point {
    double freq_hz;
    double re, im;
};
std::vector<touchstone_point> read_touchstone(std::istream& in);

/// 800x500 static plot of s11_db with the threshold rule drawn.
void write_svg(std::ostream& out, const antmodel::frequency_profile& p, double threshold_db,
               const std::string& title);

void write_bands_csv(std::ostream& out, const std::vector<double>& voltages,
                     const std::vector<bandplan::interval_set>& sets);
/// Groups rows by voltage (in first-seen order).
void read_bands_csv(std::istream& in, std::vector<double>& voltages,
                    std::vector<bandplan::interval_set>& sets);

void write_union_csv(std::ostream& out, const bandplan::interval_set& set);
void write_coverage_csv(std::ostream& out, const bandplan::coverage_report& report);

/// Writes the whole string or throws io_error.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ifatune::io
