#pragma once

#include <iosfwd>

namespace ifatune::cli {

/// Process exit statuses.
enum exit_code : int {
    kOk = 0,
    kUsage = 1,
    kIo = 2,
    kInfeasible = 3,
    kNotCalibrated = 4,
};

/// Entry point for `ifatune <sweep|synthesize|tune|calibrate> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ifatune::cli
