#include "ifatune/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "ifatune/kvfile.hpp"

namespace ifatune::io {

std::string format_decimal(double value, int digits) {
    if (value == 0.0) return "0";
    if (!std::isfinite(value)) throw std::domain_error("cannot format a non-finite value");
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
    const int decimals = std::max(0, digits - 1 - exponent);
    return fmt::format("{:.{}f}", value, decimals);
}

namespace {

std::vector<std::string> csv_rows(std::istream& in, const std::string& header, std::size_t columns) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != header) {
        throw io_error(fmt::format("expected CSV header '{}'", header));
    }
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (split(line, ',').size() != columns) {
            throw io_error(fmt::format("CSV row '{}' does not have {} columns", line, columns));
        }
        rows.push_back(line);
    }
    return rows;
}

double csv_number(const std::string& text) {
    try {
        return parse_number(text, "csv");
    } catch (const config_error& ex) {
        throw io_error(ex.what());
    }
}

}  // namespace

void write_profile_csv(std::ostream& out, const antmodel::frequency_profile& p) {
    out << kProfileCsvHeader << '\n';
    for (std::size_t i = 0; i < p.size(); ++i) {
        out << format_decimal(p.freqs[i]) << ',' << format_decimal(p.z_in[i].real()) << ','
            << format_decimal(p.z_in[i].imag()) << ',' << format_decimal(p.s11_db[i]) << '\n';
    }
}

std::vector<profile_row> read_profile_csv(std::istream& in) {
    std::vector<profile_row> rows;
    for (const std::string& line : csv_rows(in, kProfileCsvHeader, 4)) {
        const auto c = split(line, ',');
        rows.push_back({csv_number(c[0]), csv_number(c[1]), csv_number(c[2]), csv_number(c[3])});
    }
    return rows;
}

void write_touchstone(std::ostream& out, const antmodel::frequency_profile& p) {
    out << "! one-port reflection of the IFA transmission-line model\n";
    out << fmt::format("# Hz S RI R {}\n", p.z_ref);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto z = p.z_in[i];
        std::complex<double> gamma{1.0, 0.0};
        if (!rfcore::is_open(z) && z + p.z_ref != std::complex<double>{0.0, 0.0}) {
            gamma = (z - p.z_ref) / (z + p.z_ref);
        }
        out << format_decimal(p.freqs[i]) << ' ' << format_decimal(gamma.real()) << ' '
            << format_decimal(gamma.imag()) << '\n';
    }
}

std::vector<touchstone_point> read_touchstone(std::istream& in) {
    std::vector<touchstone_point> points;
    std::string line;
    bool option_seen = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '!') continue;
        if (line.front() == '#') {
            if (line.rfind("# Hz S RI R ", 0) != 0) {
                throw io_error(fmt::format("unsupported Touchstone option line '{}'", line));
            }
            option_seen = true;
            continue;
        }
        if (!option_seen) throw io_error("Touchstone data before the option line");
        const auto cols = split(line, ' ');
        if (cols.size() != 3) throw io_error(fmt::format("bad Touchstone row '{}'", line));
        points.push_back({csv_number(cols[0]), csv_number(cols[1]), csv_number(cols[2])});
    }
    return points;
}

void write_svg(std::ostream& out, const antmodel::frequency_profile& p, double threshold_db,
               const std::string& title) {
    constexpr double kW = 800.0, kH = 500.0;
    constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 60.0;
    const double f_lo = p.freqs.front();
    const double f_hi = p.freqs.back();
    const double s_min = *std::min_element(p.s11_db.begin(), p.s11_db.end());
    const double y_lo = std::clamp(std::floor(std::min(s_min, threshold_db) / 10.0) * 10.0, -60.0, -10.0);
    auto px = [&](double f) { return kLeft + (f - f_lo) / (f_hi - f_lo) * (kW - kLeft - kRight); };
    auto py = [&](double db) {
        const double d = std::clamp(db, y_lo, 0.0);
        return kTop + (0.0 - d) / (0.0 - y_lo) * (kH - kTop - kBottom);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << fmt::format("<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                       "font-size=\"16\">{}</text>\n", title);
    out << fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
                       "stroke=\"black\"/>\n", kLeft, kTop, kW - kLeft - kRight, kH - kTop - kBottom);
    for (int k = 0; k <= 5; ++k) {
        const double f = f_lo + (f_hi - f_lo) * k / 5.0;
        out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"12\">{:.3f}</text>\n", px(f), kH - kBottom + 18.0, f / 1e9);
    }
    for (double db = 0.0; db >= y_lo; db -= 10.0) {
        out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n",
                           kLeft, py(db), kW - kRight, py(db));
        out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-family=\"sans-serif\" "
                           "font-size=\"12\">{:.0f}</text>\n", kLeft - 6.0, py(db) + 4.0, db);
    }
    out << fmt::format("<text x=\"400\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                       "font-size=\"14\">Frequency (GHz)</text>\n", kH - 15.0);
    out << fmt::format("<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                       "font-size=\"14\" transform=\"rotate(-90 18 {:.2f})\">S11 (dB)</text>\n",
                       kH / 2.0, kH / 2.0);
    out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"red\" "
                       "stroke-dasharray=\"6,4\"/>\n", kLeft, py(threshold_db), kW - kRight, py(threshold_db));
    out << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out << ' ';
        out << fmt::format("{:.2f},{:.2f}", px(p.freqs[i]), py(p.s11_db[i]));
    }
    out << "\"/>\n</svg>\n";
}

void write_bands_csv(std::ostream& out, const std::vector<double>& voltages,
                     const std::vector<bandplan::interval_set>& sets) {
    out << kBandsCsvHeader << '\n';
    for (std::size_t i = 0; i < voltages.size(); ++i) {
        for (const auto& iv : sets[i].intervals()) {
            out << format_decimal(voltages[i]) << ',' << format_decimal(iv.lo) << ','
                << format_decimal(iv.hi) << ',' << (iv.truncated() ? 1 : 0) << '\n';
        }
    }
}

void read_bands_csv(std::istream& in, std::vector<double>& voltages,
                    std::vector<bandplan::interval_set>& sets) {
    std::vector<std::vector<bandplan::frequency_interval>> grouped;
    voltages.clear();
    for (const std::string& line : csv_rows(in, kBandsCsvHeader, 4)) {
        const auto c = split(line, ',');
        const double v = csv_number(c[0]);
        bandplan::frequency_interval iv{csv_number(c[1]), csv_number(c[2])};
        if (!(iv.lo < iv.hi)) throw io_error(fmt::format("band row '{}' has lo >= hi", line));
        if (c[3] == "1") {
            iv.truncated_lo = iv.truncated_hi = true;
        } else if (c[3] != "0") {
            throw io_error(fmt::format("band row '{}': truncated must be 0 or 1", line));
        }
        auto it = std::find(voltages.begin(), voltages.end(), v);
        if (it == voltages.end()) {
            voltages.push_back(v);
            grouped.emplace_back();
            it = voltages.end() - 1;
        }
        grouped[static_cast<std::size_t>(it - voltages.begin())].push_back(iv);
    }
    sets.clear();
    for (auto& g : grouped) sets.emplace_back(std::move(g));
}

void write_union_csv(std::ostream& out, const bandplan::interval_set& set) {
    out << kUnionCsvHeader << '\n';
    for (const auto& iv : set.intervals()) {
        out << format_decimal(iv.lo) << ',' << format_decimal(iv.hi) << ',' << (iv.truncated() ? 1 : 0) << '\n';
    }
}

void write_coverage_csv(std::ostream& out, const bandplan::coverage_report& report) {
    out << kCoverageCsvHeader << '\n';
    for (const auto& s : report.systems) {
        out << s.name << ',' << bandplan::to_string(s.status) << ',';
        for (std::size_t i = 0; i < s.uncovered.size(); ++i) {
            if (i) out << ' ';
            out << format_decimal(s.uncovered[i].lo) << '-' << format_decimal(s.uncovered[i].hi);
        }
        out << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot open '{}' for writing", path.string()));
    out << content;
    out.flush();
    if (!out) throw io_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace ifatune::io
