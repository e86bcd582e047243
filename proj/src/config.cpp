#include "ifatune/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "ifatune/kvfile.hpp"

namespace ifatune {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

rfcore::impedance parse_end_load(const std::string& text, const std::string& what) {
    if (trim(text) == "open") return rfcore::open_circuit();
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {parse_number(parts[0], what), 0.0};
    if (parts.size() == 2) return {parse_number(parts[0], what), parse_number(parts[1], what)};
    throw config_error(fmt::format("{}: expected 'open', 're' or 're, im'", what));
}

std::string format_end_load(rfcore::impedance z) {
    if (rfcore::is_open(z)) return "open";
    if (z.imag() == 0.0) return fmt::format("{}", z.real());
    return fmt::format("{}, {}", z.real(), z.imag());
}

using setter = std::function<void(run_config&, const std::string&, const std::string&)>;

const std::map<std::string, setter>& setters() {
    static const std::map<std::string, setter> table = {
        {"geometry.z0_ohm", [](run_config& c, const std::string& v, const std::string& w) { c.geometry.z0 = parse_number(v, w); }},
        {"geometry.theta_open_deg", [](run_config& c, const std::string& v, const std::string& w) { c.geometry.theta_open_ref = parse_number(v, w) * kDeg; }},
        {"geometry.theta_short_deg", [](run_config& c, const std::string& v, const std::string& w) { c.geometry.theta_short_ref = parse_number(v, w) * kDeg; }},
        {"geometry.f_ref_ghz", [](run_config& c, const std::string& v, const std::string& w) { c.geometry.f_ref = parse_number(v, w) * 1e9; }},
        {"geometry.z_end_ohm", [](run_config& c, const std::string& v, const std::string& w) { c.geometry.z_end = parse_end_load(v, w); }},
        {"geometry.feed_fraction", [](run_config& c, const std::string& v, const std::string& w) { c.geometry.feed_fraction = parse_number(v, w); }},
        {"resonator.l1_nh", [](run_config& c, const std::string& v, const std::string& w) { c.resonator.l1 = parse_number(v, w) * 1e-9; }},
        {"resonator.c2_pf", [](run_config& c, const std::string& v, const std::string& w) { c.resonator.c2 = parse_number(v, w) * 1e-12; }},
        {"resonator.r1_kohm", [](run_config& c, const std::string& v, const std::string& w) { c.resonator.r1 = parse_number(v, w) * 1e3; }},
        {"resonator.include_c2", [](run_config& c, const std::string& v, const std::string& w) { c.resonator.include_c2_in_rf = parse_bool(v, w); }},
        {"resonator.include_r1", [](run_config& c, const std::string& v, const std::string& w) { c.resonator.include_r1_in_rf = parse_bool(v, w); }},
        {"varactor.c_max_pf", [](run_config& c, const std::string& v, const std::string& w) { c.varactor.c_max = parse_number(v, w) * 1e-12; }},
        {"varactor.tuning_ratio", [](run_config& c, const std::string& v, const std::string& w) { c.varactor.tuning_ratio = parse_number(v, w); }},
        {"varactor.v_max_v", [](run_config& c, const std::string& v, const std::string& w) { c.varactor.v_max = parse_number(v, w); }},
        {"varactor.shape_exponent", [](run_config& c, const std::string& v, const std::string& w) { c.varactor.shape_exponent = parse_number(v, w); }},
        {"sweep.f_start_ghz", [](run_config& c, const std::string& v, const std::string& w) { c.sweep.f_start = parse_number(v, w) * 1e9; }},
        {"sweep.f_stop_ghz", [](run_config& c, const std::string& v, const std::string& w) { c.sweep.f_stop = parse_number(v, w) * 1e9; }},
        {"sweep.n_points", [](run_config& c, const std::string& v, const std::string& w) {
             const double n = parse_number(v, w);
             if (n != std::floor(n) || n < 2 || n > 1e8) throw config_error(fmt::format("{}: must be an integer >= 2", w));
             c.sweep.n_points = static_cast<std::size_t>(n);
         }},
        {"analysis.threshold_db", [](run_config& c, const std::string& v, const std::string& w) { c.sweep.threshold_db = parse_number(v, w); }},
        {"analysis.z_ref_ohm", [](run_config& c, const std::string& v, const std::string& w) { c.sweep.z_ref = parse_number(v, w); }},
        {"tune.voltages_v", [](run_config& c, const std::string& v, const std::string& w) { c.voltages = parse_number_list(v, w); }},
        {"calibration.release_z0", [](run_config& c, const std::string& v, const std::string& w) { c.release_z0 = parse_bool(v, w); }},
        {"calibration.max_iterations", [](run_config& c, const std::string& v, const std::string& w) {
             const double n = parse_number(v, w);
             if (n != std::floor(n) || n < 0 || n > 1e6) throw config_error(fmt::format("{}: must be a non-negative integer", w));
             c.calibration_max_iterations = static_cast<int>(n);
         }},
        {"bandplan.file", [](run_config& c, const std::string& v, const std::string&) { c.bandplan_file = v; }},
        {"output.dir", [](run_config& c, const std::string& v, const std::string&) { c.output_dir = v; }},
    };
    return table;
}

}  // namespace

void run_config::validate() const {
    try {
        geometry.validate();
        resonator.validate();
        varactor.validate();
        antmodel::linear_grid(sweep.f_start, sweep.f_stop, sweep.n_points);
    } catch (const std::domain_error& ex) {
        throw config_error(ex.what());
    }
    if (!(sweep.threshold_db < 0.0)) throw config_error("analysis.threshold_db must be negative");
    if (!(sweep.z_ref > 0.0)) throw config_error("analysis.z_ref_ohm must be positive");
    if (voltages.empty()) throw config_error("tune.voltages_v needs at least one voltage");
    if (output_dir.empty()) throw config_error("output.dir must not be empty");
}

rfcore::resonator_network run_config::resonator_at(double v) const {
    rfcore::resonator_network net = resonator;
    net.c1 = rfcore::varactor_capacitance(varactor, v);
    return net;
}

run_config default_config() {
    run_config c;
    c.geometry.z0 = 200.0;
    c.geometry.theta_open_ref = 60.0 * kDeg;
    c.geometry.theta_short_ref = 15.0 * kDeg;
    c.geometry.f_ref = 1e9;
    c.geometry.z_end = {8000.0, 0.0};
    c.geometry.feed_fraction = 0.55;
    c.resonator.c1 = c.varactor.c_max;
    c.voltages.clear();
    for (int v = 0; v <= 15; ++v) c.voltages.push_back(v);
    return c;
}

run_config parse_config(std::istream& in, const std::string& source) {
    run_config cfg = default_config();
    for (const kv_entry& e : parse_kv(in, source)) {
        const auto it = setters().find(e.key);
        if (it == setters().end()) {
            throw config_error(fmt::format("{}:{}: unknown key '{}'", source, e.line, e.key));
        }
        it->second(cfg, e.value, fmt::format("{}:{}: {}", source, e.line, e.key));
    }
    cfg.resonator.c1 = cfg.varactor.c_max;
    cfg.validate();
    return cfg;
}

run_config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error(fmt::format("cannot open config '{}'", path.string()));
    return parse_config(in, path.string());
}

std::string write_config(const run_config& c) {
    std::ostringstream o;
    o << "# ifatune run configuration\n\n";
    o << fmt::format("geometry.z0_ohm = {}\n", c.geometry.z0);
    o << fmt::format("geometry.theta_open_deg = {}\n", c.geometry.theta_open_ref / kDeg);
    o << fmt::format("geometry.theta_short_deg = {}\n", c.geometry.theta_short_ref / kDeg);
    o << fmt::format("geometry.f_ref_ghz = {}\n", c.geometry.f_ref / 1e9);
    o << fmt::format("geometry.z_end_ohm = {}\n", format_end_load(c.geometry.z_end));
    o << fmt::format("geometry.feed_fraction = {}\n\n", c.geometry.feed_fraction);
    o << fmt::format("resonator.l1_nh = {}\n", c.resonator.l1 / 1e-9);
    o << fmt::format("resonator.c2_pf = {}\n", c.resonator.c2 / 1e-12);
    o << fmt::format("resonator.r1_kohm = {}\n", c.resonator.r1 / 1e3);
    o << fmt::format("resonator.include_c2 = {}\n", c.resonator.include_c2_in_rf);
    o << fmt::format("resonator.include_r1 = {}\n\n", c.resonator.include_r1_in_rf);
    o << fmt::format("varactor.c_max_pf = {}\n", c.varactor.c_max / 1e-12);
    o << fmt::format("varactor.tuning_ratio = {}\n", c.varactor.tuning_ratio);
    o << fmt::format("varactor.v_max_v = {}\n", c.varactor.v_max);
    o << fmt::format("varactor.shape_exponent = {}\n\n", c.varactor.shape_exponent);
    o << fmt::format("sweep.f_start_ghz = {}\n", c.sweep.f_start / 1e9);
    o << fmt::format("sweep.f_stop_ghz = {}\n", c.sweep.f_stop / 1e9);
    o << fmt::format("sweep.n_points = {}\n\n", c.sweep.n_points);
    o << fmt::format("analysis.threshold_db = {}\n", c.sweep.threshold_db);
    o << fmt::format("analysis.z_ref_ohm = {}\n\n", c.sweep.z_ref);
    o << fmt::format("tune.voltages_v = {}\n\n", fmt::join(c.voltages, ", "));
    o << fmt::format("calibration.release_z0 = {}\n", c.release_z0);
    o << fmt::format("calibration.max_iterations = {}\n\n", c.calibration_max_iterations);
    if (!c.bandplan_file.empty()) o << fmt::format("bandplan.file = {}\n", c.bandplan_file);
    o << fmt::format("output.dir = {}\n", c.output_dir);
    return o.str();
}

}  // namespace ifatune
