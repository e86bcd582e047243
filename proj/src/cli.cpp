#include "ifatune/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ifatune/bandplan.hpp"
#include "ifatune/config.hpp"
#include "ifatune/io.hpp"
#include "ifatune/kvfile.hpp"
#include "ifatune/resosynth.hpp"

namespace ifatune::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct global_options {
    std::string config_path;
    bool json = false;
    std::string out_dir;
};

struct loaded {
    run_config cfg;
    fs::path out_dir;
};

loaded load(const global_options& g) {
    loaded l{g.config_path.empty() ? default_config() : load_config(g.config_path), {}};
    l.out_dir = g.out_dir.empty() ? fs::path(l.cfg.output_dir) : fs::path(g.out_dir);
    return l;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw io::io_error(fmt::format("cannot create output directory '{}'", dir.string()));
    }
}

std::string mhz(double hz) { return io::format_decimal(hz / 1e6); }

json bands_json(const bandplan::interval_set& set) {
    json arr = json::array();
    for (const auto& iv : set.intervals()) {
        arr.push_back({{"lo_hz", iv.lo}, {"hi_hz", iv.hi}, {"truncated", iv.truncated()}});
    }
    return arr;
}

std::string bands_text(const bandplan::interval_set& set) {
    if (set.empty()) return "none";
    std::string s;
    for (const auto& iv : set.intervals()) {
        if (!s.empty()) s += ", ";
        s += fmt::format("{}-{} MHz{}", mhz(iv.lo), mhz(iv.hi), iv.truncated() ? " (truncated)" : "");
    }
    return s;
}

// --- sweep ---------------------------------------------------------------

struct sweep_options {
    double bias = 0.0;
    std::string name = "sweep";
    bool touchstone = false;
    bool svg = false;
};

int cmd_sweep(const global_options& g, const sweep_options& o, std::ostream& out) {
    const loaded l = load(g);
    const auto net = l.cfg.resonator_at(o.bias);
    const auto& s = l.cfg.sweep;
    const auto profile = antmodel::sweep(l.cfg.geometry, net, s.f_start, s.f_stop, s.n_points, s.z_ref);
    const auto bands = bandplan::extract_bands(profile, s.threshold_db);
    const auto minima = antmodel::s11_minima(profile, s.threshold_db);

    std::vector<std::pair<fs::path, std::string>> files;
    {
        std::ostringstream csv;
        io::write_profile_csv(csv, profile);
        files.emplace_back(l.out_dir / (o.name + ".csv"), csv.str());
    }
    if (o.touchstone) {
        std::ostringstream s1p;
        io::write_touchstone(s1p, profile);
        files.emplace_back(l.out_dir / (o.name + ".s1p"), s1p.str());
    }
    if (o.svg) {
        std::ostringstream svg;
        io::write_svg(svg, profile, s.threshold_db,
                      fmt::format("S11 at {} V bias (C1 = {} pF)", io::format_decimal(o.bias, 4),
                                  io::format_decimal(net.c1 * 1e12, 4)));
        files.emplace_back(l.out_dir / (o.name + ".svg"), svg.str());
    }
    ensure_dir(l.out_dir);
    for (const auto& [path, content] : files) io::write_file(path, content);

    if (g.json) {
        json j;
        j["bias_v"] = o.bias;
        j["c1_f"] = net.c1;
        j["points"] = profile.size();
        j["threshold_db"] = s.threshold_db;
        json mins = json::array();
        for (auto i : minima) mins.push_back({{"freq_hz", profile.freqs[i]}, {"s11_db", profile.s11_db[i]}});
        j["minima"] = mins;
        j["bands"] = bands_json(bands);
        json paths = json::array();
        for (const auto& f : files) paths.push_back(f.first.string());
        j["files"] = paths;
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << fmt::format("bias {} V, C1 = {} pF, {} points\n", io::format_decimal(o.bias, 4),
                       io::format_decimal(net.c1 * 1e12), profile.size());
    out << fmt::format("S11 minima below {} dB:", io::format_decimal(s.threshold_db, 4));
    if (minima.empty()) out << " none";
    for (auto i : minima) {
        out << fmt::format(" {} MHz ({} dB)", mhz(profile.freqs[i]), io::format_decimal(profile.s11_db[i], 4));
    }
    out << '\n' << "bands: " << bands_text(bands) << '\n';
    for (const auto& f : files) out << "wrote " << f.first.string() << '\n';
    return kOk;
}

// --- synthesize ----------------------------------------------------------

struct synth_options {
    double f1 = 0.0;
    double f2 = 0.0;
    std::string mode = "auto";
};

int cmd_synthesize(const global_options& g, const synth_options& o, std::ostream& out, std::ostream& err) {
    if (!(o.f1 > 0.0) || !(o.f2 > o.f1)) {
        err << "usage: ifatune synthesize --f1 <Hz> --f2 <Hz> [--mode auto|closed_form|numeric]\n"
               "error: targets must satisfy 0 < f1 < f2\n";
        return kUsage;
    }
    resosynth::synthesis_method mode;
    try {
        mode = resosynth::parse_synthesis_method(o.mode);
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << '\n';
        return kUsage;
    }
    const loaded l = load(g);
    const auto r = resosynth::synthesize_lc(l.cfg.geometry, o.f1, o.f2, mode);
    if (g.json) {
        json j;
        j["f1_hz"] = o.f1;
        j["f2_hz"] = o.f2;
        j["l_nh"] = r.l * 1e9;
        j["c_pf"] = r.c * 1e12;
        j["method"] = std::string(resosynth::to_string(r.method));
        j["residual_f1_ohm"] = r.residual_f1;
        j["residual_f2_ohm"] = r.residual_f2;
        j["iterations"] = r.iterations;
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << fmt::format("targets: f1 = {} MHz, f2 = {} MHz\n", mhz(o.f1), mhz(o.f2));
    out << fmt::format("L = {} nH\n", io::format_decimal(r.l * 1e9));
    out << fmt::format("C = {} pF\n", io::format_decimal(r.c * 1e12));
    out << fmt::format("method = {}\n", resosynth::to_string(r.method));
    out << fmt::format("residual at f1 = {:.3e} ohm\n", r.residual_f1);
    out << fmt::format("residual at f2 = {:.3e} ohm\n", r.residual_f2);
    return kOk;
}

// --- tune ----------------------------------------------------------------

struct tune_options {
    std::string bands_from;
    std::string bandplan;
};

int cmd_tune(const global_options& g, const tune_options& o, std::ostream& out) {
    const loaded l = load(g);
    bandplan::band_plan plan = bandplan::builtin_bandplan();
    const std::string plan_file = o.bandplan.empty() ? l.cfg.bandplan_file : o.bandplan;
    if (!plan_file.empty()) plan = bandplan::load_bandplan(plan_file);

    bandplan::tuning_result result;
    if (!o.bands_from.empty()) {
        std::ifstream in(o.bands_from);
        if (!in) throw io::io_error(fmt::format("cannot open '{}'", o.bands_from));
        io::read_bands_csv(in, result.voltages, result.per_voltage);
        result.combined = bandplan::tuning_union(result.per_voltage);
        result.report = bandplan::coverage_report_for(result.combined, plan);
    } else {
        result = bandplan::tuning_sweep(l.cfg.geometry, l.cfg.resonator, l.cfg.varactor,
                                        l.cfg.voltages, l.cfg.sweep, plan);
    }

    std::ostringstream bands_csv, union_csv, coverage_csv;
    io::write_bands_csv(bands_csv, result.voltages, result.per_voltage);
    io::write_union_csv(union_csv, result.combined);
    io::write_coverage_csv(coverage_csv, result.report);
    const std::vector<std::pair<fs::path, std::string>> files = {
        {l.out_dir / "tune_bands.csv", bands_csv.str()},
        {l.out_dir / "tune_union.csv", union_csv.str()},
        {l.out_dir / "tune_coverage.csv", coverage_csv.str()},
    };
    ensure_dir(l.out_dir);
    for (const auto& [path, content] : files) io::write_file(path, content);

    if (g.json) {
        json j;
        j["source"] = o.bands_from.empty() ? "model" : "fixture";
        json per = json::array();
        for (std::size_t i = 0; i < result.voltages.size(); ++i) {
            json e{{"voltage_v", result.voltages[i]}, {"bands", bands_json(result.per_voltage[i])}};
            if (i < result.capacitances.size()) e["c1_f"] = result.capacitances[i];
            per.push_back(e);
        }
        j["per_voltage"] = per;
        j["union"] = bands_json(result.combined);
        json cov = json::array();
        for (const auto& s : result.report.systems) {
            json gaps = json::array();
            for (const auto& gp : s.uncovered) gaps.push_back({{"lo_hz", gp.lo}, {"hi_hz", gp.hi}});
            cov.push_back({{"system", s.name}, {"verdict", std::string(bandplan::to_string(s.status))},
                           {"uncovered", gaps}});
        }
        j["coverage"] = cov;
        j["overall"] = result.report.overall;
        out << j.dump(2) << '\n';
        return kOk;
    }
    for (std::size_t i = 0; i < result.voltages.size(); ++i) {
        out << fmt::format("{:>6} V: {}\n", io::format_decimal(result.voltages[i], 4),
                           bands_text(result.per_voltage[i]));
    }
    out << "union: " << bands_text(result.combined) << "\n\n";
    out << fmt::format("{:<10} {:<10} {}\n", "system", "verdict", "uncovered (MHz)");
    for (const auto& s : result.report.systems) {
        std::string gaps;
        for (const auto& gp : s.uncovered) {
            if (!gaps.empty()) gaps += ", ";
            gaps += fmt::format("{}-{}", mhz(gp.lo), mhz(gp.hi));
        }
        out << fmt::format("{:<10} {:<10} {}\n", s.name, bandplan::to_string(s.status), gaps);
    }
    out << "overall: " << (result.report.overall ? "all systems covered" : "not all systems covered") << '\n';
    for (const auto& f : files) out << "wrote " << f.first.string() << '\n';
    return kOk;
}

// --- calibrate -----------------------------------------------------------

struct calibrate_options {
    double f1 = 0.0;
    double f2 = 0.0;
    std::string write_path;
    bool release_z0 = false;
};

constexpr double kAcceptableObjective = 1e-4;

int cmd_calibrate(const global_options& g, const calibrate_options& o, std::ostream& out, std::ostream& err) {
    if (!(o.f1 > 0.0) || !(o.f2 > o.f1)) {
        err << "usage: ifatune calibrate --f1 <Hz> --f2 <Hz>\nerror: frequencies must be ascending\n";
        return kUsage;
    }
    loaded l = load(g);
    resosynth::calibration_options opts;
    opts.release_z0 = o.release_z0 || l.cfg.release_z0;
    opts.max_iterations = l.cfg.calibration_max_iterations;
    const auto r = resosynth::calibrate(l.cfg.geometry, l.cfg.resonator_at(0.0), o.f1, o.f2, opts);

    run_config fitted = l.cfg;
    fitted.geometry = r.geometry;
    const fs::path target = o.write_path.empty() ? l.out_dir / "calibrated.conf" : fs::path(o.write_path);
    if (target.has_parent_path()) ensure_dir(target.parent_path());
    io::write_file(target, write_config(fitted));

    const bool ok = r.objective < kAcceptableObjective;
    constexpr double kDeg = 180.0 / std::numbers::pi;
    if (g.json) {
        json j;
        j["objective"] = r.objective;
        j["initial_objective"] = r.initial_objective;
        j["iterations"] = r.iterations;
        j["converged"] = ok;
        j["theta_open_deg"] = r.geometry.theta_open_ref * kDeg;
        j["theta_short_deg"] = r.geometry.theta_short_ref * kDeg;
        j["z0_ohm"] = r.geometry.z0;
        j["feed_fraction"] = r.geometry.feed_fraction;
        j["predicted_hz"] = r.predicted;
        j["config"] = target.string();
        out << j.dump(2) << '\n';
    } else {
        out << fmt::format("targets: {} MHz, {} MHz\n", mhz(o.f1), mhz(o.f2));
        out << fmt::format("objective = {:.6e} (initial {:.6e}) after {} iterations\n", r.objective,
                           r.initial_objective, r.iterations);
        out << fmt::format("theta_open = {} deg, theta_short = {} deg at {} GHz, z0 = {} ohm\n",
                           io::format_decimal(r.geometry.theta_open_ref * kDeg),
                           io::format_decimal(r.geometry.theta_short_ref * kDeg),
                           io::format_decimal(r.geometry.f_ref / 1e9), io::format_decimal(r.geometry.z0));
        out << "predicted resonances:";
        for (double f : r.predicted) out << ' ' << mhz(f) << " MHz";
        out << "\nwrote " << target.string() << '\n';
    }
    if (!ok) {
        err << fmt::format("warning: calibration objective {:.3e} is above {:.0e}; best-found geometry written\n",
                           r.objective, kAcceptableObjective);
        return kNotCalibrated;
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tunable dual-band IFA modeling, synthesis and band-coverage tool", "ifatune"};
    app.fallthrough();
    app.require_subcommand(1);
    global_options g;
    app.add_option("--config", g.config_path, "Run configuration file");
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--out", g.out_dir, "Output directory (overrides output.dir)");

    sweep_options so;
    auto* sweep = app.add_subcommand("sweep", "Return-loss sweep at one bias voltage");
    sweep->add_option("--bias", so.bias, "DC bias voltage (V)");
    sweep->add_option("--name", so.name, "Output file stem");
    sweep->add_flag("--s1p", so.touchstone, "Also write a Touchstone .s1p file");
    sweep->add_flag("--svg", so.svg, "Also write an SVG plot");

    synth_options yo;
    auto* synth = app.add_subcommand("synthesize", "Solve L1 and C1 for two resonance targets");
    synth->add_option("--f1", yo.f1, "Lower target (Hz)")->required();
    synth->add_option("--f2", yo.f2, "Upper target (Hz)")->required();
    synth->add_option("--mode", yo.mode, "auto, closed_form or numeric");

    tune_options to;
    auto* tune = app.add_subcommand("tune", "Bands over the bias voltages and system coverage");
    tune->add_option("--bands-from", to.bands_from, "Per-voltage band CSV to use instead of the model");
    tune->add_option("--bandplan", to.bandplan, "Band plan file overriding the built-in table");

    calibrate_options co;
    auto* cal = app.add_subcommand("calibrate", "Fit the arm's electrical lengths to two measured resonances");
    cal->add_option("--f1", co.f1, "Lower measured resonance (Hz)")->required();
    cal->add_option("--f2", co.f2, "Upper measured resonance (Hz)")->required();
    cal->add_option("--write", co.write_path, "Path for the fitted config (default <out>/calibrated.conf)");
    cal->add_flag("--release-z0", co.release_z0, "Also fit the line impedance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    try {
        if (*sweep) return cmd_sweep(g, so, out);
        if (*synth) return cmd_synthesize(g, yo, out, err);
        if (*tune) return cmd_tune(g, to, out);
        if (*cal) return cmd_calibrate(g, co, out, err);
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const io::io_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const resosynth::infeasible_target_error& e) {
        err << fmt::format("infeasible target at {} MHz: {}\n", mhz(e.frequency()), e.what());
        return kInfeasible;
    } catch (const resosynth::convergence_error& e) {
        err << "synthesis failed: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace ifatune::cli
