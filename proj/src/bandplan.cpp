#include "ifatune/bandplan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "ifatune/kvfile.hpp"

namespace ifatune::bandplan {

interval_set::interval_set(std::vector<frequency_interval> intervals) {
    for (const auto& iv : intervals) {
        if (!(iv.lo < iv.hi)) {
            throw std::domain_error(fmt::format("interval [{}, {}] is empty", iv.lo, iv.hi));
        }
    }
    std::sort(intervals.begin(), intervals.end(), [](const auto& a, const auto& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    for (const auto& iv : intervals) {
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
            frequency_interval& last = intervals_.back();
            if (iv.lo == last.lo) last.truncated_lo = last.truncated_lo || iv.truncated_lo;
            if (iv.hi > last.hi) {
                last.hi = iv.hi;
                last.truncated_hi = iv.truncated_hi;
            } else if (iv.hi == last.hi) {
                last.truncated_hi = last.truncated_hi || iv.truncated_hi;
            }
        } else {
            intervals_.push_back(iv);
        }
    }
}

bool interval_set::contains(double lo, double hi) const {
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [&](const auto& iv) { return iv.lo <= lo && hi <= iv.hi; });
}

std::vector<frequency_interval> interval_set::uncovered(double lo, double hi) const {
    std::vector<frequency_interval> gaps;
    double cursor = lo;
    for (const auto& iv : intervals_) {
        if (iv.hi < cursor) continue;
        if (iv.lo >= hi) break;
        if (iv.lo > cursor) gaps.push_back({cursor, iv.lo});
        cursor = std::max(cursor, iv.hi);
        if (cursor >= hi) break;
    }
    if (cursor < hi) gaps.push_back({cursor, hi});
    return gaps;
}

void band_plan::validate() const {
    std::set<std::string> names;
    for (const auto& s : systems) {
        if (s.name.empty()) throw std::domain_error("band plan system with empty name");
        if (!names.insert(s.name).second) {
            throw std::domain_error(fmt::format("duplicate band plan system '{}'", s.name));
        }
        if (s.intervals.empty()) {
            throw std::domain_error(fmt::format("system '{}' has no intervals", s.name));
        }
        for (const auto& iv : s.intervals) {
            if (!(iv.lo < iv.hi)) {
                throw std::domain_error(fmt::format("system '{}' has an empty interval", s.name));
            }
        }
    }
}

const band_system* band_plan::find(std::string_view name) const {
    for (const auto& s : systems) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

band_plan builtin_bandplan() {
    auto mhz = [](double lo, double hi) { return frequency_interval{lo * 1e6, hi * 1e6}; };
    band_plan plan;
    plan.systems = {
        {"GSM-850", {mhz(824, 849), mhz(869, 894)}},
        {"GSM-900", {mhz(890, 915), mhz(935, 960)}},
        // L1 C/A: 1575.42 MHz +/- 1.023 MHz
        {"GPS", {{1574397000.0, 1576443000.0}}},
        {"DCS", {mhz(1710, 1785), mhz(1805, 1880)}},
        {"PCS", {mhz(1850, 1910), mhz(1930, 1990)}},
        {"UMTS", {mhz(1900, 1980), mhz(2010, 2025), mhz(2110, 2170)}},
    };
    return plan;
}

band_plan parse_bandplan(std::istream& in, const std::string& source) {
    band_plan plan;
    for (const kv_entry& e : parse_kv(in, source)) {
        band_system sys{e.key, {}};
        const std::string where = fmt::format("{}:{}", source, e.line);
        for (const std::string& pair : split(e.value, ',')) {
            const auto ends = split(pair, '-');
            if (ends.size() != 2) {
                throw config_error(fmt::format("{}: expected 'lo-hi' in MHz, got '{}'", where, pair));
            }
            // band edges are whole hertz
            const double lo = std::round(parse_number(ends[0], where) * 1e6);
            const double hi = std::round(parse_number(ends[1], where) * 1e6);
            sys.intervals.push_back({lo, hi});
        }
        plan.systems.push_back(std::move(sys));
    }
    try {
        plan.validate();
    } catch (const std::domain_error& ex) {
        throw config_error(fmt::format("{}: {}", source, ex.what()));
    }
    return plan;
}

band_plan load_bandplan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error(fmt::format("cannot open band plan '{}'", path.string()));
    return parse_bandplan(in, path.string());
}

interval_set extract_bands(const antmodel::frequency_profile& profile, double threshold_db) {
    const auto& f = profile.freqs;
    const auto& s = profile.s11_db;
    const std::size_t n = f.size();
    auto crossing = [&](std::size_t a, std::size_t b) {
        return f[a] + (threshold_db - s[a]) * (f[b] - f[a]) / (s[b] - s[a]);
    };
    std::vector<frequency_interval> bands;
    std::size_t i = 0;
    while (i < n) {
        if (!(s[i] <= threshold_db)) {
            ++i;
            continue;
        }
        std::size_t k = i;
        while (k + 1 < n && s[k + 1] <= threshold_db) ++k;
        frequency_interval iv;
        iv.truncated_lo = i == 0;
        iv.truncated_hi = k == n - 1;
        iv.lo = iv.truncated_lo ? f[0] : crossing(i - 1, i);
        iv.hi = iv.truncated_hi ? f[n - 1] : crossing(k, k + 1);
        if (iv.lo < iv.hi) bands.push_back(iv);
        i = k + 1;
    }
    return interval_set(std::move(bands));
}

interval_set tuning_union(std::span<const interval_set> band_sets) {
    std::vector<frequency_interval> all;
    for (const auto& set : band_sets) {
        all.insert(all.end(), set.intervals().begin(), set.intervals().end());
    }
    return interval_set(std::move(all));
}

std::string_view to_string(verdict v) {
    switch (v) {
        case verdict::covered: return "covered";
        case verdict::partial: return "partial";
        case verdict::uncovered: return "uncovered";
    }
    return "?";
}

coverage_report coverage_report_for(const interval_set& covered, const band_plan& plan) {
    coverage_report report;
    report.overall = true;
    for (const auto& sys : plan.systems) {
        system_coverage sc{sys.name, verdict::covered, {}};
        double total = 0.0;
        double missing = 0.0;
        for (const auto& iv : sys.intervals) {
            total += iv.hi - iv.lo;
            for (const auto& gap : covered.uncovered(iv.lo, iv.hi)) {
                missing += gap.hi - gap.lo;
                sc.uncovered.push_back(gap);
            }
        }
        if (sc.uncovered.empty()) {
            sc.status = verdict::covered;
        } else if (missing >= total) {
            sc.status = verdict::uncovered;
        } else {
            sc.status = verdict::partial;
        }
        report.overall = report.overall && sc.status == verdict::covered;
        report.systems.push_back(std::move(sc));
    }
    return report;
}

namespace {

void check_tuning_inputs(const antmodel::antenna_geometry& geom,
                         const rfcore::resonator_network& net, const rfcore::varactor_model& varactor,
                         std::span<const double> voltages, const sweep_settings& settings) {
    geom.validate();
    net.validate();
    varactor.validate();
    if (voltages.empty()) throw std::domain_error("tuning sweep needs at least one voltage");
    antmodel::linear_grid(settings.f_start, settings.f_stop, settings.n_points);
    if (!(settings.threshold_db < 0.0)) throw std::domain_error("threshold_db must be negative");
}

interval_set bands_at(const antmodel::antenna_geometry& geom, rfcore::resonator_network net,
                      double capacitance, const sweep_settings& settings) {
    net.c1 = capacitance;
    const auto profile = antmodel::sweep_serial(geom, net, settings.f_start, settings.f_stop,
                                                settings.n_points, settings.z_ref);
    return extract_bands(profile, settings.threshold_db);
}

tuning_result finish(std::span<const double> voltages, std::vector<double> caps,
                     std::vector<interval_set> sets, const band_plan& plan) {
    tuning_result r;
    r.voltages.assign(voltages.begin(), voltages.end());
    r.capacitances = std::move(caps);
    r.per_voltage = std::move(sets);
    r.combined = tuning_union(r.per_voltage);
    r.report = coverage_report_for(r.combined, plan);
    return r;
}

}  // namespace

tuning_result tuning_sweep(const antmodel::antenna_geometry& geom,
                           const rfcore::resonator_network& net_template,
                           const rfcore::varactor_model& varactor, std::span<const double> voltages,
                           const sweep_settings& settings, const band_plan& plan) {
    check_tuning_inputs(geom, net_template, varactor, voltages, settings);
    const std::size_t n = voltages.size();
    std::vector<double> caps(n);
    for (std::size_t i = 0; i < n; ++i) caps[i] = rfcore::varactor_capacitance(varactor, voltages[i]);
    std::vector<interval_set> sets(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        sets[idx] = bands_at(geom, net_template, caps[idx], settings);
    }
    return finish(voltages, std::move(caps), std::move(sets), plan);
}

tuning_result tuning_sweep_serial(const antmodel::antenna_geometry& geom,
                                  const rfcore::resonator_network& net_template,
                                  const rfcore::varactor_model& varactor,
                                  std::span<const double> voltages, const sweep_settings& settings,
                                  const band_plan& plan) {
    check_tuning_inputs(geom, net_template, varactor, voltages, settings);
    std::vector<double> caps;
    std::vector<interval_set> sets;
    for (double v : voltages) {
        caps.push_back(rfcore::varactor_capacitance(varactor, v));
        sets.push_back(bands_at(geom, net_template, caps.back(), settings));
    }
    return finish(voltages, std::move(caps), std::move(sets), plan);
}

}  // namespace ifatune::bandplan
