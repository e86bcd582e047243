#include "ifatune/kvfile.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <set>

#include <fmt/format.h>

namespace ifatune {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<kv_entry> parse_kv(std::istream& in, const std::string& source) {
    std::vector<kv_entry> entries;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        kv_entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (e.key.empty()) throw config_error(fmt::format("{}:{}: empty key", source, line_no));
        if (!seen.insert(e.key).second) {
            throw config_error(fmt::format("{}:{}: duplicate key '{}'", source, line_no, e.key));
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw config_error(fmt::format("{}: '{}' is not a finite number", what, text));
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw config_error(fmt::format("{}: '{}' is not a boolean", what, text));
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    if (trim(text).empty()) return values;
    for (const std::string& item : split(text, ',')) values.push_back(parse_number(item, what));
    return values;
}

}  // namespace ifatune
