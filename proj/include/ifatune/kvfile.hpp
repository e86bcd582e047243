#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifatune {

/// Malformed or invalid configuration input.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct kv_entry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Reads `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; a key may appear only once.
std::vector<kv_entry> parse_kv(std::istream& in, const std::string& source);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

double parse_number(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
std::vector<double> parse_number_list(const std::string& text, const std::string& what);

}  // namespace ifatune
