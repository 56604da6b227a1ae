#pragma once

#include "ftag/bitvec.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace ftag::harness {

/// Malformed or inconsistent configuration (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Flat "key = value" configuration. '#' starts a comment; later keys override earlier ones.
class Config {
public:
    Config() = default;

    static Config parse(std::istream& in, const std::string& source = "<input>");
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    /// "key=value" as given on the command line.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& raw(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return values_; }

    std::string get_string(const std::string& key) const { return raw(key); }
    double get_double(const std::string& key) const;
    std::size_t get_size(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    /// "a,b,c" or an inclusive range "start:stop:step".
    std::vector<double> get_grid(const std::string& key) const;
    std::vector<std::size_t> get_size_list(const std::string& key) const;

    /// Serialized as sorted "key = value" lines; parse() reads it back.
    std::string to_text() const;

private:
    std::map<std::string, std::string> values_;
};

std::vector<double> parse_grid(const std::string& text);

} // namespace ftag::harness
