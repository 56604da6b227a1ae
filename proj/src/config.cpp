#include "ftag/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ftag::harness {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(fmt::format("'{}': expected a number, got '{}'", key, text));
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text)
{
    std::string t = trim(text);
    int base = 10;
    if (t.rfind("0x", 0) == 0) {
        t = t.substr(2);
        base = 16;
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(fmt::format("'{}': expected a nonnegative integer, got '{}'", key, text));
    return v;
}

} // namespace

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ':'))
            parts.push_back(part);
        if (parts.size() != 3)
            throw ConfigError(fmt::format("range '{}' must be start:stop:step", text));
        const double a = to_double("range", parts[0]);
        const double b = to_double("range", parts[1]);
        const double step = to_double("range", parts[2]);
        if (!(step > 0.0) || b < a)
            throw ConfigError(fmt::format("range '{}' needs step > 0 and stop >= start", text));
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (count > 100000)
            throw ConfigError(fmt::format("range '{}' has too many points", text));
        for (std::size_t i = 0; i < count; ++i) {
            // Rounded to 1e-9 so grid values print cleanly.
            const double v = a + static_cast<double>(i) * step;
            out.push_back(std::round(v * 1e9) / 1e9);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(to_double("list", item));
    if (out.empty())
        throw ConfigError(fmt::format("empty grid '{}'", text));
    return out;
}

Config Config::parse(std::istream& in, const std::string& source)
{
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(fmt::format("{}:{}: empty key", source, line_no));
        cfg.set(key, value);
    }
    return cfg;
}

Config Config::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value)
{
    values_[key] = value;
}

void Config::apply_override(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(fmt::format("override '{}' must be key=value", assignment));
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& Config::raw(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(fmt::format("missing configuration key '{}'", key));
    return it->second;
}

double Config::get_double(const std::string& key) const
{
    return to_double(key, raw(key));
}

std::size_t Config::get_size(const std::string& key) const
{
    return static_cast<std::size_t>(to_u64(key, raw(key)));
}

std::uint64_t Config::get_u64(const std::string& key) const
{
    return to_u64(key, raw(key));
}

bool Config::get_bool(const std::string& key) const
{
    const auto& v = raw(key);
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ConfigError(fmt::format("'{}': expected a boolean, got '{}'", key, v));
}

std::vector<double> Config::get_grid(const std::string& key) const
{
    try {
        return parse_grid(raw(key));
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("'{}': {}", key, e.what()));
    }
}

std::vector<std::size_t> Config::get_size_list(const std::string& key) const
{
    std::vector<std::size_t> out;
    for (double v : get_grid(key)) {
        if (v < 0.0 || v != std::floor(v))
            throw ConfigError(fmt::format("'{}': expected nonnegative integers", key));
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string Config::to_text() const
{
    std::string out;
    for (const auto& [k, v] : values_)
        out += fmt::format("{} = {}\n", k, v);
    return out;
}

} // namespace ftag::harness
