#pragma once

#include "ftag/config.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ftag::harness {

using ParamMap = std::map<std::string, std::string>;

struct ResultRow {
    std::string experiment;
    ParamMap params;
    std::string metric;
    double value = 0.0;
    double stderr_value = 0.0;
    std::size_t trials = 0;
};

struct Manifest {
    std::string experiment;
    /// Effective configuration with every default filled in; a valid config file on its own.
    Config config;
    std::uint64_t master_seed = 0;
    std::string code_version;
    std::size_t workers = 1;
    double wall_seconds = 0.0;

    /// Hash over experiment, configuration, seed and code version (not timing or workers).
    std::uint64_t hash() const;
    std::string to_text() const;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    Manifest manifest;

    /// First row whose metric matches and whose params include every given pair.
    const ResultRow* find(const std::string& metric, const ParamMap& match = {}) const;
    std::vector<const ResultRow*> select(const std::string& metric, const ParamMap& match = {}) const;
};

/// 64-bit hash of a string through the SplitMix64 absorb chain.
std::uint64_t text_hash(const std::string& text);

/// Shortest round-trip decimal form used for every number written out.
std::string format_number(double v);

/// "k1=v1;k2=v2" in key order.
std::string format_params(const ParamMap& params);
ParamMap parse_params(const std::string& text);

inline constexpr const char* csv_columns = "experiment,params,metric,value,stderr,trials";

/// Header comments, column line, then one line per row in the given order.
std::string format_csv(const SweepResult& result);

struct CsvFile {
    std::uint64_t manifest_hash = 0;
    std::string experiment;
    std::vector<ResultRow> rows;
};

CsvFile parse_csv(const std::string& text);

/// Writes <experiment>.csv and <experiment>.manifest into dir (created if needed). Returns the CSV path.
std::string write_result(const SweepResult& result, const std::string& dir);

/// FTAG_OUTPUT_DIR if set, otherwise "results".
std::string default_output_dir();

} // namespace ftag::harness
