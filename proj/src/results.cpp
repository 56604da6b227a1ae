#include "ftag/results.hpp"

#include "ftag/keyed_index.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ftag::harness {

std::uint64_t text_hash(const std::string& text)
{
    std::uint64_t s = keyed::absorb(0x54657874ULL, text.size());
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        word = (word << 8) | static_cast<unsigned char>(text[i]);
        if (i % 8 == 7) {
            s = keyed::absorb(s, word);
            word = 0;
        }
    }
    if (text.size() % 8)
        s = keyed::absorb(s, word);
    return keyed::mix64(s);
}

std::uint64_t Manifest::hash() const
{
    return text_hash(fmt::format("{}\n{}\n{}\n{}", experiment, config.to_text(), master_seed, code_version));
}

std::string Manifest::to_text() const
{
    std::string out;
    out += fmt::format("# experiment: {}\n", experiment);
    out += fmt::format("# manifest_hash: {:016x}\n", hash());
    out += fmt::format("# code_version: {}\n", code_version);
    out += fmt::format("# master_seed: {}\n", master_seed);
    out += fmt::format("# workers: {}\n", workers);
    out += fmt::format("# wall_seconds: {:.3f}\n", wall_seconds);
    out += config.to_text();
    return out;
}

std::vector<const ResultRow*> SweepResult::select(const std::string& metric, const ParamMap& match) const
{
    std::vector<const ResultRow*> out;
    for (const auto& r : rows) {
        if (r.metric != metric)
            continue;
        bool ok = true;
        for (const auto& [k, v] : match) {
            const auto it = r.params.find(k);
            if (it == r.params.end() || it->second != v) {
                ok = false;
                break;
            }
        }
        if (ok)
            out.push_back(&r);
    }
    return out;
}

const ResultRow* SweepResult::find(const std::string& metric, const ParamMap& match) const
{
    const auto rows_found = select(metric, match);
    return rows_found.empty() ? nullptr : rows_found.front();
}

std::string format_number(double v)
{
    return fmt::format("{}", v);
}

std::string format_params(const ParamMap& params)
{
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty())
            out += ';';
        out += k + "=" + v;
    }
    return out;
}

ParamMap parse_params(const std::string& text)
{
    ParamMap out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error("malformed parameter '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

std::string format_csv(const SweepResult& result)
{
    const auto& m = result.manifest;
    std::string out;
    out += fmt::format("# manifest_hash={:016x}\n", m.hash());
    out += fmt::format("# experiment={} master_seed={} code_version={}\n", m.experiment, m.master_seed,
                       m.code_version);
    out += csv_columns;
    out += '\n';
    for (const auto& r : result.rows)
        out += fmt::format("{},{},{},{},{},{}\n", r.experiment, format_params(r.params), r.metric,
                           format_number(r.value), format_number(r.stderr_value), r.trials);
    return out;
}

CsvFile parse_csv(const std::string& text)
{
    CsvFile f;
    std::stringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto pos = line.find("manifest_hash=");
            if (pos != std::string::npos)
                f.manifest_hash = std::stoull(line.substr(pos + 14), nullptr, 16);
            continue;
        }
        if (!header_seen) {
            if (line != csv_columns)
                throw Error("unexpected CSV column header: " + line);
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ','))
            cols.push_back(col);
        if (cols.size() != 6)
            throw Error("CSV row does not have 6 columns: " + line);
        ResultRow r;
        r.experiment = cols[0];
        r.params = parse_params(cols[1]);
        r.metric = cols[2];
        r.value = std::stod(cols[3]);
        r.stderr_value = std::stod(cols[4]);
        r.trials = std::stoull(cols[5]);
        f.experiment = r.experiment;
        f.rows.push_back(std::move(r));
    }
    if (!header_seen)
        throw Error("CSV has no column header");
    return f;
}

std::string write_result(const SweepResult& result, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
    const fs::path base = fs::path(dir) / result.manifest.experiment;
    const std::string csv_path = base.string() + ".csv";
    const std::string manifest_path = base.string() + ".manifest";
    for (const auto& [path, body] : {std::pair{csv_path, format_csv(result)},
                                     std::pair{manifest_path, result.manifest.to_text()}}) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << body;
        if (!out)
            throw std::runtime_error("failed writing '" + path + "'");
    }
    return csv_path;
}

std::string default_output_dir()
{
    const char* env = std::getenv("FTAG_OUTPUT_DIR");
    return env && *env ? std::string(env) : std::string("results");
}

} // namespace ftag::harness
