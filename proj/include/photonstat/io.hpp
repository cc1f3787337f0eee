#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "photonstat/detection.hpp"
#include "photonstat/distribution.hpp"

namespace photonstat {

/// Thrown on malformed input files; carries the 1-based line number.
class io_error : public std::runtime_error {
public:
    io_error(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_number(line) {}
    std::size_t line_number;
};

namespace detail {

// Shortest decimal that round-trips to the exact double.
inline std::string format_exact(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& field, std::size_t line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw io_error("expected a number, got '" + field + "'", line);
    return value;
}

inline std::uint64_t parse_uint(const std::string& field, std::size_t line) {
    std::uint64_t value = 0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw io_error("expected a nonnegative integer, got '" + field + "'", line);
    return value;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

} // namespace detail

/// Write a distribution as `n,prob` rows in increasing n. Zero rows are
/// kept so the file is self-describing; values use the shortest decimal
/// form that round-trips exactly.
inline void write_distribution_csv(std::ostream& out, const PhotonNumberDistribution& dist) {
    out << "n,prob\n";
    for (std::size_t n = 0; n < dist.probs().size(); ++n)
        out << n << ',' << detail::format_exact(dist.probs()[n]) << '\n';
}

/// Read a `n,prob` file. Rows must be in strictly increasing n; omitted n
/// are zero. The tail bound is set to the missing mass and the usual type
/// invariants are enforced.
inline PhotonNumberDistribution read_distribution_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw io_error("empty distribution file");
    ++line_no;
    auto header = detail::split_fields(line);
    if (header.size() != 2 || header[0] != "n" || header[1] != "prob")
        throw io_error("expected header 'n,prob'", line_no);

    std::vector<double> probs;
    long long last_n = -1;
    double sum = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != 2)
            throw io_error("expected 2 fields", line_no);
        const auto n = detail::parse_uint(fields[0], line_no);
        const double p = detail::parse_double(fields[1], line_no);
        if (static_cast<long long>(n) <= last_n)
            throw io_error("photon numbers must be strictly increasing", line_no);
        if (n > default_max_cutoff)
            throw io_error("photon number exceeds cutoff limit", line_no);
        probs.resize(n + 1, 0.0);
        probs[n] = p;
        last_n = static_cast<long long>(n);
        sum += p;
    }
    if (probs.empty())
        throw io_error("distribution file has no rows");
    // Missing mass becomes the tail bound, capped at the largest tolerance a
    // constructor may be asked for; anything beyond that is a broken file.
    const double tail = std::max(0.0, 1.0 - sum);
    try {
        return PhotonNumberDistribution(std::move(probs), tail, 1e-9);
    } catch (const std::domain_error& e) {
        throw io_error(std::string("invalid distribution: ") + e.what());
    }
}

inline void write_distribution_csv(const std::string& path,
                                   const PhotonNumberDistribution& dist) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    write_distribution_csv(out, dist);
}

inline PhotonNumberDistribution read_distribution_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path + "'");
    return read_distribution_csv(in);
}

namespace detail {

inline nlohmann::ordered_json config_json(const SimulationConfig& config) {
    nlohmann::ordered_json j;
    j["shots"] = config.shots;
    j["seed"] = config.seed;
    j["efficiency"] = config.efficiency;
    j["split"] = config.split;
    j["bootstrap_resamples"] = config.bootstrap_resamples;
    return j;
}

inline SimulationConfig config_from_json(const nlohmann::json& j) {
    SimulationConfig config;
    config.shots = j.at("shots").get<std::uint64_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.efficiency = j.at("efficiency").get<double>();
    config.split = j.at("split").get<bool>();
    config.bootstrap_resamples = j.at("bootstrap_resamples").get<std::uint64_t>();
    return config;
}

} // namespace detail

/// Write a detection record as `shot,count` (or `shot,count_a,count_b`)
/// rows, preceded by a comment line echoing the generating config as JSON.
inline void write_samples_csv(std::ostream& out, const SampleSet& samples) {
    out << "# " << detail::config_json(samples.config).dump() << '\n';
    if (samples.is_split()) {
        out << "shot,count_a,count_b\n";
        for (std::size_t i = 0; i < samples.counts.size(); ++i)
            out << i << ',' << samples.counts[i] << ',' << samples.counts_b[i] << '\n';
    } else {
        out << "shot,count\n";
        for (std::size_t i = 0; i < samples.counts.size(); ++i)
            out << i << ',' << samples.counts[i] << '\n';
    }
}

inline SampleSet read_samples_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw io_error("expected a '# {config}' comment line", 1);
    ++line_no;
    SimulationConfig config;
    try {
        config = detail::config_from_json(nlohmann::json::parse(line.substr(2)));
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("bad config header: ") + e.what(), line_no);
    }

    if (!std::getline(in, line))
        throw io_error("missing column header", line_no + 1);
    ++line_no;
    auto header = detail::split_fields(line);
    bool split = false;
    if (header.size() == 3 && header[0] == "shot" && header[1] == "count_a" &&
        header[2] == "count_b")
        split = true;
    else if (!(header.size() == 2 && header[0] == "shot" && header[1] == "count"))
        throw io_error("expected header 'shot,count' or 'shot,count_a,count_b'", line_no);

    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> counts_b;
    std::uint64_t expected_shot = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != (split ? 3u : 2u))
            throw io_error("wrong number of fields", line_no);
        if (detail::parse_uint(fields[0], line_no) != expected_shot)
            throw io_error("shot indices must run 0,1,2,...", line_no);
        counts.push_back(static_cast<std::uint32_t>(detail::parse_uint(fields[1], line_no)));
        if (split)
            counts_b.push_back(
                static_cast<std::uint32_t>(detail::parse_uint(fields[2], line_no)));
        ++expected_shot;
    }
    if (counts.empty())
        throw io_error("sample file has no shots");
    try {
        return make_sample_set(config, std::move(counts), std::move(counts_b));
    } catch (const std::domain_error& e) {
        throw io_error(std::string("invalid sample set: ") + e.what());
    }
}

inline void write_samples_csv(const std::string& path, const SampleSet& samples) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    write_samples_csv(out, samples);
}

inline SampleSet read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path + "'");
    return read_samples_csv(in);
}

} // namespace photonstat
