#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hscli {

// Raised for malformed config files and flag values; the CLI maps it to exit 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int D = 5;
    double x_max = 30;             // geodesic range, eps_d <= x_max
    long long elliptic_height = 0; // 0 takes the field default
    long long form_height = 30;
    double height_per_root = 1;
    int mu_box = 3;
    double oracle_height = 4;
    bool cross_check = true;
    double cross_check_below = 15;
    double trace_box_scale = 1;
    double trunc_norm = 0; // 0 takes x_max^2
    int trunc_k = 40;
    int k_max = 10;
    std::vector<double> heat_betas = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> report_grid = {5, 10, 15, 20, 25, 30};
    std::string format;    // csv or json; empty takes the command default
    std::string output;    // file path; empty writes to stdout
    std::string cache_dir; // empty takes the default location
    unsigned seed = 1;

    bool operator==(const RunConfig&) const = default;
};

// "key = value" lines; '#' starts a comment; unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Every key in a fixed order, doubles printed with 17 significant digits.
std::string serialize_config(const RunConfig& cfg);
// Throws ConfigError unless all bounds are positive and the format is known.
void validate(const RunConfig& cfg);
// Applies one "key=value" assignment, as in a config file line.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

std::vector<double> parse_list(const std::string& text);
std::string format_double(double v);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

// HILBERT_SELBERG_CACHE, then cfg.cache_dir, then $XDG_CACHE_HOME or ~/.cache.
std::string cache_directory(const RunConfig& cfg);

// Cache key of a geodesic list: every input that changes the list plus a format version.
std::string geodesic_cache_key(const RunConfig& cfg, double x);

// Cached text under the key, or empty when missing or written for another key.
std::string cache_read(const std::string& dir, const std::string& key);
// Writes atomically; failures to write are ignored (the cache is an optimisation).
void cache_write(const std::string& dir, const std::string& key, const std::string& payload);

} // namespace hscli
