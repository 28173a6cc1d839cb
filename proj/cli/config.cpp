#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hscli {

namespace {

constexpr const char* cache_format = "hs-geodesics-v1";

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("config key '" + key + "': bad number '" + v + "'");
    return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v)
{
    Int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::string join(const std::vector<double>& xs)
{
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_double(xs[i]);
    return out;
}

std::string cache_path(const std::string& dir, const std::string& key)
{
    return (std::filesystem::path(dir) / ("geodesics-" + hex64(fnv1a(key)) + ".csv")).string();
}

} // namespace

std::string format_double(double v)
{
    // shortest form that reads back to the same value
    char t[32];
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(t, sizeof t, "%.*g", prec, v);
        if (std::strtod(t, nullptr) == v) return t;
    }
    std::snprintf(t, sizeof t, "%.17g", v);
    return t;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double("list", trim(item)));
    return out;
}

void set_key(RunConfig& c, const std::string& key, const std::string& value)
{
    const std::string v = trim(value);
    if (key == "D") c.D = to_int<int>(key, v);
    else if (key == "x_max") c.x_max = to_double(key, v);
    else if (key == "elliptic_height") c.elliptic_height = to_int<long long>(key, v);
    else if (key == "form_height") c.form_height = to_int<long long>(key, v);
    else if (key == "height_per_root") c.height_per_root = to_double(key, v);
    else if (key == "mu_box") c.mu_box = to_int<int>(key, v);
    else if (key == "oracle_height") c.oracle_height = to_double(key, v);
    else if (key == "cross_check") c.cross_check = to_bool(key, v);
    else if (key == "cross_check_below") c.cross_check_below = to_double(key, v);
    else if (key == "trace_box_scale") c.trace_box_scale = to_double(key, v);
    else if (key == "trunc_norm") c.trunc_norm = to_double(key, v);
    else if (key == "trunc_k") c.trunc_k = to_int<int>(key, v);
    else if (key == "k_max") c.k_max = to_int<int>(key, v);
    else if (key == "heat_betas") c.heat_betas = parse_list(v);
    else if (key == "report_grid") c.report_grid = parse_list(v);
    else if (key == "format") c.format = v;
    else if (key == "output") c.output = v;
    else if (key == "cache_dir") c.cache_dir = v;
    else if (key == "seed") c.seed = to_int<unsigned>(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
        set_key(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c)
{
    std::ostringstream os;
    os << "D = " << c.D << "\n"
       << "x_max = " << format_double(c.x_max) << "\n"
       << "elliptic_height = " << c.elliptic_height << "\n"
       << "form_height = " << c.form_height << "\n"
       << "height_per_root = " << format_double(c.height_per_root) << "\n"
       << "mu_box = " << c.mu_box << "\n"
       << "oracle_height = " << format_double(c.oracle_height) << "\n"
       << "cross_check = " << (c.cross_check ? "true" : "false") << "\n"
       << "cross_check_below = " << format_double(c.cross_check_below) << "\n"
       << "trace_box_scale = " << format_double(c.trace_box_scale) << "\n"
       << "trunc_norm = " << format_double(c.trunc_norm) << "\n"
       << "trunc_k = " << c.trunc_k << "\n"
       << "k_max = " << c.k_max << "\n"
       << "heat_betas = " << join(c.heat_betas) << "\n"
       << "report_grid = " << join(c.report_grid) << "\n"
       << "format = " << c.format << "\n"
       << "output = " << c.output << "\n"
       << "cache_dir = " << c.cache_dir << "\n"
       << "seed = " << c.seed << "\n";
    return os.str();
}

void validate(const RunConfig& c)
{
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    need(c.x_max > 0, "x_max must be positive");
    need(c.elliptic_height >= 0, "elliptic_height must be nonnegative (0 takes the default)");
    need(c.form_height > 0 && c.height_per_root > 0 && c.mu_box > 0 && c.oracle_height > 0, "height caps must be positive");
    need(c.cross_check_below >= 0, "cross_check_below must be nonnegative");
    need(c.trace_box_scale >= 1, "trace_box_scale must be at least 1");
    need(c.trunc_norm >= 0, "trunc_norm must be nonnegative (0 takes x_max^2)");
    need(c.trunc_k > 0, "trunc_k must be positive");
    need(c.k_max >= 0, "k_max must be nonnegative");
    for (double b : c.heat_betas) need(b > 0, "heat_betas must be positive");
    for (double x : c.report_grid) need(x > 0, "report_grid must be positive");
    need(c.format.empty() || c.format == "csv" || c.format == "json", "format must be csv or json");
    need(c.output.find('\n') == std::string::npos && c.cache_dir.find('\n') == std::string::npos,
         "paths may not contain newlines");
}

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string cache_directory(const RunConfig& cfg)
{
    if (const char* env = std::getenv("HILBERT_SELBERG_CACHE"); env && *env) return env;
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/hilbert_selberg";
    if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/hilbert_selberg";
    return ".hilbert_selberg_cache";
}

std::string geodesic_cache_key(const RunConfig& c, double x)
{
    std::ostringstream os;
    os << cache_format << ";D=" << c.D << ";x=" << format_double(x) << ";form_height=" << c.form_height
       << ";height_per_root=" << format_double(c.height_per_root) << ";mu_box=" << c.mu_box
       << ";oracle_height=" << format_double(c.oracle_height) << ";cross_check=" << c.cross_check
       << ";cross_check_below=" << format_double(c.cross_check_below)
       << ";trace_box_scale=" << format_double(c.trace_box_scale);
    return os.str();
}

std::string cache_read(const std::string& dir, const std::string& key)
{
    std::ifstream f(cache_path(dir, key), std::ios::binary);
    if (!f) return "";
    std::string first;
    if (!std::getline(f, first) || first != "# " + key) return ""; // hash collision or older format
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void cache_write(const std::string& dir, const std::string& key, const std::string& payload)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return;
    const std::string path = cache_path(dir, key), tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) return;
        f << "# " << key << "\n" << payload;
        if (!f) return;
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

} // namespace hscli
