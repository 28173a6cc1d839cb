#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "hilbert_selberg/hilbert_selberg.h"

namespace {

using hscli::ConfigError;
using hscli::RunConfig;

// Carries a library status out to main.
struct ApiError {
    hs_status status;
    std::string message;
};

void check(hs_status s)
{
    if (s != HS_OK) throw ApiError{s, hs_last_error()};
}

struct Text {
    char* p = nullptr;
    ~Text() { hs_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

using FieldPtr = std::unique_ptr<hs_field, decltype(&hs_field_free)>;
using ListPtr = std::unique_ptr<hs_geodesics, decltype(&hs_geodesics_free)>;

// Flags shared by every subcommand; config keys are applied after the file.
struct Common {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    bool no_cache = false;
    bool dump_config = false;
};

void add_key_option(CLI::App* sub, Common& c, const std::string& flag, const std::string& key, const std::string& help)
{
    sub->add_option_function<std::string>(flag, [&c, key](const std::string& v) { c.overrides.emplace_back(key, v); }, help);
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config_path, "key = value config file (see README)");
    sub->add_option_function<std::vector<std::string>>(
        "--set",
        [&c](const std::vector<std::string>& kvs) {
            for (const auto& kv : kvs) {
                size_t eq = kv.find('=');
                if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
                c.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
        },
        "override a config key, key=value (repeatable)");
    add_key_option(sub, c, "--D", "D", "fundamental discriminant of the field");
    add_key_option(sub, c, "--out", "format", "output format: csv or json");
    add_key_option(sub, c, "-o,--output", "output", "write to this file instead of stdout");
    add_key_option(sub, c, "--cache-dir", "cache_dir", "cache directory (HILBERT_SELBERG_CACHE wins)");
    sub->add_flag("--no-cache", c.no_cache, "neither read nor write cached geodesic lists");
    sub->add_flag("--dump-config", c.dump_config, "print the effective config and exit");
}

RunConfig resolve(const Common& c)
{
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : hscli::load_config(c.config_path);
    for (const auto& [k, v] : c.overrides) hscli::set_key(cfg, k, v);
    hscli::validate(cfg);
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.output.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw ConfigError("cannot write '" + cfg.output + "'");
}

std::string format_or(const RunConfig& cfg, const std::string& fallback)
{
    return cfg.format.empty() ? fallback : cfg.format;
}

void require_json(const RunConfig& cfg, const std::string& what)
{
    if (format_or(cfg, "json") != "json") throw ConfigError(what + " is only available as JSON");
}

// CSV from the library as a JSON array of row objects; numeric cells become numbers.
std::string csv_to_json(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line;
    auto cells = [](const std::string& l) {
        std::vector<std::string> out;
        std::stringstream ss(l);
        std::string c;
        while (std::getline(ss, c, ',')) out.push_back(c);
        return out;
    };
    auto next = [&] {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    nlohmann::json rows = nlohmann::json::array();
    if (!next()) return "[]\n";
    std::vector<std::string> header = cells(line);
    while (next()) {
        if (line.empty()) continue;
        std::vector<std::string> v = cells(line);
        nlohmann::json row = nlohmann::json::object();
        for (size_t i = 0; i < header.size() && i < v.size(); ++i) {
            double d = 0;
            auto [p, ec] = std::from_chars(v[i].data(), v[i].data() + v[i].size(), d);
            if (ec == std::errc() && p == v[i].data() + v[i].size())
                row[header[i]] = d;
            else
                row[header[i]] = v[i];
        }
        rows.push_back(row);
    }
    return nlohmann::json{{"columns", header}, {"rows", rows}}.dump(2) + "\n";
}

std::string tabular(const RunConfig& cfg, const std::string& csv)
{
    return format_or(cfg, "csv") == "json" ? csv_to_json(csv) : csv;
}

hs_search_options search_options(const RunConfig& cfg)
{
    hs_search_options o;
    hs_search_options_default(&o);
    o.form_height = cfg.form_height;
    o.height_per_root = cfg.height_per_root;
    o.mu_box = cfg.mu_box;
    o.oracle_height = cfg.oracle_height;
    o.cross_check = cfg.cross_check ? 1 : 0;
    o.cross_check_below = cfg.cross_check_below;
    o.trace_box_scale = cfg.trace_box_scale;
    return o;
}

FieldPtr open_field(const RunConfig& cfg)
{
    hs_field* f = nullptr;
    check(hs_field_create(cfg.D, cfg.elliptic_height, &f));
    return FieldPtr(f, hs_field_free);
}

// Geodesic list up to x, through the cache keyed by every input that shapes it.
ListPtr open_list(const RunConfig& cfg, const Common& c, const hs_field* field, double x)
{
    const std::string key = hscli::geodesic_cache_key(cfg, x);
    const std::string dir = hscli::cache_directory(cfg);
    hs_geodesics* list = nullptr;
    if (!c.no_cache) {
        std::string cached = hscli::cache_read(dir, key);
        if (!cached.empty() && hs_geodesics_from_csv(field, x, cached.c_str(), &list) == HS_OK)
            return ListPtr(list, hs_geodesics_free);
    }
    hs_search_options opt = search_options(cfg);
    check(hs_geodesics_create(field, x, &opt, &list));
    ListPtr out(list, hs_geodesics_free);
    if (!c.no_cache) {
        Text csv;
        check(hs_geodesics_csv(list, &csv.p));
        hscli::cache_write(dir, key, csv.str());
    }
    return out;
}

// Smallest x with x^2 >= X, so the class list covers the Euler truncation.
double x_for_norm(double X)
{
    double x = std::sqrt(X);
    while (x * x < X) x = std::nextafter(x, INFINITY);
    return x;
}

std::string print_checks(const RunConfig& cfg, const std::vector<int>& ids, bool timings, bool& all_pass)
{
    nlohmann::json results = nlohmann::json::array();
    std::ostringstream table;
    all_pass = true;
    for (int id : ids) {
        int pass = 0;
        Text out;
        check(hs_check_run(id, cfg.seed, &pass, &out.p));
        nlohmann::json r = nlohmann::json::parse(out.str());
        all_pass = all_pass && pass;
        if (!timings) r.erase("seconds");
        results.push_back(r);
        table << (pass ? "PASS" : "FAIL") << "  " << id << "  " << r["name"].get<std::string>();
        if (timings) table << "  (" << hscli::format_double(r["seconds"].get<double>()) << " s)";
        table << "  " << r["detail"].get<std::string>() << "\n";
    }
    if (format_or(cfg, "csv") == "json") return results.dump(2) + "\n";
    return table.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hselberg: zeta functions and trace formulas for Hilbert modular groups of real quadratic fields"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hs_version()));

    Common c;
    int m = 2;
    std::string s_text = "2", d_text, test, kind = "double", report_kind, ids_text;
    double h2 = 1;
    bool ruelle = false, timings = false;

    CLI::App* field = app.add_subcommand("field", "field constants, elliptic census and Euler characteristic (JSON)");
    add_common(field, c);
    add_key_option(field, c, "--height", "elliptic_height", "elliptic search height (0 = default)");

    CLI::App* pell = app.add_subcommand("pell", "Pell solution of one d (JSON) or the table up to --x (CSV)");
    add_common(pell, c);
    pell->add_option("--d", d_text, "discriminant a+b*w");
    add_key_option(pell, c, "--x", "x_max", "largest eps_d in the table");

    CLI::App* forms = app.add_subcommand("forms", "reduced-form class representatives of one d (JSON)");
    add_common(forms, c);
    forms->add_option("--d", d_text, "discriminant a+b*w")->required();

    CLI::App* geodesics = app.add_subcommand("geodesics", "primitive hyperbolic-elliptic classes with eps_d <= x (CSV)");
    add_common(geodesics, c);
    add_key_option(geodesics, c, "--x", "x_max", "largest eps_d");

    CLI::App* zeta = app.add_subcommand("zeta", "truncated Euler product Z(s; m) (JSON)");
    add_common(zeta, c);
    zeta->add_option("--m", m, "even weight");
    zeta->add_option("--s", s_text, "complex point, e.g. 2.0+0.5i");
    add_key_option(zeta, c, "--X", "trunc_norm", "norm truncation (0 = x^2)");
    add_key_option(zeta, c, "--K", "trunc_k", "factor truncation");
    add_key_option(zeta, c, "--x", "x_max", "largest eps_d of the class list");
    zeta->add_flag("--ruelle", ruelle, "Ruelle zeta by the ratio and the direct product instead");

    CLI::App* ledger = app.add_subcommand("ledger", "zeros and poles of the completed zeta (JSON)");
    add_common(ledger, c);
    ledger->add_option("--m", m, "even weight");
    add_key_option(ledger, c, "--kmax", "k_max", "last real point -k");

    CLI::App* trace = app.add_subcommand("trace", "geometric side of the trace formula (JSON)");
    add_common(trace, c);
    trace->add_option("--m", m, "even weight");
    trace->add_option("--test", test, "gaussian:beta=B or rational:s=S,beta1=B1,beta2=B2");
    trace->add_option("--kind", kind, "double (default) or difference")->check(CLI::IsMember({"double", "difference"}));
    trace->add_option("--h2", h2, "h2(i(m-1)/2) weight of the difference formula");
    add_key_option(trace, c, "--x", "x_max", "largest eps_d of the class list");
    CLI::App* trace_heat = trace->add_subcommand("heatfit", "heat-kernel fit (same as the heatfit command)");
    add_common(trace_heat, c);
    add_key_option(trace_heat, c, "--betas", "heat_betas", "comma-separated widths in (0, 0.2]");
    add_key_option(trace_heat, c, "--x", "x_max", "largest eps_d of the class list");

    CLI::App* heat = app.add_subcommand("heatfit", "fit a/beta + b/sqrt(beta) + c to the Gaussian geometric side (JSON)");
    add_common(heat, c);
    add_key_option(heat, c, "--betas", "heat_betas", "comma-separated widths in (0, 0.2]");
    add_key_option(heat, c, "--x", "x_max", "largest eps_d of the class list");

    CLI::App* report = app.add_subcommand("report", "prime geodesic and class-average counts (CSV)");
    add_common(report, c);
    report->add_option("kind", report_kind, "pgt or classavg")->required()->check(CLI::IsMember({"pgt", "classavg"}));
    add_key_option(report, c, "--grid", "report_grid", "comma-separated x values");
    add_key_option(report, c, "--x", "x_max", "largest eps_d of the class list");

    CLI::App* checks = app.add_subcommand("check", "acceptance suite as a pass/fail table");
    add_common(checks, c);
    checks->add_option("--ids", ids_text, "comma-separated criterion ids (default all)");
    add_key_option(checks, c, "--seed", "seed", "seed of the random property points");
    checks->add_flag("--timings", timings, "add wall-clock seconds (breaks byte-identical reruns)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return HS_VALIDATION;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return HS_VALIDATION;
    }

    try {
        RunConfig cfg = resolve(c);
        if (c.dump_config) {
            std::cout << hscli::serialize_config(cfg);
            return 0;
        }

        if (*field) {
            require_json(cfg, "field");
            FieldPtr F = open_field(cfg);
            Text out;
            check(hs_field_json(F.get(), &out.p));
            emit(cfg, out.str());
        } else if (*pell) {
            FieldPtr F = open_field(cfg);
            hs_search_options opt = search_options(cfg);
            Text out;
            if (!d_text.empty()) {
                require_json(cfg, "pell --d");
                check(hs_pell_json(F.get(), d_text.c_str(), &opt, &out.p));
                emit(cfg, out.str());
            } else {
                check(hs_pell_csv(F.get(), cfg.x_max, &opt, &out.p));
                emit(cfg, tabular(cfg, out.str()));
            }
        } else if (*forms) {
            require_json(cfg, "forms");
            FieldPtr F = open_field(cfg);
            hs_search_options opt = search_options(cfg);
            Text out;
            check(hs_forms_json(F.get(), d_text.c_str(), &opt, &out.p));
            emit(cfg, out.str());
        } else if (*geodesics) {
            FieldPtr F = open_field(cfg);
            ListPtr L = open_list(cfg, c, F.get(), cfg.x_max);
            Text out;
            check(hs_geodesics_csv(L.get(), &out.p));
            emit(cfg, tabular(cfg, out.str()));
        } else if (*zeta) {
            require_json(cfg, "zeta");
            double re = 0, im = 0;
            check(hs_parse_complex(s_text.c_str(), &re, &im));
            const double X = cfg.trunc_norm > 0 ? cfg.trunc_norm : cfg.x_max * cfg.x_max;
            FieldPtr F = open_field(cfg);
            ListPtr L = open_list(cfg, c, F.get(), std::max(cfg.x_max, x_for_norm(X)));
            Text out;
            if (ruelle)
                check(hs_ruelle_json(L.get(), re, im, X, cfg.trunc_k, &out.p));
            else
                check(hs_zeta_json(F.get(), L.get(), m, re, im, X, cfg.trunc_k, &out.p));
            emit(cfg, out.str());
        } else if (*ledger) {
            require_json(cfg, "ledger");
            FieldPtr F = open_field(cfg);
            Text out;
            check(hs_ledger_json(F.get(), m, cfg.k_max, &out.p));
            emit(cfg, out.str());
        } else if (*trace && !*trace_heat) {
            require_json(cfg, "trace");
            if (test.empty()) throw ConfigError("trace needs --test (or the heatfit subcommand)");
            FieldPtr F = open_field(cfg);
            ListPtr L = open_list(cfg, c, F.get(), cfg.x_max);
            Text out;
            check(hs_trace_json(F.get(), L.get(), kind.c_str(), m, test.c_str(), h2, &out.p));
            emit(cfg, out.str());
        } else if (*heat || *trace_heat) {
            require_json(cfg, "heatfit");
            FieldPtr F = open_field(cfg);
            ListPtr L = open_list(cfg, c, F.get(), cfg.x_max);
            Text out;
            check(hs_heatfit_json(F.get(), L.get(), cfg.heat_betas.data(), cfg.heat_betas.size(), &out.p));
            emit(cfg, out.str());
        } else if (*report) {
            double x = cfg.x_max;
            for (double g : cfg.report_grid) x = std::max(x, g);
            FieldPtr F = open_field(cfg);
            ListPtr L = open_list(cfg, c, F.get(), x);
            Text out;
            const std::string fmt = format_or(cfg, "csv");
            check(hs_report(L.get(), report_kind.c_str(), cfg.report_grid.data(), cfg.report_grid.size(), fmt.c_str(),
                            &out.p));
            emit(cfg, out.str());
        } else if (*checks) {
            std::vector<int> ids;
            if (ids_text.empty())
                for (int i = 1; i <= hs_check_count(); ++i) ids.push_back(i);
            else
                for (double v : hscli::parse_list(ids_text)) {
                    if (v != std::floor(v)) throw ConfigError("--ids takes integers");
                    ids.push_back(static_cast<int>(v));
                }
            bool all_pass = false;
            emit(cfg, print_checks(cfg, ids, timings, all_pass));
            return all_pass ? 0 : HS_INVARIANT;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return HS_VALIDATION;
    } catch (const ApiError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return HS_INVARIANT;
    }
}
