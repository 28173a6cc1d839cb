#include "hilbert_selberg/hilbert_selberg.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "checks.hpp"
#include "error.hpp"
#include "field.hpp"
#include "geodesics.hpp"
#include "pellforms.hpp"
#include "traceform.hpp"
#include "zetafun.hpp"

struct hs_field {
    hs::Field F;
};

struct hs_geodesics {
    hs::GeodesicList list;
    int D = 0;
};

namespace {

thread_local std::string last_error;

hs_status fail(hs_status s, const std::string& msg)
{
    last_error = msg;
    return s;
}

template <class F>
hs_status guard(F&& body)
{
    try {
        body();
        last_error.clear();
        return HS_OK;
    } catch (const hs::Error& e) {
        return fail(static_cast<hs_status>(e.status()), e.what());
    } catch (const std::invalid_argument& e) {
        return fail(HS_VALIDATION, std::string("invalid argument: ") + e.what());
    } catch (const std::out_of_range& e) {
        return fail(HS_VALIDATION, std::string("out of range: ") + e.what());
    } catch (const std::bad_alloc&) {
        return fail(HS_BUDGET, "out of memory");
    } catch (const std::exception& e) {
        return fail(HS_INVARIANT, e.what());
    }
}

void need(const void* p, const char* what)
{
    if (!p) hs::fail_validation(std::string("null ") + what);
}

char* dup(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json cjson(hs::cplx z) { return nlohmann::json::array({z.real() + 0.0, z.imag() + 0.0}); }

hs::GeodesicOptions to_options(const hs_search_options* o)
{
    hs::GeodesicOptions g;
    if (!o) return g;
    if (o->form_height <= 0 || o->height_per_root <= 0 || o->mu_box <= 0 || o->oracle_height <= 0 ||
        o->cross_check_below < 0 || o->trace_box_scale < 1)
        hs::fail_validation("search options must be positive and trace_box_scale >= 1");
    g.class_numbers.form_height = o->form_height;
    g.class_numbers.height_per_root = o->height_per_root;
    g.class_numbers.mu_box = o->mu_box;
    g.class_numbers.oracle_height = o->oracle_height;
    g.class_numbers.cross_check = o->cross_check != 0;
    g.cross_check_below = o->cross_check_below;
    g.trace_box_scale = o->trace_box_scale;
    return g;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json record_json(const hs::DiscriminantRecord& rec)
{
    nlohmann::json j;
    j["d"] = rec.d.str();
    j["t0"] = rec.pell.t0.str();
    j["u0"] = rec.pell.u0.str();
    j["eps_d"] = rec.pell.eps_d;
    j["h"] = rec.class_number;
    if (rec.oracle_class_number >= 0) j["oracle_h"] = rec.oracle_class_number;
    return j;
}

hs::DiscriminantRecord record_for(const hs_field* field, const char* d, const hs_search_options* opt, bool cross_check)
{
    need(field, "field");
    need(d, "discriminant");
    hs::GeodesicOptions g = to_options(opt);
    g.class_numbers.cross_check = g.class_numbers.cross_check && cross_check;
    return hs::class_number(field->F, hs::parse_quadint(d, field->F.D), g.class_numbers);
}

hs::EulerData euler_for(const hs_geodesics* list, double trunc_norm)
{
    need(list, "geodesic list");
    return hs::euler_data(list->list, trunc_norm > 0 ? trunc_norm : 0);
}

} // namespace

extern "C" {

const char* hs_last_error(void) { return last_error.c_str(); }

void hs_string_free(char* s) { std::free(s); }

const char* hs_version(void) { return "1.0.0"; }

hs_status hs_parse_complex(const char* text, double* re, double* im)
{
    return guard([&] {
        need(text, "text");
        need(re, "output");
        need(im, "output");
        hs::cplx z = hs::parse_complex(text);
        *re = z.real();
        *im = z.imag();
    });
}

hs_status hs_field_create(int D, long long elliptic_height, hs_field** out)
{
    return guard([&] {
        need(out, "output");
        *out = new hs_field{hs::make_field(D, elliptic_height > 0 ? elliptic_height : 0)};
    });
}

void hs_field_free(hs_field* field) { delete field; }

hs_status hs_field_json(const hs_field* field, char** out)
{
    return guard([&] {
        need(field, "field");
        need(out, "output");
        *out = dup(json_text(field->F.to_json()));
    });
}

hs_status hs_field_default_height(int D, long long* out)
{
    return guard([&] {
        need(out, "output");
        *out = hs::default_elliptic_height(D);
    });
}

void hs_search_options_default(hs_search_options* opt)
{
    if (!opt) return;
    hs::GeodesicOptions g;
    opt->form_height = g.class_numbers.form_height;
    opt->height_per_root = g.class_numbers.height_per_root;
    opt->mu_box = g.class_numbers.mu_box;
    opt->oracle_height = g.class_numbers.oracle_height;
    opt->cross_check = g.class_numbers.cross_check ? 1 : 0;
    opt->cross_check_below = g.cross_check_below;
    opt->trace_box_scale = g.trace_box_scale;
}

hs_status hs_pell_json(const hs_field* field, const char* d, const hs_search_options* opt, char** out)
{
    return guard([&] {
        need(out, "output");
        hs::DiscriminantRecord rec = record_for(field, d, opt, true);
        nlohmann::json j = record_json(rec);
        j["input"] = hs::parse_quadint(d, field->F.D).str();
        j["canonical"] = hs::canonical_discriminant(field->F, rec.d).str();
        *out = dup(json_text(j));
    });
}

hs_status hs_pell_csv(const hs_field* field, double x, const hs_search_options* opt, char** out)
{
    return guard([&] {
        need(field, "field");
        need(out, "output");
        if (!(x > 0)) hs::fail_validation("x must be positive");
        hs::GeodesicOptions g = to_options(opt);
        std::string text = hs::pell_csv_header(field->F.D) + "\r\n";
        for (const auto& [d, p] : hs::discriminants_up_to(field->F, x, g.trace_box_scale)) {
            hs::ClassNumberOptions cn = g.class_numbers;
            cn.cross_check = cn.cross_check && p.eps_d <= g.cross_check_below;
            text += hs::pell_csv_row(hs::class_number(field->F, d, p, cn)) + "\r\n";
        }
        *out = dup(text);
    });
}

hs_status hs_forms_json(const hs_field* field, const char* d, const hs_search_options* opt, char** out)
{
    return guard([&] {
        need(out, "output");
        hs::DiscriminantRecord rec = record_for(field, d, opt, true);
        nlohmann::json j = record_json(rec);
        nlohmann::json forms = nlohmann::json::array();
        for (const hs::Form& Q : rec.forms) {
            hs::GroupElem g = hs::form_to_matrix(Q, rec.pell);
            forms.push_back({{"a", Q.a.str()},
                             {"b", Q.b.str()},
                             {"c", Q.c.str()},
                             {"matrix", {g.a.str(), g.b.str(), g.c.str(), g.d.str()}}});
        }
        j["forms"] = forms;
        *out = dup(json_text(j));
    });
}

hs_status hs_geodesics_create(const hs_field* field, double x, const hs_search_options* opt, hs_geodesics** out)
{
    return guard([&] {
        need(field, "field");
        need(out, "output");
        if (!(x > 0)) hs::fail_validation("x must be positive");
        *out = new hs_geodesics{hs::enumerate_geodesics(field->F, x, to_options(opt)), field->F.D};
    });
}

hs_status hs_geodesics_from_csv(const hs_field* field, double x, const char* csv, hs_geodesics** out)
{
    return guard([&] {
        need(field, "field");
        need(csv, "CSV text");
        need(out, "output");
        *out = new hs_geodesics{hs::geodesics_from_csv(field->F, x, csv), field->F.D};
    });
}

void hs_geodesics_free(hs_geodesics* list) { delete list; }

hs_status hs_geodesics_csv(const hs_geodesics* list, char** out)
{
    return guard([&] {
        need(list, "geodesic list");
        need(out, "output");
        std::string text = hs::geodesic_csv_header(list->D) + "\r\n";
        for (const auto& c : list->list.classes) text += hs::geodesic_csv_row(c) + "\r\n";
        *out = dup(text);
    });
}

hs_status hs_geodesics_size(const hs_geodesics* list, size_t* classes, long long* total_multiplicity)
{
    return guard([&] {
        need(list, "geodesic list");
        if (classes) *classes = list->list.classes.size();
        if (total_multiplicity) *total_multiplicity = list->list.total_multiplicity();
    });
}

hs_status hs_zeta_json(const hs_field* field, const hs_geodesics* list, int m, double s_re, double s_im, double trunc_norm,
                       int trunc_k, char** out)
{
    return guard([&] {
        need(field, "field");
        need(out, "output");
        if (trunc_k <= 0) hs::fail_validation("K must be positive");
        hs::EulerData data = euler_for(list, trunc_norm);
        hs::ZetaParams p{hs::cplx(s_re, s_im), m, data.trunc_norm, trunc_k};
        hs::ZetaValue v = hs::selberg_zeta(p, data);
        nlohmann::json j;
        j["D"] = field->F.D;
        j["m"] = m;
        j["s"] = cjson(p.s);
        j["X"] = p.trunc_norm;
        j["K"] = p.trunc_k;
        j["value"] = cjson(v.value);
        j["log_value"] = cjson(v.log_value);
        j["log_derivative"] = cjson(hs::selberg_log_deriv(p, data));
        j["tail_bound"] = v.tail_bound;
        *out = dup(json_text(j));
    });
}

hs_status hs_ruelle_json(const hs_geodesics* list, double s_re, double s_im, double trunc_norm, int trunc_k, char** out)
{
    return guard([&] {
        need(out, "output");
        if (trunc_k <= 0) hs::fail_validation("K must be positive");
        hs::EulerData data = euler_for(list, trunc_norm);
        hs::RuelleValue r = hs::ruelle(hs::cplx(s_re, s_im), data, data.trunc_norm, trunc_k);
        nlohmann::json j;
        j["s"] = cjson(hs::cplx(s_re, s_im));
        j["X"] = data.trunc_norm;
        j["K"] = trunc_k;
        j["ratio"] = cjson(r.ratio);
        j["direct"] = cjson(r.direct);
        j["tail_bound"] = r.tail_bound;
        *out = dup(json_text(j));
    });
}

hs_status hs_ledger_json(const hs_field* field, int m, int k_max, char** out)
{
    return guard([&] {
        need(field, "field");
        need(out, "output");
        if (k_max < 0) hs::fail_validation("k_max must be nonnegative");
        nlohmann::json j = hs::divisor_ledger(m, field->F, k_max).to_json();
        j["D"] = field->F.D;
        hs::RuelleLeading lead = hs::ruelle_leading(field->F);
        j["ruelle_leading"] = {{"n0", lead.n0},
                               {"euler_char", lead.euler_char},
                               {"nu_product", hs::rational_str(lead.nu_product)},
                               {"abs_leading", lead.abs_leading}};
        *out = dup(json_text(j));
    });
}

hs_status hs_trace_json(const hs_field* field, const hs_geodesics* list, const char* kind, int m, const char* test,
                        double h2_weight, char** out)
{
    return guard([&] {
        need(field, "field");
        need(kind, "kind");
        need(test, "test function");
        need(out, "output");
        hs::EulerData data = euler_for(list, 0);
        hs::TestFunctionPair tf = hs::parse_testfunction(test);
        std::string k = kind;
        hs::GeomSideBreakdown b;
        if (k == "double")
            b = hs::geom_side_double_difference(m, tf, field->F, data);
        else if (k == "difference")
            b = hs::geom_side_difference(m, tf, field->F, data, h2_weight);
        else
            hs::fail_validation("trace kind must be 'double' or 'difference'");
        nlohmann::json j = b.to_json();
        j["D"] = field->F.D;
        j["m"] = m;
        j["kind"] = k;
        j["test"] = tf.describe();
        j["X"] = data.trunc_norm;
        if (tf.kind == hs::TestFunctionPair::Kind::rational && k == "double")
            j["closed_form"] = hs::double_difference_closed_form(m, tf, field->F, data).to_json();
        *out = dup(json_text(j));
    });
}

hs_status hs_heatfit_json(const hs_field* field, const hs_geodesics* list, const double* betas, size_t n, char** out)
{
    return guard([&] {
        need(field, "field");
        need(out, "output");
        if (n && !betas) hs::fail_validation("null widths");
        std::vector<double> grid(betas, betas + n);
        nlohmann::json j = hs::heat_asymptotic_check(field->F, grid, euler_for(list, 0)).to_json();
        j["D"] = field->F.D;
        *out = dup(json_text(j));
    });
}

hs_status hs_report(const hs_geodesics* list, const char* kind, const double* grid, size_t n, const char* format, char** out)
{
    return guard([&] {
        need(list, "geodesic list");
        need(kind, "kind");
        need(format, "format");
        need(out, "output");
        if (n && !grid) hs::fail_validation("null grid");
        std::string k = kind, f = format;
        if (f != "csv" && f != "json") hs::fail_validation("format must be 'csv' or 'json'");
        std::vector<hs::CountReport> rows;
        if (k == "pgt")
            rows = hs::pgt_report(list->list, std::vector<double>(grid, grid + n));
        else if (k == "classavg")
            for (size_t i = 0; i < n; ++i) rows.push_back(hs::class_average_report(list->list, grid[i]));
        else
            hs::fail_validation("report kind must be 'pgt' or 'classavg'");
        if (f == "csv") {
            std::string text = hs::report_csv_header() + "\r\n";
            for (const auto& r : rows) text += hs::report_csv_row(r) + "\r\n";
            *out = dup(text);
            return;
        }
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"x", r.x},
                           {"pi_sum", r.pi_sum},
                           {"main_pi", r.main_pi},
                           {"pi_ratio", r.pi_ratio()},
                           {"psi_sum", r.psi_sum},
                           {"main_psi", r.main_psi},
                           {"psi_ratio", r.psi_ratio()}});
        *out = dup(json_text({{"kind", k}, {"D", list->D}, {"rows", arr}}));
    });
}

int hs_check_count(void) { return hs::check_count; }

hs_status hs_check_run(int id, unsigned seed, int* pass, char** out)
{
    return guard([&] {
        need(pass, "pass flag");
        need(out, "output");
        hs::CheckOptions opt;
        opt.seed = seed;
        hs::CheckResult r = hs::run_check(id, opt);
        *pass = r.pass ? 1 : 0;
        *out = dup(r.to_json().dump());
    });
}

} // extern "C"
