#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "error.hpp"
#include "field.hpp"
#include "geodesics.hpp"
#include "pellforms.hpp"
#include "specfun.hpp"
#include "traceform.hpp"
#include "zetafun.hpp"

namespace hs {

namespace {

constexpr double pi = 3.14159265358979323846;
const std::vector<int> core_fields = {5, 8, 12};

// Accumulates failures and notes for one criterion.
struct Verdict {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            note << "FAILED " << what << "; ";
        }
    }
};

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// Class list for D = 5 up to eps_d = 30, shared by the analytic criteria.
const GeodesicList& d5_list()
{
    static const GeodesicList list = enumerate_geodesics(make_field(5), 30);
    return list;
}

void exact_constants(Verdict& v)
{
    const Rational expect[] = {Rational(1, 30), Rational(1, 12), Rational(1, 6)};
    for (size_t i = 0; i < core_fields.size(); ++i) {
        int D = core_fields[i];
        Rational siegel = zeta_minus_one_siegel(D), bern = zeta_minus_one_bernoulli(D);
        v.require(siegel == bern, "Siegel and Bernoulli routes agree for D=" + std::to_string(D));
        v.require(siegel == expect[i], "zeta_K(-1) for D=" + std::to_string(D));
        Field F = make_field(D);
        v.require(F.euler_char == Rational(4), "E = 4 for D=" + std::to_string(D));
        v.note << "D=" << D << ": zeta_K(-1)=" << rational_str(siegel) << " E=" << rational_str(F.euler_char) << "; ";
    }
}

void census(Verdict& v)
{
    const std::vector<std::vector<int>> expect = {{2, 2, 3, 3, 5, 5}, {2, 2, 3, 3, 4, 4}, {2, 2, 2, 3, 3, 6}};
    for (size_t i = 0; i < core_fields.size(); ++i) {
        Field F = make_field(core_fields[i]);
        std::vector<int> orders;
        for (const auto& e : F.elliptic) orders.push_back(e.nu);
        std::sort(orders.begin(), orders.end());
        v.require(orders == expect[i], "order multiset for D=" + std::to_string(core_fields[i]));
        v.note << "D=" << core_fields[i] << ": {";
        for (size_t j = 0; j < orders.size(); ++j) v.note << (j ? "," : "") << orders[j];
        v.note << "}; ";
    }
}

void ruelle_constants(Verdict& v)
{
    struct Row {
        int D;
        i64 nu_product;
        i64 eps_a, eps_b;
        double eps;
    };
    for (Row r : {Row{5, 4 * 9 * 25, 0, 1, (1 + std::sqrt(5.0)) / 2}, Row{8, 4 * 9 * 16, 1, 1, 1 + std::sqrt(2.0)},
                  Row{12, 8 * 9 * 6, 2, 1, 2 + std::sqrt(3.0)}}) {
        Field F = make_field(r.D);
        RuelleLeading lead = ruelle_leading(F);
        std::string tag = " for D=" + std::to_string(r.D);
        v.require(lead.n0 == 6, "n0 = 6" + tag);
        v.require(lead.nu_product == Rational(r.nu_product), "prod nu" + tag);
        v.require(F.eps == F.make(r.eps_a, r.eps_b), "eps" + tag);
        double closed = std::pow(2 * pi, 4) / static_cast<double>(r.nu_product) * std::pow(2 * r.eps * std::log(r.eps), 2) /
                        std::pow(r.eps * r.eps - 1, 2);
        v.require(std::fabs(lead.abs_leading - closed) <= 1e-13 * closed, "|R*(0)| closed form" + tag);
        v.note << "D=" << r.D << ": n0=" << lead.n0 << " prod nu=" << rational_str(lead.nu_product)
               << " eps=" << F.eps.str() << " |R*(0)|=" << fmt(lead.abs_leading, 10) << "; ";
    }
}

void dual_oracle(Verdict& v)
{
    Field F = make_field(5);
    int discs = 0, forms = 0;
    for (const auto& [d, p] : discriminants_up_to(F, 15)) {
        ClassNumberOptions opt;
        opt.cross_check = true;
        DiscriminantRecord rec = class_number(F, d, p, opt);
        v.require(rec.class_number == rec.oracle_class_number, "orbit and matrix counts for d=" + d.str());
        for (const Form& Q : rec.forms) {
            GroupElem g = form_to_matrix(Q, p);
            Classification cl = classify(g);
            v.require(cl.type == ElemType::hyperbolic_elliptic, "g(Q) type for Q=" + Q.str());
            v.require(std::fabs(cl.N - p.eps_d * p.eps_d) <= 1e-9 * cl.N, "N(g(Q)) for Q=" + Q.str());
            ++forms;
        }
        ++discs;
    }
    v.require(discs > 0, "nonempty discriminant list");
    v.note << discs << " discriminants, " << forms << " form matrices; ";
}

void special_functions(Verdict& v, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-0.95, 0.95), im(-1.0, 1.0), wide(-4.0, 4.0);
    double bk2 = 0, bk3 = 0, ladder = 0, mult = 0;
    for (int i = 0; i < 20; ++i) {
        cplx s(re(rng), im(rng));
        cplx target = -4.0 * std::pow(std::sin(pi * s), 2);
        bk2 = std::max(bk2, std::abs(xi_ratio(s) - target) / std::max(1.0, std::abs(target)));
    }
    for (int nu : {2, 3, 5, 6}) {
        for (int i = 0; i < 20;) {
            cplx z(re(rng), im(rng));
            if (std::abs(z) < 0.05) continue; // removable singularity at 0
            cplx lhs = log_g_nu(nu, 1.0 + z) + log_g_nu(nu, 1.0 - z) - log_g_nu(nu, z) - log_g_nu(nu, -z) -
                       (static_cast<double>(nu - 1) / nu) * log_xi_ratio(z);
            cplx rhs = std::pow(std::sin(pi * z / static_cast<double>(nu)) / std::sin(pi * z), 2);
            bk3 = std::max(bk3, std::abs(std::exp(lhs) - rhs) / std::max(1.0, std::abs(rhs)));
            ++i;
        }
    }
    for (int i = 0; i < 20; ++i) {
        cplx z(wide(rng), wide(rng));
        ladder = std::max(ladder, std::abs(log_gamma2(z + 1.0) - log_gamma2(z) - (0.5 * std::log(2 * pi) - log_gamma(z))));
        for (int nu : {2, 3, 5, 6}) {
            cplx avg = 0;
            for (int l = 0; l < nu; ++l) avg += digamma((z + static_cast<double>(l)) / static_cast<double>(nu));
            avg /= static_cast<double>(nu);
            cplx target = digamma(z) - std::log(static_cast<double>(nu));
            mult = std::max(mult, std::abs(avg - target) / std::max(1.0, std::abs(target)));
        }
    }
    v.require(bk2 <= 1e-8, "Xi identity");
    v.require(bk3 <= 1e-8, "G_nu ratio identity");
    v.require(ladder <= 1e-10, "double Gamma ladder");
    v.require(mult <= 1e-10, "digamma multiplication");
    v.note << "max errors: Xi " << fmt(bk2, 3) << ", G_nu " << fmt(bk3, 3) << ", ladder " << fmt(ladder, 3)
           << ", digamma " << fmt(mult, 3) << "; ";
}

void zeta_consistency(Verdict& v, unsigned seed)
{
    EulerData data = euler_data(d5_list());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(1.5, 3.0), im(-3.0, 3.0);
    double worst_fd = 0;
    for (int m : {2, 4, 6}) {
        for (int i = 0; i < 10; ++i) {
            cplx s(re(rng), im(rng));
            auto logz = [&](cplx w) { return selberg_zeta(ZetaParams{w, m, 900, 60}, data).log_value; };
            const double h = 1e-4;
            cplx fd = (logz(s + h) - logz(s - h)) / (2 * h);
            cplx an = selberg_log_deriv(ZetaParams{s, m, 900, 60}, data);
            worst_fd = std::max(worst_fd, std::abs(fd - an) / std::abs(an));
        }
    }
    v.require(worst_fd <= 1e-6, "log derivative against finite differences");

    double worst_ruelle = 0;
    for (int i = 0; i < 10; ++i) {
        cplx s(re(rng), im(rng));
        RuelleValue r = ruelle(s, data, 900, 40);
        double gap = std::abs(std::log(r.ratio / r.direct));
        v.require(gap <= r.tail_bound, "Ruelle ratio within tail at s=" + format_complex(s));
        worst_ruelle = std::max(worst_ruelle, gap / r.tail_bound);
    }

    double worst_imag = 0;
    for (double s : {1.5, 1.8, 2.2, 2.6, 3.0}) {
        ZetaValue z = selberg_zeta(ZetaParams{s, 2, 900, 40}, data);
        worst_imag = std::max(worst_imag, std::fabs(z.value.imag()) / std::abs(z.value));
    }
    v.require(worst_imag <= 1e-14, "m=2 real on the real axis");
    v.note << "FD rel err " << fmt(worst_fd, 3) << "; Ruelle gap/tail " << fmt(worst_ruelle, 3) << "; max imag/|Z| "
           << fmt(worst_imag, 3) << "; ";
}

void closed_form(Verdict& v, unsigned seed)
{
    Field F = make_field(5);
    EulerData data = euler_data(d5_list());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sr(1.2, 3.0), si(-3.0, 3.0), br(2.0, 6.0);
    double worst = 0;
    for (int m : {4, 6}) {
        for (int i = 0; i < 5; ++i) {
            double b1 = br(rng);
            cplx s(sr(rng), si(rng));
            TestFunctionPair tf = rational_testfunction(s, b1, b1 + 0.3 + br(rng));
            GeomSideBreakdown lhs = geom_side_double_difference(m, tf, F, data);
            GeomSideBreakdown rhs = double_difference_closed_form(m, tf, F, data);
            const std::pair<cplx, cplx> terms[] = {{lhs.identity_term, rhs.identity_term},
                                                   {lhs.elliptic_term, rhs.elliptic_term},
                                                   {lhs.hyp_ell_term, rhs.hyp_ell_term},
                                                   {lhs.par_sct_term, rhs.par_sct_term},
                                                   {lhs.hyp2_sct_term, rhs.hyp2_sct_term},
                                                   {lhs.total, rhs.total}};
            for (const auto& [a, b] : terms) {
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
                v.require(close(a, b, 1e-7), "m=" + std::to_string(m) + " " + tf.describe());
            }
        }
    }
    v.note << "max rel diff " << fmt(worst, 3) << " over 10 cases x 6 terms; ";
}

void heat(Verdict& v)
{
    Field F = make_field(5);
    HeatFit fit = heat_asymptotic_check(F, {0.2, 0.1, 0.05, 0.025}, euler_data(d5_list()));
    v.require(fit.a_ok, "1/beta coefficient within 2%");
    v.require(fit.b_ok, "1/sqrt(beta) coefficient within 5%");
    v.note << "a=" << fmt(fit.a, 6) << " (target " << fmt(fit.a_target, 6) << ", rel " << fmt(fit.a_rel_err, 3) << "), b="
           << fmt(fit.b, 6) << " (target " << fmt(fit.b_target, 6) << ", rel " << fmt(fit.b_rel_err, 3)
           << "), c=" << fmt(fit.c, 4) << ", cond " << fmt(fit.condition, 3) << "; ";
}

void pgt(Verdict& v)
{
    const GeodesicList& list = d5_list();
    std::vector<CountReport> rows = pgt_report(list, {5, 10, 15, 20, 25, 30});
    const CountReport& last = rows.back();
    v.require(last.pi_ratio() >= 0.75 && last.pi_ratio() <= 1.25, "pi ratio band at x=30");
    v.require(last.psi_ratio() >= 0.75 && last.psi_ratio() <= 1.25, "psi ratio band at x=30");
    bool monotone = true;
    for (size_t i = rows.size() - 2; i < rows.size(); ++i)
        monotone = monotone && std::fabs(rows[i].pi_ratio() - 1) <= std::fabs(rows[i - 1].pi_ratio() - 1);
    v.require(monotone, "|pi ratio - 1| nonincreasing over x=20,25,30");
    v.note << "pi ratios";
    for (const auto& r : rows) v.note << ' ' << fmt(r.pi_ratio(), 4);
    v.note << "; psi ratios";
    for (const auto& r : rows) v.note << ' ' << fmt(r.psi_ratio(), 4);
    CountReport avg = class_average_report(list, 30);
    v.note << "; class average ratio " << fmt(avg.psi_ratio(), 4) << "; ";
}

bool same_classes(const GeodesicList& a, const GeodesicList& b)
{
    if (a.classes.size() != b.classes.size()) return false;
    for (size_t i = 0; i < a.classes.size(); ++i) {
        const GeodesicClass &x = a.classes[i], &y = b.classes[i];
        if (!(x.d == y.d) || x.multiplicity != y.multiplicity || !(x.pell.t0 == y.pell.t0) || !(x.pell.u0 == y.pell.u0))
            return false;
    }
    return true;
}

void stability(Verdict& v)
{
    for (int D : core_fields) {
        std::string tag = " for D=" + std::to_string(D);
        Field F = make_field(D), F2 = make_field(D, 2 * default_elliptic_height(D));
        bool same = F.census.size() == F2.census.size();
        for (size_t i = 0; same && i < F.census.size(); ++i)
            same = F.census[i].nu == F2.census[i].nu && F.census[i].twist == F2.census[i].twist &&
                   F.census[i].count == F2.census[i].count;
        v.require(same, "census under doubled height" + tag);

        GeodesicOptions base, wide;
        wide.class_numbers.form_height *= 2;
        wide.class_numbers.height_per_root *= 2;
        wide.class_numbers.mu_box *= 2;
        wide.class_numbers.oracle_height *= 2;
        wide.trace_box_scale = 2;
        GeodesicList a = enumerate_geodesics(F, 30, base), b = enumerate_geodesics(F, 30, wide);
        v.require(same_classes(a, b), "class numbers and geodesic counts under doubled caps" + tag);
        v.note << "D=" << D << ": " << a.classes.size() << " discriminants, total " << a.total_multiplicity() << "; ";
    }

    Field F = make_field(5);
    EulerData full = euler_data(d5_list()), half = euler_data(d5_list(), 450);
    int zeta_cases = 0;
    for (int m : {2, 4, 6}) {
        for (cplx s : {cplx(1.5, 0), cplx(2.0, 1.0), cplx(3.0, -2.0)}) {
            ZetaValue k20 = selberg_zeta(ZetaParams{s, m, 900, 20}, full), k40 = selberg_zeta(ZetaParams{s, m, 900, 40}, full);
            ZetaValue x450 = selberg_zeta(ZetaParams{s, m, 450, 20}, full);
            v.require(std::abs(k20.log_value - k40.log_value) <= k20.tail_bound, "zeta under doubled K");
            v.require(std::abs(x450.log_value - k20.log_value) <= x450.tail_bound, "zeta under doubled X");
            ++zeta_cases;
        }
    }
    int trace_cases = 0;
    for (int m : {2, 4, 6}) {
        TestFunctionPair tf = rational_testfunction(cplx(2.0, 0.5), 2.5, 4.0);
        GeomSideBreakdown a = geom_side_double_difference(m, tf, F, half), b = geom_side_double_difference(m, tf, F, full);
        v.require(std::abs(a.hyp_ell_term - b.hyp_ell_term) <= a.he_tail_bound, "trace HE term under doubled X");
        v.require(a.identity_term == b.identity_term && a.elliptic_term == b.elliptic_term &&
                      a.hyp2_sct_term == b.hyp2_sct_term,
                  "class-free terms unchanged");
        ++trace_cases;
    }
    v.note << zeta_cases << " zeta and " << trace_cases << " trace comparisons inside tail bounds; ";
}

struct CheckDef {
    const char* name;
    double budget_seconds;
    std::function<void(Verdict&, unsigned)> body;
};

const CheckDef& def_of(int id)
{
    static const std::vector<CheckDef> defs = {
        {"exact constants", 1, [](Verdict& v, unsigned) { exact_constants(v); }},
        {"elliptic census", 300, [](Verdict& v, unsigned) { census(v); }},
        {"Ruelle leading term", 0, [](Verdict& v, unsigned) { ruelle_constants(v); }},
        {"dual-oracle class numbers", 600, [](Verdict& v, unsigned) { dual_oracle(v); }},
        {"special-function identities", 0, special_functions},
        {"zeta consistency", 0, zeta_consistency},
        {"trace-formula closed form", 300, closed_form},
        {"heat asymptotic", 600, [](Verdict& v, unsigned) { heat(v); }},
        {"prime geodesic trend", 1800, [](Verdict& v, unsigned) { pgt(v); }},
        {"stability", 0, [](Verdict& v, unsigned) { stability(v); }},
    };
    if (id < 1 || id > check_count) fail_validation("check id must be in 1.." + std::to_string(check_count));
    return defs[static_cast<size_t>(id - 1)];
}

} // namespace

nlohmann::json CheckResult::to_json() const
{
    return {{"id", id}, {"name", name}, {"pass", pass}, {"detail", detail}, {"seconds", seconds}};
}

CheckResult run_check(int id, const CheckOptions& opt)
{
    const CheckDef& def = def_of(id);
    CheckResult r;
    r.id = id;
    r.name = def.name;
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    try {
        def.body(v, opt.seed);
    } catch (const Error& e) {
        v.pass = false;
        v.note << "error: " << e.what() << "; ";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (def.budget_seconds > 0 && r.seconds > def.budget_seconds) {
        v.pass = false;
        v.note << "over the " << def.budget_seconds << " s budget; ";
    }
    r.pass = v.pass;
    r.detail = v.note.str();
    if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
    return r;
}

std::vector<CheckResult> run_checks(const std::vector<int>& ids, const CheckOptions& opt)
{
    std::vector<CheckResult> out;
    for (int id : ids) out.push_back(run_check(id, opt));
    return out;
}

std::string check_line(const CheckResult& r, bool timings)
{
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  ";
    if (timings) os << "(" << fmt(r.seconds, 3) << " s)  ";
    os << r.detail;
    return os.str();
}

} // namespace hs
