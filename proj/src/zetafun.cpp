#include "zetafun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace hs {

namespace {

constexpr double pi = 3.14159265358979323846;

void require_even_m(int m)
{
    if (m < 2 || m % 2 != 0) fail_validation("weight m must be an even integer >= 2, got " + std::to_string(m));
}

void require_convergent(cplx s)
{
    if (!(s.real() > 1)) fail_validation("Euler product needs Re(s) > 1");
}

// integral over T > X of li(T) T^(-sigma-1), in the variable v = log T
double li_moment(double sigma, double X)
{
    auto f = [sigma](double v) {
        if (v > 50) {
            double a = 1 / v;
            return std::exp((1 - sigma) * v) * a * (1 + a + 2 * a * a + 6 * a * a * a);
        }
        return li(std::exp(v)) * std::exp(-sigma * v);
    };
    return quad_to_infinity(f, std::log(X), 1e-10);
}

// d/ds log zeta_eps(w)
cplx log_zeta_eps_deriv(cplx w, double log_eps)
{
    cplx q = std::exp(-2.0 * w * log_eps);
    return -2.0 * log_eps * q / (1.0 - q);
}

cplx log_zeta_eps(cplx w, double log_eps)
{
    zeta_eps(w, log_eps); // pole check
    return -std::log(1.0 - std::exp(-2.0 * w * log_eps));
}

bool near_nonpositive_integer(cplx s, int* k)
{
    double r = std::round(s.real());
    if (r > 0 || std::abs(s - cplx(r, 0)) > 1e-12) return false;
    *k = static_cast<int>(-r);
    return true;
}

} // namespace

EulerData euler_data(const GeodesicList& list, double trunc_norm)
{
    const double full = list.x * list.x;
    if (trunc_norm <= 0) trunc_norm = full;
    if (trunc_norm > full * (1 + 1e-12))
        fail_validation("class list incomplete: truncation norm " + std::to_string(trunc_norm) + " needs x >= " +
                        std::to_string(std::sqrt(trunc_norm)));
    EulerData e;
    e.trunc_norm = trunc_norm;
    long cum = 0;
    double worst = 0;
    for (const auto& c : list.classes) {
        if (c.norm > trunc_norm) continue;
        e.classes.push_back(c);
        cum += c.multiplicity;
        worst = std::max(worst, cum / li(c.norm));
    }
    // margin over the largest observed ratio; the asymptotic value is 2
    e.count_const = 1.25 * std::max(worst, 2.0);
    return e;
}

double euler_tail_bound(double sigma, double X, int K, const EulerData& data)
{
    // |log(1 - z)| <= |z| / (1 - |z|) summed over k, then Stieltjes against C li(T)
    double far = data.count_const * sigma * li_moment(sigma, X) / ((1 - std::pow(X, -sigma)) * (1 - 1 / X));
    double near = 0;
    for (const auto& c : data.classes) {
        if (c.norm > X) continue;
        double z = std::pow(c.norm, -sigma - K - 1);
        near += c.multiplicity * z / ((1 - 1 / c.norm) * (1 - z));
    }
    return far + near;
}

ZetaValue selberg_zeta(const ZetaParams& p, const EulerData& data)
{
    require_convergent(p.s);
    require_even_m(p.m);
    if (p.trunc_norm > data.trunc_norm * (1 + 1e-12))
        fail_validation("class list incomplete: classes only known up to norm " + std::to_string(data.trunc_norm));
    if (p.trunc_k < 0) fail_validation("trunc_k must be nonnegative");
    cplx acc = 0;
    for (const auto& c : data.classes) {
        if (c.norm > p.trunc_norm) continue;
        const double L = std::log(c.norm);
        const double phi = (p.m - 2) * c.angle;
        const cplx e_plus = std::polar(1.0, phi), e_minus = std::polar(1.0, -phi);
        cplx part = 0;
        for (int k = 0; k <= p.trunc_k; ++k) {
            cplx q = std::exp(-(static_cast<double>(k) + p.s) * L);
            part += std::log(1.0 - e_plus * q) + std::log(1.0 - e_minus * q);
        }
        acc -= 0.5 * c.multiplicity * part;
    }
    ZetaValue v;
    v.log_value = acc;
    v.value = std::exp(acc);
    v.tail_bound = euler_tail_bound(p.s.real(), p.trunc_norm, p.trunc_k, data);
    return v;
}

cplx selberg_log_deriv(const ZetaParams& p, const EulerData& data)
{
    require_convergent(p.s);
    require_even_m(p.m);
    if (p.trunc_norm > data.trunc_norm * (1 + 1e-12))
        fail_validation("class list incomplete: classes only known up to norm " + std::to_string(data.trunc_norm));
    cplx acc = 0;
    for (const auto& c : data.classes) {
        if (c.norm > p.trunc_norm) continue;
        const double L = std::log(c.norm);
        cplx part = 0;
        for (int l = 1;; ++l) {
            cplx q = std::exp(-static_cast<double>(l) * p.s * L);
            part += L / (1 - std::pow(c.norm, -l)) * q * std::cos((p.m - 2) * l * c.angle);
            if (std::abs(q) < 1e-18) break;
        }
        acc -= static_cast<double>(c.multiplicity) * part;
    }
    return acc;
}

RuelleValue ruelle(cplx s, const EulerData& data, double trunc_norm, int trunc_k)
{
    require_convergent(s);
    ZetaParams a{s, 2, trunc_norm, trunc_k}, b{s + 1.0, 2, trunc_norm, trunc_k};
    ZetaValue za = selberg_zeta(a, data), zb = selberg_zeta(b, data);
    cplx direct = 0;
    for (const auto& c : data.classes) {
        if (c.norm > trunc_norm) continue;
        direct -= static_cast<double>(c.multiplicity) * std::log(1.0 - std::exp(-s * std::log(c.norm)));
    }
    RuelleValue r;
    r.ratio = std::exp(za.log_value - zb.log_value);
    r.direct = std::exp(direct);
    r.tail_bound = za.tail_bound + zb.tail_bound + euler_tail_bound(s.real(), trunc_norm, 0, data);
    return r;
}

int AlphaTable::beta(size_t j, int k) const
{
    const AlphaRow& r = rows.at(j);
    int l = k % r.nu;
    int num = r.alpha[l] + r.alpha_bar[l] - 2 * l;
    if (num % r.nu != 0) fail_invariant("beta_{k,j} is not an integer");
    return num / r.nu;
}

AlphaTable alpha_table(int m, const std::vector<EllipticClassDatum>& elliptic)
{
    require_even_m(m);
    AlphaTable t;
    t.m = m;
    for (const auto& e : elliptic) {
        AlphaRow r;
        r.nu = e.nu;
        r.twist = e.twist;
        const int shift = e.twist * (m - 2) / 2;
        for (int l = 0; l < e.nu; ++l) {
            r.alpha.push_back(static_cast<int>(mod_floor(l + shift, e.nu)));
            r.alpha_bar.push_back(static_cast<int>(mod_floor(l - shift, e.nu)));
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

namespace {

void check_factor_poles(cplx s, int m, const Field& F)
{
    int k = 0;
    if (near_nonpositive_integer(s, &k)) {
        std::ostringstream msg;
        msg << "completed factors: Gamma factors have a zero or pole at s = " << -k << " (Z_K order there "
            << order_at_minus_k(m, F, k) << ")";
        fail_validation(msg.str());
    }
}

} // namespace

CompletedFactors completed_factors(cplx s, int m, const Field& F)
{
    require_even_m(m);
    check_factor_poles(s, m, F);
    const double z = boost::rational_cast<double>(F.zeta_minus_one);
    CompletedFactors f;
    f.log_id = 2 * z * (log_gamma2(s) + log_gamma2(s + 1.0));
    AlphaTable t = alpha_table(m, F.elliptic);
    for (const auto& r : t.rows)
        for (int l = 0; l < r.nu; ++l)
            f.log_ell += (static_cast<double>(r.nu - 1 - r.alpha[l] - r.alpha_bar[l]) / r.nu) *
                         log_gamma((s + static_cast<double>(l)) / static_cast<double>(r.nu));
    if (m == 2) {
        f.log_par = -2.0 * s * F.log_eps;
        f.log_hyp2 = 2.0 * log_zeta_eps(s, F.log_eps);
    } else {
        f.log_par = 0;
        f.log_hyp2 = log_zeta_eps(s + (m / 2 - 1.0), F.log_eps) - log_zeta_eps(s + (m / 2 - 2.0), F.log_eps);
    }
    return f;
}

CompletedFactors completed_factors_log_deriv(cplx s, int m, const Field& F)
{
    require_even_m(m);
    check_factor_poles(s, m, F);
    const double z = boost::rational_cast<double>(F.zeta_minus_one);
    CompletedFactors f;
    // (log Gamma_2)'(s) = -(s - 1) psi(s) + s - 1/2
    f.log_id = 2 * z * (2.0 * s - 1.0) * (1.0 - digamma(s));
    AlphaTable t = alpha_table(m, F.elliptic);
    for (const auto& r : t.rows) {
        const double nu = r.nu;
        for (int l = 0; l < r.nu; ++l)
            f.log_ell += (r.nu - 1 - r.alpha[l] - r.alpha_bar[l]) / (nu * nu) * digamma((s + static_cast<double>(l)) / nu);
    }
    if (m == 2) {
        f.log_par = -2.0 * F.log_eps;
        f.log_hyp2 = 2.0 * log_zeta_eps_deriv(s, F.log_eps);
    } else {
        f.log_par = 0;
        f.log_hyp2 = log_zeta_eps_deriv(s + (m / 2 - 1.0), F.log_eps) - log_zeta_eps_deriv(s + (m / 2 - 2.0), F.log_eps);
    }
    return f;
}

int order_at_minus_k(int m, const Field& F, int k)
{
    require_even_m(m);
    if (k < 0) fail_validation("order_at_minus_k: k must be nonnegative");
    AlphaTable t = alpha_table(m, F.elliptic);
    const int E = static_cast<int>(F.euler_char.numerator());
    const int N = static_cast<int>(t.rows.size());
    int order = (2 * k + 1) * E - 2 * k * N;
    for (size_t j = 0; j < t.rows.size(); ++j) order += 2 * (k / t.rows[j].nu) - t.beta(j, k);
    return order;
}

int DivisorLedger::order_at(cplx s, double tol) const
{
    int total = 0;
    for (const auto& e : entries) {
        if (!e.family) {
            if (std::abs(s - e.base) < tol) total += e.order;
            continue;
        }
        if (std::fabs(s.real() - e.base.real()) > tol) continue;
        double kk = (s.imag() - e.base.imag()) * log_eps / pi;
        double r = std::round(kk);
        if (std::fabs(kk - r) > tol) continue;
        if (e.skip_k0 && r == 0) continue;
        total += e.order;
    }
    return total;
}

nlohmann::json DivisorLedger::to_json() const
{
    nlohmann::json j;
    j["m"] = m;
    j["k_max"] = k_max;
    j["log_eps"] = log_eps;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json x;
        if (e.family) {
            std::ostringstream base;
            base << e.base.real() << " + pi i k / log eps";
            x["family"] = base.str();
            x["k"] = e.skip_k0 ? "nonzero integers" : "all integers";
        } else {
            x["at"] = {e.base.real(), e.base.imag()};
        }
        x["order"] = e.order;
        x["source"] = e.source;
        if (!e.note.empty()) x["note"] = e.note;
        list.push_back(x);
    }
    j["entries"] = list;
    // summed orders at the real points where entries can coincide
    nlohmann::json merged = nlohmann::json::array();
    for (int k = 1; k >= -k_max; --k) {
        int o = order_at(cplx(k, 0));
        if (o != 0) merged.push_back({{"at", k}, {"order", o}});
    }
    j["merged_real_points"] = merged;
    return j;
}

DivisorLedger divisor_ledger(int m, const Field& F, int k_max)
{
    require_even_m(m);
    if (k_max < 0) fail_validation("k_max must be nonnegative");
    DivisorLedger L;
    L.m = m;
    L.k_max = k_max;
    L.log_eps = F.log_eps;
    if (m == 2) {
        const int E = static_cast<int>(F.euler_char.numerator());
        L.entries.push_back({cplx(1, 0), false, false, -2, "double pole at s=1", ""});
        L.entries.push_back({cplx(0, 0), true, true, 2, "unit zeta zeros", ""});
        L.entries.push_back({cplx(0, 0), false, false, E, "zero at s=0 of order E", ""});
        for (int k = 1; k <= k_max; ++k)
            L.entries.push_back({cplx(-k, 0), false, false, order_at_minus_k(m, F, k), "s=-k", ""});
        return L;
    }
    L.entries.push_back({cplx(1 - m / 2, 0), true, false, 1, "type-2 hyperbolic zeros", ""});
    L.entries.push_back({cplx(2 - m / 2, 0), true, false, -1, "type-2 hyperbolic poles", ""});
    const int N = static_cast<int>(F.elliptic.size());
    for (int k = 0; k <= k_max; ++k) {
        LedgerEntry e{cplx(-k, 0), false, false, order_at_minus_k(m, F, k), "s=-k", ""};
        if (k > 0) e.note = "residue computation includes -2kN = " + std::to_string(-2 * k * N) + "; the stated order omits it";
        L.entries.push_back(e);
    }
    if (m == 4) {
        L.entries.push_back({cplx(0, 0), false, false, 1, "extra simple zero (m=4)", ""});
        L.entries.push_back({cplx(1, 0), false, false, 1, "extra simple zero (m=4)", ""});
    }
    return L;
}

RuelleLeading ruelle_leading(const Field& F)
{
    RuelleLeading r;
    r.euler_char = static_cast<int>(F.euler_char.numerator());
    r.n0 = r.euler_char + 2;
    for (const auto& e : F.elliptic) r.nu_product *= e.nu;
    const double eps = std::exp(F.log_eps);
    const double u = 2 * eps * F.log_eps / (eps * eps - 1);
    r.abs_leading = std::pow(2 * pi, r.euler_char) / boost::rational_cast<double>(r.nu_product) * u * u;
    return r;
}

cplx fe_rhs(cplx s, const Field& F)
{
    const int E = static_cast<int>(F.euler_char.numerator());
    if (std::abs(s - std::round(s.real())) < 1e-12) fail_validation("fe_rhs: s is an integer");
    cplx sp = std::sin(pi * s);
    cplx v = (E % 2 ? -1.0 : 1.0) * std::pow(2.0 * sp, 2 * E);
    for (const auto& e : F.elliptic) {
        cplx q = std::sin(pi * s / static_cast<double>(e.nu)) / sp;
        v *= q * q;
    }
    cplx z = zeta_eps(s - 1.0, F.log_eps) * zeta_eps(s + 1.0, F.log_eps) / std::pow(zeta_eps(s, F.log_eps), 2);
    return v * z * z;
}

FeReport fe_identity_checks(const Field& F, unsigned seed, int samples)
{
    FeReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-0.95, 0.95), im(-1.0, 1.0);
    std::set<int> nus;
    for (const auto& e : F.elliptic) nus.insert(e.nu);
    for (int i = 0; i < samples; ++i) {
        cplx s(re(rng), im(rng));
        if (std::abs(s) < 0.05) continue;
        ++rep.samples;
        cplx sp = std::sin(pi * s);
        rep.bk2_max_err = std::max(rep.bk2_max_err, std::abs(xi_ratio(s) + 4.0 * sp * sp));
        for (int nu : nus) {
            cplx lhs = log_g_nu(nu, 1.0 + s) + log_g_nu(nu, 1.0 - s) - log_g_nu(nu, s) - log_g_nu(nu, -s) -
                       (static_cast<double>(nu - 1) / nu) * log_xi_ratio(s);
            cplx q = std::sin(pi * s / static_cast<double>(nu)) / sp;
            rep.bk3_max_err = std::max(rep.bk3_max_err, std::abs(std::exp(lhs) - q * q) / std::abs(q * q));
        }
        cplx a = fe_rhs(s, F), b = fe_rhs(-s, F);
        rep.parity_max_err = std::max(rep.parity_max_err, std::abs(a - b) / std::abs(a));
    }
    // local order and leading coefficient at s = 0 along a generic ray
    const cplx dir = std::polar(1.0, 0.3);
    const cplx s1 = 1e-3 * dir, s2 = 1e-4 * dir;
    rep.zero_order = std::log(std::abs(fe_rhs(s1, F)) / std::abs(fe_rhs(s2, F))) / std::log(10.0);
    RuelleLeading lead = ruelle_leading(F);
    rep.leading_ratio = std::abs(fe_rhs(s2, F)) / std::pow(std::abs(s2), 2 * lead.n0) / (lead.abs_leading * lead.abs_leading);
    return rep;
}

} // namespace hs
