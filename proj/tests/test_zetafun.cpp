#include "doctest.h"

#include <random>

#include "zetafun.hpp"

using namespace hs;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Fixture {
    Field F = make_field(5);
    GeodesicList list = enumerate_geodesics(F, 30);
    EulerData data = euler_data(list);
};

const Fixture& fx()
{
    static const Fixture f;
    return f;
}

cplx central_diff(const std::function<cplx(cplx)>& f, cplx s, double h)
{
    return (f(s + h) - f(s - h)) / (2 * h);
}

// order of Gamma_2(s)Gamma_2(s+1)^(2 zeta) * prod Gamma((s+l)/nu)^(...) at s = -k, negated
Rational factor_order_oracle(const Field& F, int m, int k)
{
    Rational order = F.zeta_minus_one * Rational(2 * (2 * k + 1));
    for (const auto& e : F.elliptic) {
        int shift = e.twist * (m - 2) / 2;
        int l = k % e.nu;
        int a = static_cast<int>(mod_floor(l + shift, e.nu)), ab = static_cast<int>(mod_floor(l - shift, e.nu));
        order += Rational(e.nu - 1 - a - ab, e.nu);
    }
    return order;
}

} // namespace

TEST_CASE("Euler product basics")
{
    const auto& d = fx().data;
    CHECK(d.trunc_norm == doctest::Approx(900));
    CHECK(d.count_const >= 2.5);
    ZetaParams p{cplx(50, 1.3), 4, 900, 40};
    CHECK(std::abs(selberg_zeta(p, d).value - 1.0) < 1e-12);
    p.m = 2;
    p.s = 1.7;
    ZetaValue v = selberg_zeta(p, d);
    CHECK(std::fabs(v.value.imag()) < 1e-14 * std::abs(v.value));
    CHECK(v.value.real() > 1);
    CHECK(v.tail_bound > 0);
    p.s = 1.0;
    CHECK_THROWS_AS(selberg_zeta(p, d), Error);
    p.s = 2.0;
    p.trunc_norm = 1000;
    CHECK_THROWS_AS(selberg_zeta(p, d), Error);
    p.trunc_norm = 900;
    p.m = 3;
    CHECK_THROWS_AS(selberg_zeta(p, d), Error);
    CHECK_THROWS_AS(euler_data(fx().list, 1e4), Error);
}

TEST_CASE("truncation stays inside the tail bound")
{
    const auto& d = fx().data;
    for (int m : {2, 4, 6}) {
        for (cplx s : {cplx(1.5, 0), cplx(2.0, 1.0), cplx(3.0, -2.0)}) {
            ZetaParams a{s, m, 900, 20}, b{s, m, 900, 40}, c{s, m, 450, 20};
            ZetaValue za = selberg_zeta(a, d), zb = selberg_zeta(b, d), zc = selberg_zeta(c, d);
            CHECK(std::abs(za.log_value - zb.log_value) <= za.tail_bound);
            CHECK(std::abs(zc.log_value - za.log_value) <= zc.tail_bound);
            CHECK(zb.tail_bound <= za.tail_bound);
        }
    }
}

TEST_CASE("log derivative against finite differences")
{
    const auto& d = fx().data;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(1.5, 3.0), im(-3.0, 3.0);
    for (int m : {2, 4, 6}) {
        for (int i = 0; i < 10; ++i) {
            cplx s(re(rng), im(rng));
            auto logz = [&](cplx w) { return selberg_zeta(ZetaParams{w, m, 900, 60}, d).log_value; };
            cplx fd = central_diff(logz, s, 1e-4);
            cplx an = selberg_log_deriv(ZetaParams{s, m, 900, 60}, d);
            CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an));
        }
    }
    CHECK(std::abs(selberg_log_deriv(ZetaParams{cplx(60, 0), 4, 900, 40}, d)) < 1e-12);
    cplx r = selberg_log_deriv(ZetaParams{cplx(2.2, 0), 2, 900, 40}, d);
    CHECK(r.imag() == 0.0);
    CHECK(r.real() < 0);
}

TEST_CASE("Ruelle zeta two ways")
{
    const auto& d = fx().data;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(1.2, 3.0), im(-4.0, 4.0);
    for (int i = 0; i < 10; ++i) {
        cplx s(re(rng), im(rng));
        RuelleValue r = ruelle(s, d, 900, 40);
        CHECK(std::abs(std::log(r.ratio / r.direct)) <= r.tail_bound);
    }
    RuelleValue r22 = ruelle(2.2, d, 900, 40);
    CHECK(std::abs(std::log(r22.ratio / r22.direct)) <= r22.tail_bound);
    CHECK(std::abs(r22.ratio.imag()) < 1e-15);
    CHECK(std::abs(ruelle(cplx(50, 2), d, 900, 40).direct - 1.0) < 1e-12);
}

TEST_CASE("conjugation symmetry")
{
    const auto& d = fx().data;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> re(1.2, 3.0), im(-4.0, 4.0);
    for (int i = 0; i < 10; ++i) {
        cplx s(re(rng), im(rng));
        for (int m : {2, 4, 6}) {
            cplx a = selberg_zeta(ZetaParams{s, m, 900, 40}, d).value;
            cplx b = selberg_zeta(ZetaParams{std::conj(s), m, 900, 40}, d).value;
            CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        }
        // weight flip m -> 4 - m at m = 2
        cplx a = selberg_zeta(ZetaParams{s, 2, 900, 40}, d).value;
        cplx b = selberg_zeta(ZetaParams{std::conj(s), 2, 900, 40}, d).value;
        CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
    }
}

TEST_CASE("alpha tables")
{
    const Field& F = fx().F;
    AlphaTable t2 = alpha_table(2, F.elliptic);
    for (size_t j = 0; j < t2.rows.size(); ++j) {
        for (int l = 0; l < t2.rows[j].nu; ++l) {
            CHECK(t2.rows[j].alpha[l] == l);
            CHECK(t2.rows[j].alpha_bar[l] == l);
        }
        for (int k = 0; k <= 50; ++k) CHECK(t2.beta(j, k) == 0);
    }
    EllipticClassDatum e;
    e.nu = 2;
    e.twist = 1;
    AlphaTable t4 = alpha_table(4, {e});
    CHECK(t4.rows[0].alpha[0] == 1);
    CHECK(t4.rows[0].alpha_bar[0] == 1);
    CHECK(t4.beta(0, 0) == 1);
    for (int D : {5, 8, 12}) {
        Field G = make_field(D);
        for (int m : {2, 4, 6, 8}) {
            AlphaTable t = alpha_table(m, G.elliptic);
            for (size_t j = 0; j < t.rows.size(); ++j) {
                const auto& r = t.rows[j];
                for (int l = 0; l < r.nu; ++l) {
                    CHECK(mod_floor(r.alpha[l] + r.alpha_bar[l] - 2 * l, r.nu) == 0);
                    CHECK((r.alpha[l] >= 0 && r.alpha[l] < r.nu));
                }
                for (int k = 0; k <= 50; ++k) CHECK_NOTHROW(t.beta(j, k));
            }
        }
    }
}

TEST_CASE("completed factors")
{
    const Field& F = fx().F;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-2.5, 2.5), im(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        cplx s(re(rng), im(rng));
        for (int m : {2, 4, 6}) {
            CompletedFactors a = completed_factors(s, m, F), b = completed_factors(std::conj(s), m, F);
            CHECK(std::abs(std::exp(a.log_id) - std::conj(std::exp(b.log_id))) < 1e-10 * std::abs(std::exp(a.log_id)));
            CompletedFactors der = completed_factors_log_deriv(s, m, F);
            const double h = 1e-5;
            CompletedFactors up = completed_factors(s + h, m, F), dn = completed_factors(s - h, m, F);
            CHECK(std::abs((up.log_id - dn.log_id) / (2 * h) - der.log_id) < 1e-6 * std::max(1.0, std::abs(der.log_id)));
            CHECK(std::abs((up.log_ell - dn.log_ell) / (2 * h) - der.log_ell) < 1e-6 * std::max(1.0, std::abs(der.log_ell)));
            CHECK(std::abs((up.log_par - dn.log_par) / (2 * h) - der.log_par) < 1e-7);
            CHECK(std::abs((up.log_hyp2 - dn.log_hyp2) / (2 * h) - der.log_hyp2) < 1e-6 * std::max(1.0, std::abs(der.log_hyp2)));
        }
    }
    // m = 2 unit factor has double poles on the imaginary axis
    cplx s0(0, pi / F.log_eps);
    for (double r : {1e-3, 1e-4}) {
        cplx v = std::exp(completed_factors(s0 + r, 2, F).log_hyp2);
        CHECK(std::abs(v) * r * r == doctest::Approx(1 / (4 * F.log_eps * F.log_eps)).epsilon(1e-2));
    }
    CHECK_THROWS_AS(completed_factors(cplx(-1, 0), 4, F), Error);
    CHECK_THROWS_AS(completed_factors(cplx(0, 0), 2, F), Error);
}

TEST_CASE("divisor ledger")
{
    const Field& F = fx().F;
    DivisorLedger l2 = divisor_ledger(2, F, 10);
    CHECK(l2.order_at(0) == 4);
    CHECK(l2.order_at(1) == -2);
    CHECK(l2.order_at(cplx(0, pi / F.log_eps)) == 2);
    CHECK(l2.order_at(cplx(0, -3 * pi / F.log_eps)) == 2);
    CHECK(l2.order_at(cplx(0.5, 0.1)) == 0);
    DivisorLedger l4 = divisor_ledger(4, F, 10);
    // s=0 collects: s=-k at k=0, the pole family at 2 - m/2 = 0, the extra zero
    CHECK(l4.order_at(0) == order_at_minus_k(4, F, 0) - 1 + 1);
    CHECK(l4.order_at(1) == 1);
    CHECK(l4.order_at(cplx(-1, pi / F.log_eps)) == 1);
    auto j = l4.to_json();
    CHECK(j["entries"].size() == l4.entries.size());
    for (int D : {5, 8, 12}) {
        Field G = make_field(D);
        CHECK(order_at_minus_k(2, G, 0) == 4);
        for (int m : {2, 4, 6, 8}) {
            for (int k = 0; k <= 50; ++k) {
                Rational oracle = factor_order_oracle(G, m, k);
                CHECK(oracle.denominator() == 1);
                CHECK(order_at_minus_k(m, G, k) == oracle.numerator());
            }
        }
    }
}

TEST_CASE("leading term of the Ruelle zeta at zero")
{
    struct Row {
        int D;
        i64 nu_product;
        double eps;
    };
    for (Row r : {Row{5, 4 * 9 * 25, (1 + std::sqrt(5.0)) / 2}, Row{8, 4 * 9 * 16, 1 + std::sqrt(2.0)},
                  Row{12, 8 * 9 * 6, 2 + std::sqrt(3.0)}}) {
        Field F = make_field(r.D);
        RuelleLeading lead = ruelle_leading(F);
        CHECK(lead.n0 == 6);
        CHECK(lead.nu_product == Rational(r.nu_product));
        double closed = std::pow(2 * pi, 4) / r.nu_product * std::pow(2 * r.eps * std::log(r.eps), 2) /
                        std::pow(r.eps * r.eps - 1, 2);
        CHECK(lead.abs_leading == doctest::Approx(closed).epsilon(1e-13));
    }
}

TEST_CASE("functional equation factor")
{
    for (int D : {5, 12}) {
        Field F = make_field(D);
        FeReport rep = fe_identity_checks(F, 17, 20);
        CHECK(rep.samples >= 18);
        CHECK(rep.bk2_max_err < 1e-9);
        CHECK(rep.bk3_max_err < 1e-8);
        CHECK(rep.parity_max_err < 1e-9);
        CHECK(rep.zero_order == doctest::Approx(12).epsilon(1e-3));
        CHECK(rep.leading_ratio == doctest::Approx(1).epsilon(1e-3));
    }
    CHECK_THROWS_AS(fe_rhs(cplx(2, 0), fx().F), Error);
}
