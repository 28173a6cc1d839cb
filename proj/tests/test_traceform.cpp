#include "doctest.h"

#include <random>

#include "traceform.hpp"

using namespace hs;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Fixture {
    Field F = make_field(5);
    GeodesicList list = enumerate_geodesics(F, 30);
    EulerData data = euler_data(list);
    EulerData half = euler_data(list, 450);
};

const Fixture& fx()
{
    static const Fixture f;
    return f;
}

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// cosine transform of g1 by plain Gauss-Kronrod on a long finite interval
cplx fourier_g1(const TestFunctionPair& tf, double r, double U)
{
    return 2.0 * quad([&](double u) { return tf.g1(u) * std::cos(r * u); }, 0.0, U, 1e-13);
}

} // namespace

TEST_CASE("rational test function")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> sr(1.1, 3.0), si(-2.0, 2.0), br(2.0, 6.0), rr(-10.0, 10.0);
    for (int i = 0; i < 10; ++i) {
        TestFunctionPair tf = rational_testfunction(cplx(sr(rng), si(rng)), br(rng), br(rng) + 0.5);
        CHECK(std::abs(tf.c1 + tf.c2 + 1.0) < 1e-14);
        for (int j = 0; j < 20; ++j) {
            double r = rr(rng);
            CHECK(close(tf.h1(r), tf.h1_product(r), 1e-10));
        }
        CHECK(std::abs(tf.g1(1.3) - tf.g1(-1.3)) == 0.0);
        CHECK(close(fourier_g1(tf, 0.7, 400), tf.h1(0.7), 1e-8));
        CHECK(tf.g1_majorant(2.0) >= std::abs(tf.g1(2.0)));
    }
    CHECK_THROWS_AS(rational_testfunction(2.0, 3, 3), Error);
    CHECK_THROWS_AS(rational_testfunction(0.8, 2, 3), Error);
    CHECK_THROWS_AS(rational_testfunction(2.0, 1.5, 3), Error);

    TestFunctionPair g = gaussian_testfunction(0.05);
    CHECK(close(fourier_g1(g, 0.7, 10), g.h1(0.7), 1e-10));
    CHECK(g.h1(cplx(0, 0.5)) == std::exp(0.05 / 4));

    TestFunctionPair p = parse_testfunction("rational:s=2.5-0.25i,beta1=2,beta2=3.5");
    CHECK(p.kind == TestFunctionPair::Kind::rational);
    CHECK(p.s == cplx(2.5, -0.25));
    CHECK(p.beta2 == 3.5);
    CHECK(parse_testfunction("gaussian:beta=0.05").beta == 0.05);
    CHECK(parse_testfunction(p.describe()).s == p.s);
    CHECK_THROWS_AS(parse_testfunction("gaussian:width=2"), Error);
    CHECK_THROWS_AS(parse_testfunction("cauchy:beta=2"), Error);
    CHECK_THROWS_AS(parse_testfunction("gaussian:beta=abc"), Error);
}

TEST_CASE("complex parsing")
{
    CHECK(parse_complex("2") == cplx(2, 0));
    CHECK(parse_complex("-1.5") == cplx(-1.5, 0));
    CHECK(parse_complex("2.0+0.5i") == cplx(2, 0.5));
    CHECK(parse_complex("1-i") == cplx(1, -1));
    CHECK(parse_complex("0.5i") == cplx(0, 0.5));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("1e-3+2e1i") == cplx(1e-3, 20));
    cplx z(0.1, -1.0 / 3);
    CHECK(parse_complex(format_complex(z)) == z);
    CHECK_THROWS_AS(parse_complex("two"), Error);
    CHECK_THROWS_AS(parse_complex(""), Error);
}

TEST_CASE("double difference geometric side")
{
    const auto& f = fx();
    TestFunctionPair g = gaussian_testfunction(0.05);
    for (int m : {4, 6, 8}) {
        GeomSideBreakdown b = geom_side_double_difference(m, g, f.F, f.data);
        CHECK(b.par_sct_term == cplx(0, 0));
        CHECK(std::fabs(b.total.imag()) <= 1e-9);
        CHECK(b.total == b.identity_term + b.elliptic_term + b.hyp_ell_term + b.par_sct_term + b.hyp2_sct_term);
    }
    GeomSideBreakdown b2 = geom_side_double_difference(2, g, f.F, f.data);
    CHECK(b2.spectral_constant == -2.0 * std::exp(0.05 / 4));
    CHECK(b2.par_sct_term.real() == doctest::Approx(-2 * f.F.log_eps / std::sqrt(4 * pi * 0.05)));
    CHECK(std::fabs(b2.total.imag()) <= 1e-9);
    // identity term against a direct integral over the line
    double direct = quad([](double r) { return r * std::exp(-0.05 * r * r) * std::tanh(pi * r); }, -60.0, 60.0, 1e-13);
    CHECK(b2.identity_term.real() == doctest::Approx(direct / 30).epsilon(1e-10));

    // weight symmetry of the double difference
    for (int m : {4, 6}) {
        GeomSideBreakdown a = geom_side_double_difference(m, g, f.F, f.data);
        GeomSideBreakdown c = geom_side_double_difference(4 - m, g, f.F, f.data);
        CHECK(close(a.total, c.total, 1e-12));
    }

    // not enough classes for a wide Gaussian
    GeodesicList small = enumerate_geodesics(f.F, 4);
    try {
        geom_side_double_difference(2, gaussian_testfunction(3.0), f.F, euler_data(small));
        FAIL("truncation accepted");
    } catch (const Error& e) {
        CHECK(e.status() == Status::budget);
        CHECK(std::string(e.what()).find("are required") != std::string::npos);
    }
}

TEST_CASE("difference geometric side")
{
    const auto& f = fx();
    TestFunctionPair g = gaussian_testfunction(0.08);
    for (int m : {2, 4, 6}) {
        GeomSideBreakdown d = geom_side_difference(m, g, f.F, f.data);
        double direct = quad([](double r) { return r * std::exp(-0.08 * r * r) * std::tanh(pi * r); }, -50.0, 50.0, 1e-13);
        CHECK(d.identity_term.real() == doctest::Approx((m - 1) * direct / 60).epsilon(1e-10));
        CHECK(std::fabs(d.total.imag()) <= 1e-9);

        // unit series: partial sum with the stated number of terms
        const double le = f.F.log_eps, eps = std::exp(le);
        int k0 = static_cast<int>(std::ceil(50 / ((m - 1) * le)));
        double partial = 0;
        for (int k = 1; k <= k0; ++k) partial += g.g1(2 * k * le).real() * std::pow(eps, -k * (m - 1));
        CHECK(d.hyp2_sct_term.real() == doctest::Approx(-2 * le * partial).epsilon(1e-15));

        // reflection m -> 2 - m
        GeomSideBreakdown r = geom_side_difference(2 - m, g, f.F, f.data);
        CHECK(close(r.total, -d.total, 1e-12));
        // two differences make the double difference
        GeomSideBreakdown d2 = geom_side_difference(m - 2, g, f.F, f.data);
        GeomSideBreakdown dd = geom_side_double_difference(m, g, f.F, f.data);
        CHECK(close(d.total - d2.total, dd.total, 1e-12));
        CHECK(close(d.elliptic_term - d2.elliptic_term, dd.elliptic_term, 1e-12));
        CHECK(close(d.hyp_ell_term - d2.hyp_ell_term, dd.hyp_ell_term, 1e-12));
    }
    // conjugate test functions give conjugate totals
    TestFunctionPair a = rational_testfunction(cplx(2.2, 0.7), 2.5, 4), b = rational_testfunction(cplx(2.2, -0.7), 2.5, 4);
    GeomSideBreakdown da = geom_side_difference(4, a, f.F, f.data), db = geom_side_difference(-2, b, f.F, f.data);
    CHECK(close(da.total, -std::conj(db.total), 1e-12));
    CHECK_THROWS_AS(geom_side_difference(4, g, f.F, f.data, 0.0), Error);
    CHECK_THROWS_AS(geom_side_difference(3, g, f.F, f.data), Error);
}

TEST_CASE("integral form against the digamma form")
{
    const auto& f = fx();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> sr(1.2, 3.0), si(-3.0, 3.0), br(2.0, 6.0);
    for (int m : {2, 4, 6}) {
        for (int i = 0; i < 5; ++i) {
            double b1 = br(rng);
            TestFunctionPair tf = rational_testfunction(cplx(sr(rng), si(rng)), b1, b1 + 0.3 + br(rng));
            GeomSideBreakdown lhs = geom_side_double_difference(m, tf, f.F, f.data);
            GeomSideBreakdown rhs = double_difference_closed_form(m, tf, f.F, f.data);
            CHECK(close(lhs.identity_term, rhs.identity_term, 1e-7));
            CHECK(close(lhs.elliptic_term, rhs.elliptic_term, 1e-7));
            CHECK(close(lhs.hyp_ell_term, rhs.hyp_ell_term, 1e-7));
            CHECK(close(lhs.par_sct_term, rhs.par_sct_term, 1e-7));
            CHECK(close(lhs.hyp2_sct_term, rhs.hyp2_sct_term, 1e-7));
            CHECK(close(lhs.total, rhs.total, 1e-7));
        }
    }
}

TEST_CASE("truncation stability")
{
    const auto& f = fx();
    TestFunctionPair tf = rational_testfunction(cplx(2.0, 0.5), 2.5, 4.0);
    GeomSideBreakdown a = geom_side_double_difference(4, tf, f.F, f.half);
    GeomSideBreakdown b = geom_side_double_difference(4, tf, f.F, f.data);
    CHECK(std::abs(a.hyp_ell_term - b.hyp_ell_term) <= a.he_tail_bound);
    CHECK(b.he_tail_bound < a.he_tail_bound);
    CHECK(a.identity_term == b.identity_term);
    CHECK(a.hyp2_sct_term == b.hyp2_sct_term);
}

TEST_CASE("heat expansion")
{
    const auto& f = fx();
    // far inside the asymptotic regime the fit recovers both coefficients
    HeatFit fine = heat_asymptotic_check(f.F, {0.02, 0.01, 0.005, 0.0025}, f.data);
    CHECK(fine.a_target == doctest::Approx(1.0 / 30));
    CHECK(fine.b_target == doctest::Approx(-2 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(4 * pi)));
    CHECK(std::fabs(fine.a_rel_err) < 0.02);
    CHECK(std::fabs(fine.b_rel_err) < 0.05);
    CHECK(fine.condition < 1e6);
    for (size_t i = 0; i < fine.betas.size(); ++i) CHECK(fine.totals[i] == fine.parts[i].total.real());
    CHECK_THROWS_AS(heat_asymptotic_check(f.F, {0.1, 0.05}, f.data), Error);
    CHECK_THROWS_AS(heat_asymptotic_check(f.F, {0.3, 0.1, 0.05}, f.data), Error);
    CHECK_THROWS_AS(heat_asymptotic_check(f.F, {0.1, 0.1, 0.1}, f.data), Error);
}
