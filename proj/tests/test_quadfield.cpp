#include "doctest.h"

#include <chrono>
#include <map>
#include <random>
#include <set>

#include "field.hpp"

using namespace hs;

namespace {

// Smallest solution of x^2 - D y^2 = +-4 with y > 0, written as a + b*w.
QuadInt pell_unit(int D)
{
    for (i64 y = 1;; ++y) {
        for (i64 r : {-4, 4}) {
            i64 x2 = D * y * y + r;
            i64 x = isqrt(x2);
            if (x * x != x2) continue;
            if (D % 4 == 1) return QuadInt((x - y) / 2, y, D);
            return QuadInt(x / 2, y, D);
        }
    }
}

// Proper SL2(Z) classes of forms of discriminant D counted by joining forms in
// a coefficient box under x -> x + y and (x, y) -> (-y, x).
int brute_force_narrow_class_number(int D, i64 box)
{
    std::map<std::array<i64, 3>, int> index;
    std::vector<std::array<i64, 3>> forms;
    for (i64 a = -box; a <= box; ++a)
        for (i64 b = -box; b <= box; ++b) {
            if (a == 0) continue;
            i64 num = b * b - D;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < -box || c > box) continue;
            if (gcd64(gcd64(a, b), c) != 1) continue;
            index[{a, b, c}] = static_cast<int>(forms.size());
            forms.push_back({a, b, c});
        }
    std::vector<int> parent(forms.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (size_t i = 0; i < forms.size(); ++i) {
        auto [a, b, c] = forms[i];
        std::array<std::array<i64, 3>, 3> nb = {{{a, b + 2 * a, a + b + c}, {a, b - 2 * a, a - b + c}, {c, -b, a}}};
        for (auto& f : nb) {
            auto it = index.find(f);
            if (it != index.end()) parent[find(static_cast<int>(i))] = find(it->second);
        }
    }
    std::set<int> roots;
    for (size_t i = 0; i < forms.size(); ++i) roots.insert(find(static_cast<int>(i)));
    return static_cast<int>(roots.size());
}

} // namespace

TEST_CASE("quadratic integer arithmetic")
{
    for (int D : {5, 8, 12, 13}) {
        QuadInt w(0, 1, D);
        double w1 = embed(w, 1), w2 = embed(w, 2);
        CHECK(embed(w * w, 1) == doctest::Approx(w1 * w1));
        CHECK(embed(w * w, 2) == doctest::Approx(w2 * w2));
        CHECK(w1 > w2);
        std::mt19937_64 rng(D);
        std::uniform_int_distribution<int> dist(-50, 50);
        for (int i = 0; i < 50; ++i) {
            QuadInt x(dist(rng), dist(rng), D), y(dist(rng), dist(rng), D);
            CHECK((x * y).norm() == x.norm() * y.norm());
            CHECK((x * y).conj() == x.conj() * y.conj());
            CHECK(x.conj().conj() == x);
            CHECK(sign_embed(x, 1) == (embed(x, 1) > 0 ? 1 : (x.is_zero() ? 0 : -1)));
            CHECK(parse_quadint(x.str(), D) == x);
            if (!y.is_zero()) CHECK(*exact_div(x * y, y) == x);
        }
    }
    CHECK_THROWS_AS(QuadInt(1, 1, 5) + QuadInt(1, 1, 8), Error);
    CHECK(parse_quadint("2+1*w", 5) == QuadInt(2, 1, 5));
    CHECK(parse_quadint("-3-4*w", 5) == QuadInt(-3, -4, 5));
    CHECK(parse_quadint("7", 5) == QuadInt(7, 0, 5));
}

TEST_CASE("fundamental units")
{
    CHECK(fundamental_unit(5) == QuadInt(0, 1, 5));  // (1+sqrt5)/2
    CHECK(fundamental_unit(5).norm() == -1);
    CHECK(fundamental_unit(8) == QuadInt(1, 1, 8));  // 1+sqrt2
    CHECK(fundamental_unit(12) == QuadInt(2, 1, 12)); // 2+sqrt3
    for (int D : supported_discriminants()) CHECK(fundamental_unit(D) == pell_unit(D));
}

TEST_CASE("ideals and residues")
{
    Ring R = make_ring(5);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dist(-20, 20);
    for (int i = 0; i < 40; ++i) {
        QuadInt c(dist(rng), dist(rng), 5);
        if (c.is_zero()) continue;
        Ideal I = Ideal::generated_by({c});
        CHECK(I.norm() == std::llabs(c.norm()));
        std::set<QuadInt> seen;
        I.for_each_residue([&](const QuadInt& r) {
            CHECK(I.reduce(r) == r);
            seen.insert(r);
        });
        CHECK(static_cast<i64>(seen.size()) == I.norm());
        QuadInt x(dist(rng), dist(rng), 5);
        CHECK(I.contains(x - I.reduce(x)));
        CHECK(I.contains(c * x));
        CHECK(R.generator(I) == R.unit_reduce(c));
    }
    CHECK(R.gcd({R.make(6), R.make(4)}) == R.make(2));
}

TEST_CASE("unit normalisation is invariant under units")
{
    for (int D : {5, 8, 12, 13}) {
        Ring R = make_ring(D);
        std::mt19937_64 rng(D + 11);
        std::uniform_int_distribution<int> dist(-30, 30);
        std::uniform_int_distribution<int> kd(-3, 3);
        for (int i = 0; i < 40; ++i) {
            QuadInt x(dist(rng), dist(rng), D);
            if (x.is_zero()) continue;
            int k = kd(rng);
            CHECK(R.unit_reduce(x * R.eps_pow(k)) == R.unit_reduce(x));
            CHECK(R.unit_reduce(-x) == R.unit_reduce(x));
            CHECK(R.square_class_reduce(x * R.eps_pow(2 * k)) == R.square_class_reduce(x));
            double ratio = std::fabs(embed(R.unit_reduce(x), 1) / embed(R.unit_reduce(x), 2));
            CHECK(ratio >= 1 - 1e-12);
            CHECK(ratio < std::exp(2 * R.log_eps) * (1 + 1e-12));
        }
    }
}

TEST_CASE("integer square roots")
{
    Ring R = make_ring(5);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dist(-40, 40);
    for (int i = 0; i < 50; ++i) {
        QuadInt x(dist(rng), dist(rng), 5);
        auto r = integer_sqrt(x * x);
        REQUIRE(r.has_value());
        CHECK((*r == x || *r == -x));
    }
    CHECK_FALSE(integer_sqrt(R.make(2)).has_value());
    CHECK_FALSE(integer_sqrt(R.w()).has_value());
}

TEST_CASE("zeta_K(-1) by two routes")
{
    CHECK(zeta_minus_one_siegel(5) == Rational(1, 30));
    CHECK(zeta_minus_one_siegel(8) == Rational(1, 12));
    CHECK(zeta_minus_one_siegel(12) == Rational(1, 6));
    CHECK(-bernoulli_b2_chi(5) / Rational(2) == Rational(-2, 5));
    for (int D : supported_discriminants()) CHECK(zeta_minus_one_siegel(D) == zeta_minus_one_bernoulli(D));
}

TEST_CASE("class-number-one table")
{
    std::vector<int> computed;
    for (int D = 5; D <= 100; ++D)
        if (is_fundamental_discriminant(D) && class_number_by_forms(D) == 1) computed.push_back(D);
    CHECK(computed == supported_discriminants());
    // narrow class numbers against a box search
    for (int D : {5, 8, 12, 40, 60, 65, 85}) {
        int eps_norm = static_cast<int>(fundamental_unit(D).norm());
        int narrow = class_number_by_forms(D) * (eps_norm == -1 ? 1 : 2);
        CHECK(brute_force_narrow_class_number(D, 40) == narrow);
    }
    CHECK(class_number_by_forms(40) == 2);
}

TEST_CASE("field construction")
{
    auto t0 = std::chrono::steady_clock::now();
    for (int D : {5, 8, 12}) {
        Field F = make_field(D);
        CHECK(F.euler_char == Rational(4));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 3.0);

    try {
        make_field(40);
        FAIL("D=40 accepted");
    } catch (const Error& e) {
        CHECK(e.status() == Status::validation);
        CHECK(std::string(e.what()).find("class number 2") != std::string::npos);
    }
    CHECK_THROWS_AS(make_field(7), Error);
    CHECK_THROWS_AS(make_field(20), Error);
    CHECK_THROWS_AS(make_field(101), Error);

    Field F = make_field(5);
    auto j = F.to_json();
    CHECK(j["zeta_minus_one"] == "1/30");
    CHECK(j["euler_char"] == 4);
    CHECK(j["eps"][0] == 0);
    CHECK(j["eps"][1] == 1);
}
