#include "field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace hs {

const std::vector<int>& supported_discriminants()
{
    static const std::vector<int> table = {5,  8,  12, 13, 17, 21, 24, 28, 29, 33, 37, 41, 44,
                                           53, 56, 57, 61, 69, 73, 76, 77, 88, 89, 92, 93, 97};
    return table;
}

int class_number_by_forms(int D)
{
    if (!is_fundamental_discriminant(D)) fail_validation("not a fundamental discriminant: " + std::to_string(D));
    const i64 s = isqrt(D);
    struct F {
        i64 a, b, c;
        bool operator<(const F& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
    };
    auto reduced = [&](i64 a, i64 b) {
        // 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b, tested exactly
        i64 two_a = 2 * std::llabs(a);
        if (b <= 0 || b > s) return false;
        bool lower = (two_a + b > s);                 // 2|a| + b > sqrt D
        bool upper = (two_a - b <= 0) || (static_cast<i128>(two_a - b) * (two_a - b) < D); // 2|a| - b < sqrt D
        return lower && upper;
    };
    std::set<F> forms;
    for (i64 b = 1; b <= s; ++b) {
        if ((b - D) % 2 != 0) continue;
        i64 ac = (b * b - D) / 4;
        for (i64 a = 1; a <= -ac; ++a) {
            if (ac % a != 0) continue;
            for (i64 sa : {a, -a}) {
                i64 c = ac / sa;
                if (gcd64(gcd64(sa, b), c) != 1) continue;
                if (reduced(sa, b)) forms.insert(F{sa, b, c});
            }
        }
    }
    std::set<F> seen;
    int cycles = 0;
    for (const F& f0 : forms) {
        if (seen.count(f0)) continue;
        ++cycles;
        F f = f0;
        while (!seen.count(f)) {
            seen.insert(f);
            i64 m = 2 * std::llabs(f.c);
            i64 b2 = s - mod_floor(s + f.b, m);
            F g{f.c, b2, (b2 * b2 - D) / (4 * f.c)};
            f = g;
        }
    }
    int eps_norm = static_cast<int>(fundamental_unit(D).norm());
    return eps_norm == -1 ? cycles : cycles / 2;
}

Rational zeta_minus_one_siegel(int D)
{
    i64 total = 0;
    for (i64 b = -isqrt(D); b * b < D; ++b) {
        if (mod_floor(b - D, 2) != 0) continue;
        i64 n = (D - b * b) / 4;
        i64 sigma = 0;
        for (i64 k = 1; k <= n; ++k)
            if (n % k == 0) sigma += k;
        total += sigma;
    }
    return Rational(total, 60);
}

Rational bernoulli_b2_chi(int D)
{
    Rational sum(0);
    for (i64 a = 1; a <= D; ++a) {
        int chi = kronecker(D, a);
        if (chi == 0) continue;
        Rational x(a, D);
        sum += Rational(chi) * (x * x - x + Rational(1, 6));
    }
    return sum * Rational(D);
}

Rational zeta_minus_one_bernoulli(int D)
{
    Rational zeta_riemann(-1, 12);
    Rational l_value = -bernoulli_b2_chi(D) / Rational(2);
    return zeta_riemann * l_value;
}

std::string rational_str(const Rational& r)
{
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

i64 default_elliptic_height(int D) { return std::max<i64>(60, 6 * static_cast<i64>(D)); }

Field make_field(int D, i64 elliptic_height)
{
    if (!is_fundamental_discriminant(D)) fail_validation("not a fundamental discriminant: " + std::to_string(D));
    const auto& table = supported_discriminants();
    if (std::find(table.begin(), table.end(), D) == table.end()) {
        if (D > 100) fail_validation("discriminant " + std::to_string(D) + " is outside the supported table (D <= 100)");
        int h = class_number_by_forms(D);
        fail_validation("unsupported discriminant " + std::to_string(D) + ": class number " + std::to_string(h));
    }
    Field F;
    static_cast<Ring&>(F) = make_ring(D);
    F.zeta_minus_one = zeta_minus_one_siegel(D);
    if (F.zeta_minus_one != zeta_minus_one_bernoulli(D))
        fail_invariant("zeta_K(-1) divisor sum disagrees with the Bernoulli route");
    F.height_bound = elliptic_height > 0 ? elliptic_height : default_elliptic_height(D);
    F.elliptic = enumerate_elliptic(F, F.height_bound);
    F.census = census_of(F.elliptic);
    Rational E = F.zeta_minus_one * Rational(2);
    for (const auto& e : F.elliptic) E += Rational(e.nu - 1, e.nu);
    F.euler_char = E;
    if (E.denominator() != 1 || E.numerator() <= 0)
        fail_invariant("Euler characteristic " + rational_str(E) + " is not a positive integer; elliptic census incomplete");
    return F;
}

nlohmann::json Field::to_json() const
{
    nlohmann::json j;
    j["D"] = D;
    j["eps"] = {eps.a, eps.b};
    j["eps_norm"] = eps_norm;
    j["regulator"] = log_eps;
    j["zeta_minus_one"] = rational_str(zeta_minus_one);
    nlohmann::json census_j = nlohmann::json::array();
    for (const auto& c : census) census_j.push_back({c.nu, c.twist, c.count});
    j["elliptic_census"] = census_j;
    std::map<std::string, int> by_order;
    for (const auto& c : census) by_order[std::to_string(c.nu)] += c.count;
    j["census_by_order"] = by_order;
    j["omega"] = omega_str(D);
    j["euler_char"] = euler_char.numerator();
    j["elliptic_height_bound"] = height_bound;
    return j;
}

} // namespace hs
