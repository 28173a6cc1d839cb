#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace hs {

using i64 = std::int64_t;
using i128 = __int128;
using Rational = boost::rational<i64>;

i64 add_checked(i64 x, i64 y);
i64 mul_checked(i64 x, i64 y);
i64 floor_div(i64 x, i64 y);
i64 mod_floor(i64 x, i64 y);
i64 isqrt(i64 n);
i64 gcd64(i64 x, i64 y);

bool is_squarefree(i64 n);
bool is_fundamental_discriminant(i64 D);
int kronecker(i64 D, i64 n);

// Element a + b*w of the maximal order of Q(sqrt D), where w = (1+sqrt D)/2 for
// D = 1 mod 4 and w = sqrt(D/4) otherwise. The first embedding sends sqrt D to
// the positive root, the second to the negative root.
struct QuadInt {
    i64 a = 0;
    i64 b = 0;
    int D = 0;

    QuadInt() = default;
    QuadInt(i64 a_, i64 b_, int D_) : a(a_), b(b_), D(D_) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const QuadInt& o) const { return a == o.a && b == o.b && D == o.D; }
    bool operator!=(const QuadInt& o) const { return !(*this == o); }
    bool operator<(const QuadInt& o) const { return a != o.a ? a < o.a : b < o.b; }

    QuadInt operator-() const;
    QuadInt operator+(const QuadInt& o) const;
    QuadInt operator-(const QuadInt& o) const;
    QuadInt operator*(const QuadInt& o) const;
    QuadInt operator*(i64 k) const;

    QuadInt conj() const;
    i64 norm() const;
    i64 trace() const;

    // w^2 = wp*w + wq
    i64 wp() const { return (D % 4 == 1) ? 1 : 0; }
    i64 wq() const { return (D % 4 == 1) ? (D - 1) / 4 : D / 4; }

    std::string str() const;
};

QuadInt parse_quadint(const std::string& text, int D);
// "w=(1+sqrt(5))/2" or "w=sqrt(2)"
std::string omega_str(int D);

// Exact sign of the given embedding (1 or 2).
int sign_embed(const QuadInt& x, int which);
double embed(const QuadInt& x, int which);
// |x| < |y| in the given embedding, exactly.
bool abs_less(const QuadInt& x, const QuadInt& y, int which);

// y | x, returning x / y when it lies in the order.
std::optional<QuadInt> exact_div(const QuadInt& x, const QuadInt& y);
bool divides(const QuadInt& y, const QuadInt& x);
std::optional<QuadInt> integer_sqrt(const QuadInt& x);
QuadInt nearest_element(double e1, double e2, int D);

// Ideal of the maximal order in Hermite normal form: Z-basis (n1, 0), (m, n2)
// in coordinates (a, b), with 0 <= m < n1.
struct Ideal {
    i64 n1 = 1;
    i64 m = 0;
    i64 n2 = 1;
    int D = 0;

    static Ideal generated_by(const std::vector<QuadInt>& gens);
    i64 norm() const { return n1 * n2; }
    bool is_unit() const { return n1 == 1 && n2 == 1; }
    bool contains(const QuadInt& x) const;
    QuadInt reduce(const QuadInt& x) const;
    bool operator==(const Ideal& o) const { return n1 == o.n1 && m == o.m && n2 == o.n2; }

    template <typename F>
    void for_each_residue(F&& f) const {
        for (i64 y = 0; y < n2; ++y)
            for (i64 x = 0; x < n1; ++x) f(QuadInt(x, y, D));
    }
};

// Arithmetic context of the order: fundamental unit and unit normalisation.
struct Ring {
    int D = 0;
    double sqrtD = 0;
    double w1 = 0;
    double w2 = 0;
    QuadInt eps;
    QuadInt eps_inv;
    int eps_norm = 0;
    double log_eps = 0;

    QuadInt make(i64 a, i64 b = 0) const { return QuadInt(a, b, D); }
    QuadInt one() const { return make(1); }
    QuadInt w() const { return make(0, 1); }
    QuadInt eps_pow(i64 k) const;

    // Multiply by a unit so that |x|/|x'| lies in [1, eps^2) (all units, sign
    // fixed by a positive first embedding), or in [eps^-2, eps^2) when only
    // squares of units are allowed (sign kept).
    QuadInt unit_reduce(const QuadInt& x) const;
    QuadInt square_class_reduce(const QuadInt& x) const;
    // Same, also returning the power k with result = x * eps^k.
    QuadInt square_class_reduce(const QuadInt& x, i64& k) const;

    bool is_unit(const QuadInt& x) const { return x.norm() == 1 || x.norm() == -1; }
    // Generator of a principal ideal, normalised by unit_reduce.
    QuadInt generator(const Ideal& I) const;
    QuadInt gcd(const std::vector<QuadInt>& xs) const;

    // All elements with first embedding in [l1, h1] and second in [l2, h2].
    std::vector<QuadInt> box(double l1, double h1, double l2, double h2) const;
    // Nonzero x with |N(x)| <= max_norm and x == square_class_reduce(x).
    std::vector<QuadInt> square_class_reps(i64 max_norm) const;
};

QuadInt fundamental_unit(int D);
Ring make_ring(int D);

} // namespace hs
