#include "quadint.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hs {

i64 add_checked(i64 x, i64 y)
{
    i64 r;
    if (__builtin_add_overflow(x, y, &r)) fail_budget("integer overflow in quadratic arithmetic");
    return r;
}

i64 mul_checked(i64 x, i64 y)
{
    i64 r;
    if (__builtin_mul_overflow(x, y, &r)) fail_budget("integer overflow in quadratic arithmetic");
    return r;
}

i64 floor_div(i64 x, i64 y)
{
    i64 q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
}

i64 mod_floor(i64 x, i64 y)
{
    i64 r = x % y;
    if (r < 0) r += (y < 0 ? -y : y);
    return r;
}

i64 isqrt(i64 n)
{
    if (n < 0) fail_validation("isqrt of negative number");
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<i128>(r) * r > n) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

i64 gcd64(i64 x, i64 y)
{
    x = std::llabs(x);
    y = std::llabs(y);
    while (y) {
        i64 t = x % y;
        x = y;
        y = t;
    }
    return x;
}

bool is_squarefree(i64 n)
{
    n = std::llabs(n);
    for (i64 p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return n != 0;
}

bool is_fundamental_discriminant(i64 D)
{
    if (D <= 1) return false;
    if (D % 4 == 1) return is_squarefree(D);
    if (D % 4 != 0) return false;
    i64 m = D / 4;
    return (m % 4 == 2 || m % 4 == 3) && is_squarefree(m);
}

int kronecker(i64 D, i64 n)
{
    if (n <= 0) fail_validation("kronecker symbol needs n >= 1");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        i64 r = mod_floor(D, 8);
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi symbol (D / n) for odd n
    i64 a = mod_floor(D, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

static void same_field(const QuadInt& x, const QuadInt& y)
{
    if (x.D != y.D) fail_validation("mixed-field operands");
}

QuadInt QuadInt::operator-() const { return QuadInt(mul_checked(a, -1), mul_checked(b, -1), D); }

QuadInt QuadInt::operator+(const QuadInt& o) const
{
    same_field(*this, o);
    return QuadInt(add_checked(a, o.a), add_checked(b, o.b), D);
}

QuadInt QuadInt::operator-(const QuadInt& o) const { return *this + (-o); }

QuadInt QuadInt::operator*(const QuadInt& o) const
{
    same_field(*this, o);
    i64 bd = mul_checked(b, o.b);
    i64 ra = add_checked(mul_checked(a, o.a), mul_checked(bd, wq()));
    i64 rb = add_checked(add_checked(mul_checked(a, o.b), mul_checked(b, o.a)), mul_checked(bd, wp()));
    return QuadInt(ra, rb, D);
}

QuadInt QuadInt::operator*(i64 k) const { return QuadInt(mul_checked(a, k), mul_checked(b, k), D); }

QuadInt QuadInt::conj() const { return QuadInt(add_checked(a, mul_checked(b, wp())), -b, D); }

i64 QuadInt::norm() const
{
    i64 t = add_checked(mul_checked(a, a), mul_checked(mul_checked(a, b), wp()));
    return add_checked(t, -mul_checked(mul_checked(b, b), wq()));
}

i64 QuadInt::trace() const { return add_checked(mul_checked(a, 2), mul_checked(b, wp())); }

std::string QuadInt::str() const
{
    std::ostringstream os;
    os << a << (b < 0 ? "-" : "+") << (b < 0 ? -b : b) << "*w";
    return os.str();
}

std::string omega_str(int D)
{
    if (D % 4 == 1 || D % 4 == -3) return "w=(1+sqrt(" + std::to_string(D) + "))/2";
    return "w=sqrt(" + std::to_string(D / 4) + ")";
}

QuadInt parse_quadint(const std::string& text, int D)
{
    // accepts "a", "a+b*w", "a-b*w", "b*w"
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s.empty()) fail_validation("empty quadratic integer");
    auto parse_int = [&](const std::string& t) -> i64 {
        if (t.empty() || t == "+") return 1;
        if (t == "-") return -1;
        size_t pos = 0;
        i64 v = 0;
        try {
            v = std::stoll(t, &pos);
        } catch (...) {
            fail_validation("bad quadratic integer '" + text + "'");
        }
        if (pos != t.size()) fail_validation("bad quadratic integer '" + text + "'");
        return v;
    };
    size_t wpos = s.find("*w");
    if (wpos == std::string::npos) {
        if (s.find('w') != std::string::npos) fail_validation("bad quadratic integer '" + text + "'");
        return QuadInt(parse_int(s), 0, D);
    }
    if (wpos + 2 != s.size()) fail_validation("bad quadratic integer '" + text + "'");
    std::string head = s.substr(0, wpos);
    size_t split = std::string::npos;
    for (size_t i = head.size(); i-- > 1;)
        if (head[i] == '+' || head[i] == '-') {
            split = i;
            break;
        }
    if (split == std::string::npos) return QuadInt(0, parse_int(head), D);
    i64 a = parse_int(head.substr(0, split));
    std::string bs = head.substr(split);
    if (bs.size() > 1 && bs[0] == '+' && bs[1] == '-') bs = bs.substr(1);
    return QuadInt(a, parse_int(bs), D);
}

int sign_embed(const QuadInt& x, int which)
{
    // x = (P + s*b*sqrt(D)) / 2
    i128 P = static_cast<i128>(x.a) * 2 + static_cast<i128>(x.b) * x.wp();
    i128 B = (which == 1) ? x.b : -static_cast<i128>(x.b);
    auto sgn = [](i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    if (B == 0) return sgn(P);
    if (P >= 0 && B >= 0) return 1;
    if (P <= 0 && B <= 0) return -1;
    i128 lhs = P * P;
    i128 rhs = B * B * x.D;
    return (P > 0) ? sgn(lhs - rhs) : sgn(rhs - lhs);
}

double embed(const QuadInt& x, int which)
{
    long double r = std::sqrt(static_cast<long double>(x.D));
    long double P = static_cast<long double>(x.a) * 2 + static_cast<long double>(x.b) * x.wp();
    long double e1 = (P + x.b * r) / 2;
    long double e2 = (P - x.b * r) / 2;
    // recover the smaller embedding from the norm to avoid cancellation
    long double N = static_cast<long double>(x.norm());
    if (std::fabs(e1) < std::fabs(e2)) {
        if (e2 != 0) e1 = N / e2;
    } else if (e1 != 0) {
        e2 = N / e1;
    }
    return static_cast<double>(which == 1 ? e1 : e2);
}

bool abs_less(const QuadInt& x, const QuadInt& y, int which)
{
    return sign_embed(y * y - x * x, which) > 0;
}

std::optional<QuadInt> exact_div(const QuadInt& x, const QuadInt& y)
{
    same_field(x, y);
    if (y.is_zero()) fail_validation("division by zero");
    i64 n = y.norm();
    QuadInt z = x * y.conj();
    if (z.a % n != 0 || z.b % n != 0) return std::nullopt;
    return QuadInt(z.a / n, z.b / n, x.D);
}

bool divides(const QuadInt& y, const QuadInt& x) { return exact_div(x, y).has_value(); }

QuadInt nearest_element(double e1, double e2, int D)
{
    long double r = std::sqrt(static_cast<long double>(D));
    long double b = (static_cast<long double>(e1) - e2) / r;
    long double w1 = (D % 4 == 1) ? (1 + r) / 2 : r / 2;
    long double a = e1 - b * w1;
    return QuadInt(std::llround(a), std::llround(b), D);
}

std::optional<QuadInt> integer_sqrt(const QuadInt& x)
{
    if (x.is_zero()) return x;
    if (sign_embed(x, 1) < 0 || sign_embed(x, 2) < 0) return std::nullopt;
    double r1 = std::sqrt(embed(x, 1));
    double r2 = std::sqrt(embed(x, 2));
    for (double s2 : {r2, -r2}) {
        QuadInt y = nearest_element(r1, s2, x.D);
        for (i64 da = -1; da <= 1; ++da)
            for (i64 db = -1; db <= 1; ++db) {
                QuadInt z(y.a + da, y.b + db, x.D);
                if (z * z == x) return sign_embed(z, 1) < 0 ? -z : z;
            }
    }
    return std::nullopt;
}

Ideal Ideal::generated_by(const std::vector<QuadInt>& gens)
{
    if (gens.empty()) fail_validation("ideal needs a generator");
    Ideal I;
    I.D = gens.front().D;
    i64 n1 = 0, m = 0, n2 = 0;
    bool have_row = false;
    auto add = [&](i64 x, i64 y) {
        if (y == 0) {
            n1 = gcd64(n1, x);
            return;
        }
        if (!have_row) {
            m = x;
            n2 = y;
            have_row = true;
            return;
        }
        // extended gcd on the second coordinate
        i64 r0 = n2, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            i64 q = floor_div(r0, r1);
            i64 r2 = r0 - q * r1;
            i64 s2 = s0 - q * s1;
            i64 t2 = t0 - q * t1;
            r0 = r1; r1 = r2; s0 = s1; s1 = s2; t0 = t1; t1 = t2;
        }
        i64 g = r0;
        i64 nm = add_checked(mul_checked(s0, m), mul_checked(t0, x));
        i64 z = add_checked(mul_checked(y / g, m), -mul_checked(n2 / g, x));
        n1 = gcd64(n1, z);
        m = nm;
        n2 = g;
    };
    for (const QuadInt& g : gens) {
        same_field(g, gens.front());
        QuadInt gw = g * QuadInt(0, 1, g.D);
        add(g.a, g.b);
        add(gw.a, gw.b);
    }
    if (!have_row || n1 == 0) fail_validation("zero ideal");
    if (n2 < 0) {
        n2 = -n2;
        m = -m;
    }
    I.n1 = n1;
    I.n2 = n2;
    I.m = mod_floor(m, n1);
    return I;
}

bool Ideal::contains(const QuadInt& x) const
{
    if (x.b % n2 != 0) return false;
    i64 q = x.b / n2;
    return (x.a - q * m) % n1 == 0;
}

QuadInt Ideal::reduce(const QuadInt& x) const
{
    i64 q = floor_div(x.b, n2);
    i64 b = x.b - q * n2;
    i64 a = add_checked(x.a, -mul_checked(q, m));
    return QuadInt(mod_floor(a, n1), b, D);
}

QuadInt Ring::eps_pow(i64 k) const
{
    QuadInt base = k >= 0 ? eps : eps_inv;
    QuadInt r = one();
    for (i64 i = 0; i < (k >= 0 ? k : -k); ++i) r = r * base;
    return r;
}

static double log_ratio(const QuadInt& x)
{
    return std::log(std::fabs(embed(x, 1))) - std::log(std::fabs(embed(x, 2)));
}

QuadInt Ring::unit_reduce(const QuadInt& x) const
{
    if (x.is_zero()) return x;
    i64 k = static_cast<i64>(std::floor(log_ratio(x) / (2 * log_eps)));
    QuadInt y = x * eps_pow(-k);
    const QuadInt e2 = eps * eps;
    for (int guard = 0; guard < 8; ++guard) {
        if (abs_less(y, y.conj(), 1))
            y = y * eps;
        else if (!abs_less(y, e2 * y.conj(), 1))
            y = y * eps_inv;
        else
            break;
    }
    return sign_embed(y, 1) < 0 ? -y : y;
}

QuadInt Ring::square_class_reduce(const QuadInt& x) const
{
    i64 k;
    return square_class_reduce(x, k);
}

QuadInt Ring::square_class_reduce(const QuadInt& x, i64& k) const
{
    k = 0;
    if (x.is_zero()) return x;
    i64 j = static_cast<i64>(std::floor((log_ratio(x) + 2 * log_eps) / (4 * log_eps)));
    k = -2 * j;
    QuadInt y = x * eps_pow(k);
    const QuadInt e2 = eps * eps;
    const QuadInt ie2 = eps_inv * eps_inv;
    for (int guard = 0; guard < 8; ++guard) {
        if (abs_less(y, ie2 * y.conj(), 1)) {
            y = y * e2;
            k += 2;
        } else if (!abs_less(y, e2 * y.conj(), 1)) {
            y = y * ie2;
            k -= 2;
        } else {
            break;
        }
    }
    return y;
}

std::vector<QuadInt> Ring::box(double l1, double h1, double l2, double h2) const
{
    std::vector<QuadInt> out;
    const double slack = 1e-9;
    i64 bmin = static_cast<i64>(std::ceil((l1 - h2) / sqrtD - slack));
    i64 bmax = static_cast<i64>(std::floor((h1 - l2) / sqrtD + slack));
    for (i64 b = bmin; b <= bmax; ++b) {
        double lo = std::max(l1 - b * w1, l2 - b * w2);
        double hi = std::min(h1 - b * w1, h2 - b * w2);
        i64 amin = static_cast<i64>(std::ceil(lo - slack));
        i64 amax = static_cast<i64>(std::floor(hi + slack));
        for (i64 a = amin; a <= amax; ++a) out.emplace_back(a, b, D);
    }
    return out;
}

std::vector<QuadInt> Ring::square_class_reps(i64 max_norm) const
{
    std::vector<QuadInt> out;
    const double L = std::sqrt(static_cast<double>(max_norm)) * std::exp(log_eps) * 1.001 + 1;
    for (const QuadInt& x : box(-L, L, -L, L)) {
        if (x.is_zero()) continue;
        i64 n = x.norm();
        if (n > max_norm || n < -max_norm) continue;
        if (square_class_reduce(x) == x) out.push_back(x);
    }
    return out;
}

QuadInt Ring::generator(const Ideal& I) const
{
    const i64 N = I.norm();
    const double R = std::sqrt(static_cast<double>(N)) * std::exp(log_eps) * 1.01 + 1;
    for (const QuadInt& x : box(-R, R, -R, R)) {
        if (x.is_zero() || !I.contains(x)) continue;
        i64 n = x.norm();
        if (n == N || n == -N) return unit_reduce(x);
    }
    fail_invariant("no generator found for principal ideal");
}

QuadInt Ring::gcd(const std::vector<QuadInt>& xs) const
{
    std::vector<QuadInt> nz;
    for (const QuadInt& x : xs)
        if (!x.is_zero()) nz.push_back(x);
    if (nz.empty()) return make(0);
    Ideal I = Ideal::generated_by(nz);
    if (I.is_unit()) return one();
    return generator(I);
}

QuadInt fundamental_unit(int D)
{
    if (!is_fundamental_discriminant(D)) fail_validation("not a fundamental discriminant: " + std::to_string(D));
    // continued fraction of theta = -w' = (P + sqrt N) / Q
    const bool one_mod_4 = (D % 4 == 1);
    i64 N = one_mod_4 ? D : D / 4;
    i64 P = one_mod_4 ? -1 : 0;
    i64 Q = one_mod_4 ? 2 : 1;
    const i64 s = isqrt(N);
    i64 p1 = 1, p2 = 0, q1 = 0, q2 = 1;
    for (int step = 0; step < 500; ++step) {
        i64 a = (Q > 0) ? floor_div(P + s, Q) : -(floor_div(P + s, -Q) + 1);
        i64 p = add_checked(mul_checked(a, p1), p2);
        i64 q = add_checked(mul_checked(a, q1), q2);
        p2 = p1; p1 = p;
        q2 = q1; q1 = q;
        QuadInt eta(p, q, D);
        i64 n = eta.norm();
        if ((n == 1 || n == -1) && q > 0) {
            if (sign_embed(eta, 1) < 0) eta = -eta;
            if (sign_embed(eta - QuadInt(1, 0, D), 1) > 0) return eta;
        }
        i64 Pn = a * Q - P;
        i64 Qn = (N - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    fail_budget("fundamental unit not found within continued fraction budget");
}

Ring make_ring(int D)
{
    Ring R;
    R.D = D;
    R.eps = fundamental_unit(D);
    R.sqrtD = std::sqrt(static_cast<double>(D));
    R.w1 = embed(R.w(), 1);
    R.w2 = embed(R.w(), 2);
    R.eps_norm = static_cast<int>(R.eps.norm());
    R.eps_inv = R.eps.conj() * R.eps_norm;
    R.log_eps = std::log(embed(R.eps, 1));
    return R;
}

} // namespace hs
