#include "specfun.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "error.hpp"
#include "quadint.hpp"

namespace hs {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLogGlaisher = 0.24875447703378421; // 1/12 - zeta'(-1)

double bern(int n2) { return boost::math::bernoulli_b2n<double>(n2 / 2); }

void check_pole(cplx z, const char* what)
{
    if (z.imag() == 0 && z.real() <= 0 && z.real() == std::round(z.real()))
        fail_validation(std::string(what) + ": pole at non-positive integer " + std::to_string(z.real()));
}

int shift_for(cplx z, double target)
{
    return z.real() >= target ? 0 : static_cast<int>(std::ceil(target - z.real()));
}

} // namespace

cplx log_gamma(cplx z)
{
    check_pole(z, "log_gamma");
    const int n = shift_for(z, 15);
    cplx w = z + static_cast<double>(n);
    cplx sum = (w - 0.5) * std::log(w) - w + 0.5 * kLog2Pi;
    cplx wk = w, w2 = w * w;
    for (int k = 1; k <= 10; ++k) {
        sum += bern(2 * k) / (2.0 * k * (2 * k - 1)) / wk;
        wk *= w2;
    }
    for (int k = 0; k < n; ++k) sum -= std::log(z + static_cast<double>(k));
    return sum;
}

cplx digamma(cplx z)
{
    check_pole(z, "digamma");
    const int n = shift_for(z, 15);
    cplx w = z + static_cast<double>(n);
    cplx sum = std::log(w) - 0.5 / w;
    cplx w2 = w * w, wk = w2;
    for (int k = 1; k <= 10; ++k) {
        sum -= bern(2 * k) / (2.0 * k) / wk;
        wk *= w2;
    }
    for (int k = 0; k < n; ++k) sum -= 1.0 / (z + static_cast<double>(k));
    return sum;
}

cplx log_barnes_g(cplx z)
{
    check_pole(z, "log_barnes_g");
    // log G(w+1) asymptotic series at w = z + n - 1, then G(z+1) = Gamma(z) G(z) downwards
    const int n = shift_for(z, 21);
    cplx w = z + static_cast<double>(n) - 1.0;
    cplx lw = std::log(w);
    cplx sum = 0.5 * w * w * lw - 0.75 * w * w + 0.5 * w * kLog2Pi - kLogGlaisher + 1.0 / 12 - lw / 12.0;
    cplx w2 = w * w, wk = w2;
    for (int k = 1; k <= 10; ++k) {
        sum += bern(2 * k + 2) / (4.0 * k * (k + 1)) / wk;
        wk *= w2;
    }
    for (int k = 0; k < n; ++k) sum -= log_gamma(z + static_cast<double>(k));
    return sum;
}

cplx log_gamma2(cplx z) { return 0.5 * (z - 1.0) * kLog2Pi - log_barnes_g(z); }

cplx log_xi_ratio(cplx s)
{
    cplx num = log_gamma2(s + 1.0) + log_gamma2(s + 2.0) + log_gamma2(1.0 - s) + log_gamma2(2.0 - s);
    cplx den = log_gamma2(s) + log_gamma2(s + 1.0) + log_gamma2(-s) + log_gamma2(1.0 - s);
    return num - den;
}

cplx xi_ratio(cplx s) { return std::exp(log_xi_ratio(s)); }

cplx log_g_nu(int nu, cplx s)
{
    cplx sum = 0;
    for (int l = 0; l < nu; ++l)
        sum += (static_cast<double>(nu - 1 - 2 * l) / nu) * log_gamma((s + static_cast<double>(l)) / static_cast<double>(nu));
    return sum;
}

cplx hurwitz_zeta(cplx s, double a)
{
    if (s == cplx(1, 0)) fail_validation("hurwitz_zeta: pole at s = 1");
    if (!(a > 0)) fail_validation("hurwitz_zeta: parameter must be positive");
    // Euler-Maclaurin with N head terms and M Bernoulli corrections
    // fewer head terms for Re(s) < 0 where the partial sums cancel heavily
    const int N = (s.real() > 0 ? 30 : 12) + static_cast<int>(std::abs(s));
    const int M = 20;
    // long double accumulation: for Re(s) < 0 the head and the corrections cancel
    using lcplx = std::complex<long double>;
    const lcplx ls(s.real(), s.imag());
    lcplx sum = 0;
    for (int k = 0; k < N; ++k) sum += std::exp(-ls * std::log(static_cast<long double>(k) + a));
    const long double x = N + static_cast<long double>(a);
    const long double lx = std::log(x);
    sum += std::exp((1.0L - ls) * lx) / (ls - 1.0L) + 0.5L * std::exp(-ls * lx);
    lcplx rising = ls;           // s (s+1) ... (s+2j-2)
    long double fact = 2;        // (2j)!
    lcplx xpow = std::exp(-(ls + 1.0L) * lx);
    for (int j = 1; j <= M; ++j) {
        lcplx term = boost::math::bernoulli_b2n<long double>(j) / fact * rising * xpow;
        sum += term;
        if (std::abs(term) < 1e-20L * std::abs(sum)) break;
        rising *= (ls + (2.0L * j - 1)) * (ls + 2.0L * j);
        fact *= (2.0L * j + 1) * (2.0L * j + 2);
        xpow /= x * x;
    }
    return cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

cplx dirichlet_L(cplx s, int D, LMode mode)
{
    std::vector<int> chi(D + 1);
    for (int a = 1; a <= D; ++a) chi[a] = kronecker(D, a);
    if (mode == LMode::hurwitz) {
        cplx sum = 0;
        for (int a = 1; a <= D; ++a)
            if (chi[a] != 0) sum += static_cast<double>(chi[a]) * hurwitz_zeta(s, static_cast<double>(a) / D);
        return std::exp(-s * std::log(static_cast<double>(D))) * sum;
    }
    if (s.real() <= 1) fail_validation("dirichlet_L direct mode needs Re(s) > 1");
    // whole periods keep the partial sums of chi at zero, so the tail is O(N^(-Re s - 1))
    const long periods = 2000000 / D + 1;
    cplx sum = 0;
    for (long q = periods - 1; q >= 0; --q)
        for (int a = D; a >= 1; --a)
            if (chi[a] != 0) sum += static_cast<double>(chi[a]) * std::exp(-s * std::log(static_cast<double>(q * D + a)));
    return sum;
}

cplx dedekind_zeta(cplx s, int D) { return riemann_zeta(s) * dirichlet_L(s, D); }

double li(double x)
{
    if (!(x >= 2)) fail_validation("li: argument must be at least 2");
    if (x == 2) return 0;
    return boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
}

cplx zeta_eps(cplx s, double log_eps)
{
    cplx den = 1.0 - std::exp(-2.0 * s * log_eps);
    if (std::abs(den) < 1e-14) fail_validation("zeta_eps: pole at s = pi i k / log eps");
    return 1.0 / den;
}

cplx parse_complex(const std::string& text)
{
    static const std::regex num(R"(\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*([ij]))?\s*)");
    static const std::regex pure_imag(R"(\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*)");
    std::smatch m;
    if (std::regex_match(text, m, pure_imag)) {
        double v = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return {0, m[1].str() == "-" ? -v : v};
    }
    if (!text.empty() && std::regex_match(text, m, num) && m[1].matched) {
        double re = std::stod(m[1].str());
        double im = 0;
        if (m[4].matched) {
            im = m[3].matched ? std::stod(m[3].str()) : 1.0;
            if (m[2].str() == "-") im = -im;
        }
        return {re, im};
    }
    fail_validation("cannot parse complex number: '" + text + "'");
}

std::string format_real(double v)
{
    char t[32];
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(t, sizeof t, "%.*g", prec, v);
        if (std::strtod(t, nullptr) == v) return t;
    }
    std::snprintf(t, sizeof t, "%.17g", v);
    return t;
}

std::string format_complex(cplx z)
{
    return format_real(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_real(std::fabs(z.imag())) + "i";
}

} // namespace hs
