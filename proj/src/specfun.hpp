#pragma once

#include <complex>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hs {

using cplx = std::complex<double>;

// Adaptive Gauss-Kronrod on a finite interval; works for real or complex integrands.
template <class F>
auto quad(F f, double a, double b, double tol = 1e-12, double* err = nullptr)
{
    double e = 0;
    auto v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, tol, &e);
    if (err) *err = e;
    return v;
}

// Integral over [a, inf) for integrands with at least exponential decay.
template <class F>
auto quad_to_infinity(F f, double a, double tol = 1e-12)
{
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(f, a, std::numeric_limits<double>::infinity(), tol);
}

// log Gamma continued analytically from the right half plane with the cut on
// the negative real axis (matches the usual "loggamma" branch).
cplx log_gamma(cplx z);
cplx digamma(cplx z);

// Barnes G and the double Gamma Gamma_2(z) = (2 pi)^((z-1)/2) / G(z),
// normalised so Gamma_2(1) = 1 and Gamma_2(z+1) = sqrt(2 pi) Gamma_2(z) / Gamma(z).
cplx log_barnes_g(cplx z);
cplx log_gamma2(cplx z);

// Gamma_2(s+1)Gamma_2(s+2)Gamma_2(1-s)Gamma_2(2-s) / (Gamma_2(s)Gamma_2(s+1)Gamma_2(-s)Gamma_2(1-s))
cplx xi_ratio(cplx s);
// Branch-tracked log of the ratio above, as a sum of log Gamma_2 values.
cplx log_xi_ratio(cplx s);
// log of prod_{l<nu} Gamma((s+l)/nu)^((nu-1-2l)/nu)
cplx log_g_nu(int nu, cplx s);

cplx hurwitz_zeta(cplx s, double a);
cplx riemann_zeta(cplx s);

enum class LMode { hurwitz, direct };
// L(s, chi_D) for the Kronecker character of the fundamental discriminant D.
// Direct mode sums whole periods up to about 2e6 terms and needs Re(s) > 1.
cplx dirichlet_L(cplx s, int D, LMode mode = LMode::hurwitz);
cplx dedekind_zeta(cplx s, int D);

// Offset logarithmic integral: integral of 1/log t over [2, x].
double li(double x);

// "2", "-1.5", "2.5+0.3i", "0.5i", "1-i"
cplx parse_complex(const std::string& text);
// Shortest text that reads back to the same value.
std::string format_real(double v);
std::string format_complex(cplx z);

// (1 - eps^(-2s))^-1 given log eps.
cplx zeta_eps(cplx s, double log_eps);

} // namespace hs
