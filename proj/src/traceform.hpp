#pragma once

#include "json.hpp"

#include <string>
#include <vector>

#include "zetafun.hpp"

namespace hs {

struct TestFunctionPair {
    enum class Kind { gaussian, rational };
    Kind kind = Kind::gaussian;
    double beta = 0;                 // Gaussian width
    cplx s;                          // rational: spectral parameter
    double beta1 = 0, beta2 = 0;
    cplx c1, c2;                     // c1 + c2 = -1

    cplx h1(cplx r) const;
    cplx h1_product(cplx r) const;   // rational: the same function as one fraction
    cplx g1(double u) const;
    // Monotone majorant of |g1(v)| for |v| >= u.
    double g1_majorant(double u) const;
    // e^(a|u|) g1_majorant(u), evaluated without overflow
    double g1_majorant_weighted(double u, double a) const;
    std::string describe() const;
};

TestFunctionPair gaussian_testfunction(double beta);
TestFunctionPair rational_testfunction(cplx s, double beta1, double beta2);
// "gaussian:beta=0.05" or "rational:s=2.5+0.3i,beta1=2,beta2=3"
TestFunctionPair parse_testfunction(const std::string& spec);

struct GeomSideBreakdown {
    cplx identity_term, elliptic_term, hyp_ell_term, par_sct_term, hyp2_sct_term;
    cplx total;
    cplx spectral_constant; // -2 h1(i/2) on the spectral side when m = 2
    double he_tail_bound = 0;
    int he_terms = 0;
    int eps_terms = 0;
    void sum_parts();
    nlohmann::json to_json() const;
};

struct TraceOptions {
    double he_tol = 1e-10; // Gaussian runs fail when the class tail exceeds this
};

// Geometric side of the double difference for weights (0,m), (0,m-2), (0,m-4).
GeomSideBreakdown geom_side_double_difference(int m, const TestFunctionPair& tf, const Field& F, const EulerData& data,
                                              const TraceOptions& opt = {});

// Geometric side of the difference (0,m) - (0,m-2), per unit h2(i(m-1)/2).
// A zero weight is rejected since the formula divides through by it.
GeomSideBreakdown geom_side_difference(int m, const TestFunctionPair& tf, const Field& F, const EulerData& data,
                                       cplx h2_weight = 1.0, const TraceOptions& opt = {});

// The same families written with digamma, Z'/Z and unit-zeta log derivatives
// for the rational test function, m >= 2.
GeomSideBreakdown double_difference_closed_form(int m, const TestFunctionPair& tf, const Field& F, const EulerData& data);

struct HeatFit {
    std::vector<double> betas;
    std::vector<double> totals;
    std::vector<GeomSideBreakdown> parts;
    double a = 0, b = 0, c = 0;   // a / beta + b / sqrt(beta) + c
    double a_target = 0, b_target = 0;
    double a_rel_err = 0, b_rel_err = 0;
    double condition = 0;
    double max_residual = 0;
    bool a_ok = false, b_ok = false; // 2% and 5%
    nlohmann::json to_json() const;
};

HeatFit heat_asymptotic_check(const Field& F, const std::vector<double>& betas, const EulerData& data);

} // namespace hs
