#pragma once

#include "json.hpp"

#include <string>
#include <vector>

#include "field.hpp"
#include "geodesics.hpp"
#include "specfun.hpp"

namespace hs {

// Primitive hyperbolic-elliptic classes complete up to trunc_norm, plus the
// constant C of the counting bound #{N(p) <= T} <= C li(T) fitted from them.
struct EulerData {
    double trunc_norm = 0;
    double count_const = 0;
    std::vector<GeodesicClass> classes;
};

// trunc_norm defaults to x^2 of the list; asking for more raises a validation error.
EulerData euler_data(const GeodesicList& list, double trunc_norm = 0);

struct ZetaParams {
    cplx s = 2.0;
    int m = 2;
    double trunc_norm = 1e4;
    int trunc_k = 40;
};

struct ZetaValue {
    cplx value;
    cplx log_value;
    double tail_bound = 0; // bound on |log Z - log Z_truncated|
};

ZetaValue selberg_zeta(const ZetaParams& p, const EulerData& data);
cplx selberg_log_deriv(const ZetaParams& p, const EulerData& data);

// Bound on the omitted classes N > X and factors k > K for Re(s) = sigma.
double euler_tail_bound(double sigma, double X, int K, const EulerData& data);

struct RuelleValue {
    cplx ratio;   // Z(s;2) / Z(s+1;2)
    cplx direct;  // prod (1 - N^-s)^-1
    double tail_bound = 0; // combined bound on the log difference
};

RuelleValue ruelle(cplx s, const EulerData& data, double trunc_norm = 1e4, int trunc_k = 40);

struct AlphaRow {
    int nu = 0, twist = 0;
    std::vector<int> alpha, alpha_bar; // indexed by l in [0, nu)
};

struct AlphaTable {
    int m = 2;
    std::vector<AlphaRow> rows; // one per primitive elliptic class
    int beta(size_t j, int k) const;
};

AlphaTable alpha_table(int m, const std::vector<EllipticClassDatum>& elliptic);

// Logs of the completed-zeta factors.
struct CompletedFactors {
    cplx log_id, log_ell, log_par, log_hyp2;
    cplx log_total() const { return log_id + log_ell + log_par + log_hyp2; }
};

CompletedFactors completed_factors(cplx s, int m, const Field& F);
// d/ds of each log factor
CompletedFactors completed_factors_log_deriv(cplx s, int m, const Field& F);

struct LedgerEntry {
    cplx base;            // point, or a in the family a + pi i k / log eps
    bool family = false;
    bool skip_k0 = false; // family over k != 0 only
    int order = 0;        // positive for zeros, negative for poles
    std::string source;
    std::string note;
};

struct DivisorLedger {
    int m = 2;
    int k_max = 0;
    double log_eps = 0;
    std::vector<LedgerEntry> entries;

    // Sum of the orders of all entries at s.
    int order_at(cplx s, double tol = 1e-9) const;
    nlohmann::json to_json() const;
};

DivisorLedger divisor_ledger(int m, const Field& F, int k_max);

// Order of Z_K(s;m) at s = -k from the proof's residue computation.
int order_at_minus_k(int m, const Field& F, int k);

struct RuelleLeading {
    int n0 = 0;
    int euler_char = 0;
    Rational nu_product{1}; // prod nu_j
    double abs_leading = 0;
};

RuelleLeading ruelle_leading(const Field& F);

cplx fe_rhs(cplx s, const Field& F);

struct FeReport {
    double bk2_max_err = 0;    // |Xi(s) + 4 sin^2(pi s)|
    double bk3_max_err = 0;    // G_nu ratio identity, relative
    double parity_max_err = 0; // |RHS(s) - RHS(-s)| / |RHS(s)|
    double zero_order = 0;     // local slope of log|RHS| at s = 0
    double leading_ratio = 0;  // |RHS(s) / s^(2 n0)| / |R*(0)|^2 near 0
    int samples = 0;
};

FeReport fe_identity_checks(const Field& F, unsigned seed = 1, int samples = 20);

} // namespace hs
