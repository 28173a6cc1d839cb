#include "traceform.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace hs {

namespace {

constexpr double pi = 3.14159265358979323846;

int sgn(int x) { return (x > 0) - (x < 0); }

// cosh(u/2) / (cosh u - c) without overflow
double ell_kernel(double u, double c)
{
    if (u < 40) return std::cosh(u / 2) / (std::cosh(u) - c);
    double e = std::exp(-u);
    return 2 * std::exp(-u / 2) / (1 - 2 * c * e + e * e);
}

// integral over r >= 0 of r h1(r) tanh(pi r), doubled to the full line
cplx identity_integral(const TestFunctionPair& tf)
{
    auto f = [&](double r) {
        cplx h = tf.kind == TestFunctionPair::Kind::rational ? tf.h1_product(r) : tf.h1(r);
        return r * h * std::tanh(pi * r);
    };
    return 2.0 * quad_to_infinity(f, 0.0, 1e-13);
}

cplx elliptic_integral(const TestFunctionPair& tf, double theta1)
{
    const double c = std::cos(2 * theta1);
    return quad_to_infinity([&](double u) { return tf.g1(u) * ell_kernel(u, c); }, 0.0, 1e-13);
}

// terms of the HE sum over powers of one primitive class; weight(l) carries the angle factor
template <class W>
cplx he_class_sum(const GeodesicClass& c, const TestFunctionPair& tf, W weight, int* terms)
{
    const double L = std::log(c.norm);
    cplx acc = 0;
    for (int l = 1; l < 10000; ++l) {
        double half = 0.5 * l * L;
        double damp = L / (std::exp(half) - std::exp(-half));
        cplx g = tf.g1(l * L);
        cplx t = damp * g * weight(l);
        acc += t;
        ++*terms;
        if (damp * tf.g1_majorant(l * L) < 1e-18 * std::max(1e-300, std::abs(acc))) break;
        if (damp < 1e-300) break;
    }
    return acc;
}

// Bound on the HE terms from classes with norm above X, via #{N <= T} <= C li(T)
double he_tail(const TestFunctionPair& tf, const EulerData& data)
{
    const double X = data.trunc_norm;
    if (X < 4) return std::numeric_limits<double>::infinity();
    long below = 0;
    for (const auto& c : data.classes) below += c.multiplicity;
    const double lx = std::log(X);
    const double fX = lx / (std::sqrt(X) - 1 / std::sqrt(X)) * tf.g1_majorant(lx);
    double boundary = std::max(0.0, data.count_const * li(X) - below) * fX;
    double integral = quad_to_infinity(
        [&](double v) { return tf.g1_majorant_weighted(v, 0.5) / (1 - std::exp(-v)); }, lx, 1e-8);
    // powers of the omitted classes
    double powers = 1 + 2 / (std::sqrt(X) - 1);
    return (boundary + data.count_const * integral) * powers;
}

template <class Term>
cplx eps_series(const TestFunctionPair& tf, double log_eps, Term weight, int* terms)
{
    cplx acc = 0;
    for (int k = 1;; ++k) {
        double w = weight(k);
        cplx t = tf.g1(2 * k * log_eps) * w;
        acc += t;
        ++*terms;
        if (std::fabs(w) * tf.g1_majorant(2 * k * log_eps) < 1e-18 * std::max(1e-300, std::abs(acc))) break;
        if (k > 100000) fail_budget("unit series did not converge");
    }
    return acc;
}

void require_even(int m)
{
    if (m % 2 != 0) fail_validation("weight m must be even, got " + std::to_string(m));
}

void check_truncation(const TestFunctionPair& tf, const EulerData& data, const TraceOptions& opt, double tail)
{
    if (tf.kind != TestFunctionPair::Kind::gaussian || tail <= opt.he_tol) return;
    // smallest X (doubling) whose Gaussian tail is below the tolerance
    EulerData probe = data;
    probe.classes.clear();
    double X = std::max(4.0, data.trunc_norm);
    while (he_tail(tf, probe) > opt.he_tol && X < 1e300) probe.trunc_norm = X *= 2;
    std::ostringstream msg;
    msg << "hyperbolic-elliptic tail " << tail << " exceeds " << opt.he_tol << " for " << tf.describe()
        << "; classes up to norm " << X << " (x = " << std::sqrt(X) << ") are required";
    fail_budget(msg.str());
}

} // namespace

cplx TestFunctionPair::h1(cplx r) const
{
    if (kind == Kind::gaussian) return std::exp(-beta * r * r);
    cplx a = s - 0.5;
    return 1.0 / (r * r + a * a) + c1 / (r * r + beta1 * beta1) + c2 / (r * r + beta2 * beta2);
}

cplx TestFunctionPair::h1_product(cplx r) const
{
    if (kind == Kind::gaussian) return h1(r);
    cplx a2 = (s - 0.5) * (s - 0.5);
    double b1 = beta1 * beta1, b2 = beta2 * beta2;
    return (b1 - a2) * (b2 - a2) / ((r * r + a2) * (r * r + b1) * (r * r + b2));
}

cplx TestFunctionPair::g1(double u) const
{
    u = std::fabs(u);
    if (kind == Kind::gaussian) return std::exp(-u * u / (4 * beta)) / std::sqrt(4 * pi * beta);
    return std::exp(-(s - 0.5) * u) / (2.0 * s - 1.0) + c1 * std::exp(-beta1 * u) / (2 * beta1) +
           c2 * std::exp(-beta2 * u) / (2 * beta2);
}

double TestFunctionPair::g1_majorant(double u) const { return g1_majorant_weighted(u, 0); }

double TestFunctionPair::g1_majorant_weighted(double u, double a) const
{
    u = std::fabs(u);
    if (kind == Kind::gaussian) return std::exp(a * u - u * u / (4 * beta)) / std::sqrt(4 * pi * beta);
    return std::exp((a - s.real() + 0.5) * u) / std::abs(2.0 * s - 1.0) +
           std::abs(c1) * std::exp((a - beta1) * u) / (2 * beta1) + std::abs(c2) * std::exp((a - beta2) * u) / (2 * beta2);
}

std::string TestFunctionPair::describe() const
{
    if (kind == Kind::gaussian) return "gaussian:beta=" + format_real(beta);
    return "rational:s=" + format_complex(s) + ",beta1=" + format_real(beta1) + ",beta2=" + format_real(beta2);
}

TestFunctionPair gaussian_testfunction(double beta)
{
    if (!(beta > 0)) fail_validation("Gaussian width must be positive");
    TestFunctionPair t;
    t.kind = TestFunctionPair::Kind::gaussian;
    t.beta = beta;
    return t;
}

TestFunctionPair rational_testfunction(cplx s, double beta1, double beta2)
{
    if (!(s.real() > 1)) fail_validation("rational test function needs Re(s) > 1");
    if (!(beta1 >= 2 && beta2 >= 2)) fail_validation("rational test function needs beta1, beta2 >= 2");
    if (beta1 == beta2) fail_validation("degenerate partial fractions: beta1 == beta2");
    TestFunctionPair t;
    t.kind = TestFunctionPair::Kind::rational;
    t.s = s;
    t.beta1 = beta1;
    t.beta2 = beta2;
    cplx a2 = (s - 0.5) * (s - 0.5);
    double b1 = beta1 * beta1, b2 = beta2 * beta2;
    t.c1 = (a2 - b2) / (b2 - b1);
    t.c2 = -(a2 - b1) / (b2 - b1);
    return t;
}

TestFunctionPair parse_testfunction(const std::string& spec)
{
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) fail_validation("test function parameter without '=': " + item);
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) fail_validation("test function '" + kind + "' needs " + k);
        return it->second;
    };
    try {
        if (kind == "gaussian") return gaussian_testfunction(std::stod(need("beta")));
        if (kind == "rational")
            return rational_testfunction(parse_complex(need("s")), std::stod(need("beta1")), std::stod(need("beta2")));
    } catch (const std::logic_error&) {
        fail_validation("malformed test function parameters: " + spec);
    }
    fail_validation("unknown test function kind: " + kind);
}

void GeomSideBreakdown::sum_parts()
{
    total = identity_term;
    total += elliptic_term;
    total += hyp_ell_term;
    total += par_sct_term;
    total += hyp2_sct_term;
}

nlohmann::json GeomSideBreakdown::to_json() const
{
    auto c = [](cplx z) { return nlohmann::json::array({z.real() + 0.0, z.imag() + 0.0}); }; // no signed zeros
    nlohmann::json j;
    j["identity"] = c(identity_term);
    j["elliptic"] = c(elliptic_term);
    j["hyperbolic_elliptic"] = c(hyp_ell_term);
    j["parabolic"] = c(par_sct_term);
    j["unit_series"] = c(hyp2_sct_term);
    j["total"] = c(total);
    j["spectral_constant"] = c(spectral_constant);
    j["he_tail_bound"] = he_tail_bound;
    j["he_terms"] = he_terms;
    j["unit_series_terms"] = eps_terms;
    return j;
}

GeomSideBreakdown geom_side_double_difference(int m, const TestFunctionPair& tf, const Field& F, const EulerData& data,
                                              const TraceOptions& opt)
{
    require_even(m);
    GeomSideBreakdown b;
    const double zeta = boost::rational_cast<double>(F.zeta_minus_one);
    // vol / (8 pi^2) = zeta_K(-1)
    b.identity_term = zeta * identity_integral(tf);

    // each elliptic class R^k pairs with R^(nu-k) at the conjugate phase
    for (const auto& e : F.elliptic) {
        for (int k = 1; 2 * k <= e.nu; ++k) {
            double th1 = k * pi / e.nu, th2 = k * e.twist * pi / e.nu;
            cplx I = elliptic_integral(tf, th1);
            double phase = std::cos((m - 2) * th2);
            double mult = (2 * k == e.nu) ? 1 : 2;
            b.elliptic_term -= mult * phase / e.nu * I;
        }
    }

    // half of each class rotates by omega and half by pi - omega
    for (const auto& c : data.classes) {
        b.hyp_ell_term -= static_cast<double>(c.multiplicity) *
                          he_class_sum(c, tf, [&](int l) { return std::cos((m - 2) * l * c.angle); }, &b.he_terms);
    }
    b.he_tail_bound = he_tail(tf, data);
    check_truncation(tf, data, opt, b.he_tail_bound);

    const double le = F.log_eps;
    b.par_sct_term = -le * tf.g1(0) * static_cast<double>(sgn(m - 1) - sgn(m - 3));
    const double eps = std::exp(le);
    b.hyp2_sct_term = -2 * le * eps_series(tf, le, [&](int k) {
        return sgn(m - 1) * std::pow(eps, -k * std::abs(m - 1)) - sgn(m - 3) * std::pow(eps, -k * std::abs(m - 3));
    }, &b.eps_terms);
    if (m == 2) b.spectral_constant = -2.0 * tf.h1(cplx(0, 0.5));
    b.sum_parts();
    return b;
}

GeomSideBreakdown geom_side_difference(int m, const TestFunctionPair& tf, const Field& F, const EulerData& data,
                                       cplx h2_weight, const TraceOptions& opt)
{
    require_even(m);
    if (std::abs(h2_weight) == 0) fail_validation("h2(i(m-1)/2) is zero; the difference formula divides by it");
    GeomSideBreakdown b;
    const double zeta = boost::rational_cast<double>(F.zeta_minus_one);
    // (m-1) vol / (16 pi^2) = (m-1) zeta_K(-1) / 2
    b.identity_term = (m - 1) * zeta / 2 * identity_integral(tf);

    for (const auto& e : F.elliptic) {
        for (int k = 1; 2 * k <= e.nu; ++k) {
            double th1 = k * pi / e.nu, th2 = k * e.twist * pi / e.nu;
            cplx I = elliptic_integral(tf, th1);
            // i e^{i(m-1)th2} / (2 nu sin th2) for R^k, plus its conjugate partner
            double pair = -std::sin((m - 1) * th2) / (e.nu * std::sin(th2));
            double mult = (2 * k == e.nu) ? 0.5 : 1;
            b.elliptic_term += mult * pair * I;
        }
    }

    for (const auto& c : data.classes) {
        auto w = [&](int l) {
            double sl = std::sin(l * c.angle);
            if (std::fabs(sl) < 1e-12) fail_invariant("hyperbolic-elliptic power with trivial rotation");
            return -std::sin((m - 1) * l * c.angle) / (2 * sl);
        };
        b.hyp_ell_term += static_cast<double>(c.multiplicity) * he_class_sum(c, tf, w, &b.he_terms);
    }
    b.he_tail_bound = he_tail(tf, data);
    check_truncation(tf, data, opt, b.he_tail_bound);

    const double le = F.log_eps;
    b.par_sct_term = -static_cast<double>(sgn(m - 1)) * le * tf.g1(0);
    const double eps = std::exp(le);
    b.hyp2_sct_term = -2.0 * sgn(m - 1) * le *
                      eps_series(tf, le, [&](int k) { return std::pow(eps, -k * std::abs(m - 1)); }, &b.eps_terms);
    b.sum_parts();
    return b;
}

GeomSideBreakdown double_difference_closed_form(int m, const TestFunctionPair& tf, const Field& F, const EulerData& data)
{
    if (tf.kind != TestFunctionPair::Kind::rational) fail_validation("closed form needs the rational test function");
    const cplx s = tf.s;
    const cplx p1 = 0.5 + tf.beta1, p2 = 0.5 + tf.beta2;
    const cplx w0 = 1.0 / (2.0 * s - 1.0), w1 = tf.c1 / (2 * tf.beta1), w2 = tf.c2 / (2 * tf.beta2);
    CompletedFactors d0 = completed_factors_log_deriv(s, m, F), d1 = completed_factors_log_deriv(p1, m, F),
                     d2 = completed_factors_log_deriv(p2, m, F);
    auto comb = [&](cplx CompletedFactors::*f) { return w0 * (d0.*f) + w1 * (d1.*f) + w2 * (d2.*f); };
    GeomSideBreakdown b;
    b.identity_term = comb(&CompletedFactors::log_id);
    b.elliptic_term = comb(&CompletedFactors::log_ell);
    b.par_sct_term = comb(&CompletedFactors::log_par);
    b.hyp2_sct_term = comb(&CompletedFactors::log_hyp2);
    auto zd = [&](cplx z) { return selberg_log_deriv(ZetaParams{z, m, data.trunc_norm, 0}, data); };
    b.hyp_ell_term = w0 * zd(s) + w1 * zd(p1) + w2 * zd(p2);
    if (m == 2) b.spectral_constant = -2.0 * tf.h1(cplx(0, 0.5));
    b.sum_parts();
    return b;
}

HeatFit heat_asymptotic_check(const Field& F, const std::vector<double>& betas, const EulerData& data)
{
    if (betas.size() < 3) fail_validation("heat fit needs at least three widths");
    for (double b : betas)
        if (!(b > 0 && b <= 0.2)) fail_validation("heat fit widths must lie in (0, 0.2]");
    HeatFit fit;
    fit.betas = betas;
    Eigen::MatrixXd A(betas.size(), 3);
    Eigen::VectorXd y(betas.size());
    for (size_t i = 0; i < betas.size(); ++i) {
        GeomSideBreakdown g = geom_side_double_difference(2, gaussian_testfunction(betas[i]), F, data);
        fit.parts.push_back(g);
        fit.totals.push_back(g.total.real());
        A(i, 0) = 1 / betas[i];
        A(i, 1) = 1 / std::sqrt(betas[i]);
        A(i, 2) = 1;
        y(i) = g.total.real();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    fit.condition = sv(0) / sv(sv.size() - 1);
    if (!(fit.condition < 1e12)) {
        std::ostringstream msg;
        msg << "heat fit is ill-conditioned (condition number " << fit.condition << ")";
        fail_validation(msg.str());
    }
    Eigen::VectorXd x = svd.solve(y);
    fit.a = x(0);
    fit.b = x(1);
    fit.c = x(2);
    fit.max_residual = (A * x - y).cwiseAbs().maxCoeff();
    fit.a_target = boost::rational_cast<double>(F.zeta_minus_one);
    fit.b_target = -2 * F.log_eps / std::sqrt(4 * pi);
    fit.a_rel_err = fit.a / fit.a_target - 1;
    fit.b_rel_err = fit.b / fit.b_target - 1;
    fit.a_ok = std::fabs(fit.a_rel_err) <= 0.02;
    fit.b_ok = std::fabs(fit.b_rel_err) <= 0.05;
    return fit;
}

nlohmann::json HeatFit::to_json() const
{
    nlohmann::json j;
    j["betas"] = betas;
    j["totals"] = totals;
    nlohmann::json p = nlohmann::json::array();
    for (const auto& g : parts) p.push_back(g.to_json());
    j["parts"] = p;
    j["a"] = a;
    j["b"] = b;
    j["c"] = c;
    j["a_target"] = a_target;
    j["b_target"] = b_target;
    j["a_rel_err"] = a_rel_err;
    j["b_rel_err"] = b_rel_err;
    j["condition"] = condition;
    j["max_residual"] = max_residual;
    j["a_ok"] = a_ok;
    j["b_ok"] = b_ok;
    return j;
}

} // namespace hs
