#include "pellforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "union_find.hpp"

namespace hs {

std::string Form::str() const { return "(" + a.str() + ", " + b.str() + ", " + c.str() + ")"; }

namespace {

bool primitive(const QuadInt& a, const QuadInt& b, const QuadInt& c)
{
    std::vector<QuadInt> gens;
    for (const QuadInt* x : {&a, &b, &c})
        if (!x->is_zero()) gens.push_back(*x);
    return Ideal::generated_by(gens).is_unit();
}

bool strictly_inside_he(const QuadInt& t)
{
    const QuadInt two(2, 0, t.D);
    return sign_embed(t - two, 1) > 0 && sign_embed(t - two, 2) < 0 && sign_embed(t + two, 2) > 0;
}

double eps_from_trace(double t1) { return 0.5 * (t1 + std::sqrt(t1 * t1 - 4)); }

} // namespace

bool in_Dpm(const Ring& R, const QuadInt& d, QuadInt* witness)
{
    if (sign_embed(d, 1) <= 0 || sign_embed(d, 2) >= 0) return false;
    if (integer_sqrt(d)) return false;
    for (i64 y = 0; y < 4; ++y)
        for (i64 x = 0; x < 4; ++x) {
            QuadInt b = R.make(x, y);
            QuadInt r = b * b - d;
            if (mod_floor(r.a, 4) == 0 && mod_floor(r.b, 4) == 0) {
                if (witness) *witness = b;
                return true;
            }
        }
    return false;
}

QuadInt canonical_discriminant(const Ring& R, const QuadInt& d) { return R.square_class_reduce(d); }

std::vector<QuadInt> he_trace_box(const Ring& R, double max_t1)
{
    std::vector<QuadInt> out;
    for (const QuadInt& t : R.box(2, max_t1, -2, 2))
        if (strictly_inside_he(t) && embed(t, 1) <= max_t1) out.push_back(t);
    std::sort(out.begin(), out.end(), [](const QuadInt& x, const QuadInt& y) { return abs_less(x, y, 1); });
    return out;
}

std::optional<PellSolution> pell_from_traces(const Ring& R, const QuadInt& d, const std::vector<QuadInt>& traces)
{
    const QuadInt four = R.make(4);
    for (const QuadInt& t : traces) {
        auto q = exact_div(t * t - four, d);
        if (!q || q->is_zero()) continue;
        auto u = integer_sqrt(*q);
        if (!u) continue;
        PellSolution p;
        p.t0 = t;
        p.u0 = sign_embed(*u, 1) > 0 ? *u : -*u;
        p.eps_d = eps_from_trace(embed(t, 1));
        return p;
    }
    return std::nullopt;
}

PellSolution pell_fundamental(const Ring& R, const QuadInt& d, double max_t1)
{
    if (!in_Dpm(R, d)) fail_validation("discriminant " + d.str() + " is not in D+-");
    for (double T = 8; ; T *= 2) {
        const double bound = std::min(T, max_t1);
        if (auto p = pell_from_traces(R, d, he_trace_box(R, bound))) return *p;
        if (bound >= max_t1) break;
    }
    fail_budget("Pell search bound exceeded for d = " + d.str());
}

namespace {

using FormKey = std::array<i64, 4>;

FormKey form_key(const QuadInt& a, const QuadInt& b) { return {a.a, a.b, b.a, b.b}; }

struct FormGraph {
    const Ring& R;
    QuadInt d;
    const ClassNumberOptions& opt;
    i64 height = 0;
    std::vector<Form> nodes;
    std::map<FormKey, int> index;

    FormGraph(const Ring& R_, const QuadInt& d_, const ClassNumberOptions& o) : R(R_), d(d_), opt(o)
    {
        double root = std::sqrt(std::fabs(static_cast<double>(d.norm())));
        height = std::max<i64>(opt.form_height, static_cast<i64>(std::ceil(opt.height_per_root * root)));
    }

    // (a, b, c) with a square-class reduced and b reduced modulo 2a; nullopt when
    // the first coefficient is outside the height cap.
    std::optional<FormKey> locate(const QuadInt& a, const QuadInt& b) const
    {
        i64 n = a.norm();
        if (n > height || n < -height) return std::nullopt;
        i64 k = 0;
        QuadInt A = R.square_class_reduce(a, k);
        Ideal I = Ideal::generated_by({A * 2});
        return form_key(A, I.reduce(b));
    }

    void build()
    {
        for (const QuadInt& a : R.square_class_reps(height)) {
            Ideal I = Ideal::generated_by({a * 2});
            I.for_each_residue([&](const QuadInt& b) {
                auto c = exact_div(b * b - d, a * 4);
                if (!c || !primitive(a, b, *c)) return;
                index.emplace(form_key(a, b), static_cast<int>(nodes.size()));
                nodes.push_back(Form{a, b, *c});
            });
        }
    }

    int components(std::vector<Form>* reps)
    {
        UnionFind uf(nodes.size());
        const double d1 = embed(d, 1), d2 = embed(d, 2);
        const double sd1 = std::sqrt(d1);
        for (size_t i = 0; i < nodes.size(); ++i) {
            const Form& f = nodes[i];
            const double a1 = embed(f.a, 1), a2 = embed(f.a, 2), b1 = embed(f.b, 1), b2 = embed(f.b, 2);
            // mu near the real roots in the first embedding, near the centre of
            // the definite form in the second
            double r1 = (-b1 - sd1) / (2 * a1), r2 = (-b1 + sd1) / (2 * a1);
            double lo1 = std::min(r1, r2) - opt.mu_box, hi1 = std::max(r1, r2) + opt.mu_box;
            double c2 = -b2 / (2 * a2);
            double rad2 = std::sqrt(static_cast<double>(height) / std::fabs(a2)) * opt.mu_box + 1;
            (void)d2;
            for (const QuadInt& mu : R.box(lo1, hi1, c2 - rad2, c2 + rad2)) {
                QuadInt cm = f.a * mu * mu + f.b * mu + f.c;
                QuadInt bm = -(f.b + f.a * mu * 2);
                i64 k = 0;
                i64 n = cm.norm();
                if (n > height || n < -height) continue;
                QuadInt A = R.square_class_reduce(cm, k);
                (void)k;
                Ideal I = Ideal::generated_by({A * 2});
                auto it = index.find(form_key(A, I.reduce(bm)));
                if (it == index.end()) fail_invariant("form graph: neighbour of " + f.str() + " missing");
                uf.unite(static_cast<int>(i), it->second);
            }
        }
        std::map<int, int> first;
        for (size_t i = 0; i < nodes.size(); ++i) first.emplace(uf.find(static_cast<int>(i)), static_cast<int>(i));
        if (reps) {
            reps->clear();
            for (auto& [root, i] : first) reps->push_back(nodes[i]);
        }
        return static_cast<int>(first.size());
    }
};

// SL2 matrix without sign normalisation; conjugation keeps the trace fixed.
struct Mat {
    QuadInt a, b, c, d;
};

using MatKey = std::array<i64, 8>;
MatKey mat_key(const Mat& m) { return {m.a.a, m.a.b, m.b.a, m.b.b, m.c.a, m.c.b, m.d.a, m.d.b}; }

Mat mat_mul(const Mat& x, const Mat& y)
{
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat conj_by(const Mat& x, const Mat& g)
{
    Mat xinv{x.d, -x.b, -x.c, x.a};
    return mat_mul(mat_mul(x, g), xinv);
}

} // namespace

int class_number_forms(const Ring& R, const QuadInt& d, const ClassNumberOptions& opt, std::vector<Form>* reps)
{
    FormGraph g(R, d, opt);
    g.build();
    if (g.nodes.empty()) fail_budget("no primitive forms below the height cap for d = " + d.str());
    return g.components(reps);
}

int class_number_matrices(const Ring& R, const QuadInt& d, const PellSolution& pell, const ClassNumberOptions& opt)
{
    (void)d;
    const QuadInt t = pell.t0;
    const double B1 = opt.oracle_height * std::max(2.0, embed(t, 1));
    const double B2 = opt.oracle_height * 2;
    auto inside = [&](const QuadInt& x, double s) {
        return std::fabs(embed(x, 1)) <= s * B1 && std::fabs(embed(x, 2)) <= s * B2;
    };
    auto inside_mat = [&](const Mat& m, double s) { return inside(m.a, s) && inside(m.b, s) && inside(m.c, s) && inside(m.d, s); };
    const Ideal content = Ideal::generated_by({pell.u0});
    const QuadInt one = R.one(), zero = R.make(0);

    std::vector<Mat> seeds;
    const auto entries = R.box(-B1, B1, -B2, B2);
    for (const QuadInt& C : entries) {
        if (C.is_zero()) continue;
        for (const QuadInt& A : entries) {
            QuadInt Dd = t - A;
            if (!inside(Dd, 1)) continue;
            auto B = exact_div(A * Dd - one, C);
            if (!B || !inside(*B, 1)) continue;
            std::vector<QuadInt> gens{C, Dd - A};
            if (!B->is_zero()) gens.push_back(*B);
            if (!(Ideal::generated_by(gens) == content)) continue;
            seeds.push_back({A, *B, C, Dd});
        }
    }

    std::vector<Mat> gens;
    for (const QuadInt& mu : {one, -one, R.w(), -R.w()}) gens.push_back({one, mu, zero, one});
    gens.push_back({zero, -one, one, zero});
    gens.push_back({R.eps, zero, zero, R.eps_inv});
    gens.push_back({R.eps_inv, zero, zero, R.eps});

    // explore each class through conjugates inside a doubled box
    std::map<MatKey, bool> visited;
    int classes = 0;
    for (const Mat& s : seeds) {
        if (visited.count(mat_key(s))) continue;
        ++classes;
        std::deque<Mat> queue{s};
        visited[mat_key(s)] = true;
        while (!queue.empty()) {
            Mat cur = queue.front();
            queue.pop_front();
            for (const Mat& x : gens) {
                Mat nx = conj_by(x, cur);
                if (!inside_mat(nx, 2)) continue;
                if (visited.emplace(mat_key(nx), true).second) queue.push_back(nx);
            }
        }
    }
    return classes;
}

DiscriminantRecord class_number(const Ring& R, const QuadInt& d, const PellSolution& pell, const ClassNumberOptions& opt)
{
    if (!in_Dpm(R, d)) fail_validation("discriminant " + d.str() + " is not in D+-");
    DiscriminantRecord rec;
    rec.d = d;
    rec.pell = pell;
    rec.class_number = class_number_forms(R, d, opt, &rec.forms);
    if (opt.cross_check) {
        rec.oracle_class_number = class_number_matrices(R, d, pell, opt);
        if (rec.oracle_class_number != rec.class_number)
            fail_invariant("ambiguous class count for d = " + d.str() + ": forms give " + std::to_string(rec.class_number) +
                           ", matrix conjugacy gives " + std::to_string(rec.oracle_class_number));
    }
    return rec;
}

DiscriminantRecord class_number(const Ring& R, const QuadInt& d, const ClassNumberOptions& opt)
{
    return class_number(R, d, pell_fundamental(R, d), opt);
}

GroupElem form_to_matrix(const Form& Q, const PellSolution& pell)
{
    const QuadInt two(2, 0, Q.a.D);
    auto a = exact_div(pell.t0 - Q.b * pell.u0, two);
    auto d = exact_div(pell.t0 + Q.b * pell.u0, two);
    if (!a || !d) fail_validation("form_to_matrix: (t0 -+ b u0)/2 not integral for " + Q.str());
    return make_elem(*a, -Q.c * pell.u0, Q.a * pell.u0, *d);
}

std::string pell_csv_header(int D) { return "d[" + omega_str(D) + "],eps_d,t0,u0,h"; }

std::string pell_csv_row(const DiscriminantRecord& rec)
{
    std::ostringstream os;
    os.precision(12);
    os << rec.d.str() << ',' << rec.pell.eps_d << ',' << rec.pell.t0.str() << ',' << rec.pell.u0.str() << ',' << rec.class_number;
    return os.str();
}

} // namespace hs
