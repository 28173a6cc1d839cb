#include "modgroup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "union_find.hpp"

namespace hs {

namespace {

constexpr double pi = std::numbers::pi;

GroupElem raw(const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d) { return GroupElem{a, b, c, d}; }

GroupElem normalise(GroupElem g)
{
    for (const QuadInt* e : {&g.a, &g.b, &g.c, &g.d}) {
        if (e->is_zero()) continue;
        if (sign_embed(*e, 1) < 0) g = raw(-g.a, -g.b, -g.c, -g.d);
        break;
    }
    return g;
}

GroupElem mul_raw(const GroupElem& x, const GroupElem& y)
{
    return raw(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d);
}

GroupElem inverse_raw(const GroupElem& x) { return raw(x.d, -x.b, -x.c, x.a); }

// |t| < 2, |t| == 2 or |t| > 2 in the given embedding: returns -1, 0, 1.
int compare_abs_two(const QuadInt& t, int which)
{
    QuadInt two(2, 0, t.D);
    int up = sign_embed(t - two, which);
    int lo = sign_embed(t + two, which);
    if (up < 0 && lo > 0) return -1;
    if (up == 0 || lo == 0) return 0;
    return 1;
}

// Order nu of an elliptic element in PSL2 from its first rotation angle.
int elliptic_order(const GroupElem& g)
{
    double x = rotation_angle(g, 1) / pi;
    for (int q = 2; q <= 12; ++q) {
        double p = std::round(x * q);
        if (std::fabs(x * q - p) < 1e-9) {
            if (!is_plus_minus_identity(power(g, q))) fail_invariant("elliptic element has unexpected order");
            return q;
        }
    }
    fail_invariant("elliptic rotation angle is not a rational multiple of pi");
}

} // namespace

bool GroupElem::operator<(const GroupElem& o) const
{
    return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
}

std::string GroupElem::str() const
{
    return "[[" + a.str() + ", " + b.str() + "], [" + c.str() + ", " + d.str() + "]]";
}

GroupElem make_elem(const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d)
{
    GroupElem g = raw(a, b, c, d);
    if (g.det() != QuadInt(1, 0, a.D)) fail_validation("matrix determinant is not 1: " + g.str());
    return normalise(g);
}

GroupElem mul(const GroupElem& x, const GroupElem& y) { return normalise(mul_raw(x, y)); }

GroupElem inverse(const GroupElem& x) { return normalise(inverse_raw(x)); }

GroupElem power(const GroupElem& x, int n)
{
    GroupElem base = n >= 0 ? x : inverse_raw(x);
    const int D = x.a.D;
    GroupElem r = raw(QuadInt(1, 0, D), QuadInt(0, 0, D), QuadInt(0, 0, D), QuadInt(1, 0, D));
    for (int i = 0; i < std::abs(n); ++i) r = mul_raw(r, base);
    return normalise(r);
}

GroupElem conjugate(const GroupElem& x, const GroupElem& g) { return normalise(mul_raw(mul_raw(x, g), inverse_raw(x))); }

bool is_plus_minus_identity(const GroupElem& g)
{
    return g.b.is_zero() && g.c.is_zero() && g.a == g.d && (g.a.a == 1 || g.a.a == -1) && g.a.b == 0;
}

const char* type_name(ElemType t)
{
    switch (t) {
    case ElemType::identity: return "Identity";
    case ElemType::hyperbolic: return "Hyperbolic";
    case ElemType::elliptic: return "Elliptic";
    case ElemType::hyperbolic_elliptic: return "HE";
    case ElemType::elliptic_hyperbolic: return "EH";
    case ElemType::parabolic: return "Parabolic";
    }
    return "?";
}

double rotation_angle(const GroupElem& g, int which)
{
    double t = embed(g.trace(), which);
    double base = std::acos(std::clamp(t / 2, -1.0, 1.0));
    int cs = sign_embed(g.c, which);
    if (cs == 0) fail_validation("rotation angle needs a nonzero lower-left entry");
    return cs > 0 ? base : pi - base;
}

Classification classify(const GroupElem& g)
{
    Classification out;
    if (is_plus_minus_identity(g)) return out;
    QuadInt t = g.trace();
    int c1 = compare_abs_two(t, 1);
    int c2 = compare_abs_two(t, 2);
    if (c1 == 0 || c2 == 0) {
        out.type = ElemType::parabolic;
    } else if (c1 > 0 && c2 > 0) {
        out.type = ElemType::hyperbolic;
    } else if (c1 < 0 && c2 < 0) {
        out.type = ElemType::elliptic;
        out.theta1 = rotation_angle(g, 1);
        out.theta2 = rotation_angle(g, 2);
    } else if (c1 > 0) {
        out.type = ElemType::hyperbolic_elliptic;
        double t1 = std::fabs(embed(t, 1));
        double l = (t1 + std::sqrt(t1 * t1 - 4)) / 2;
        out.N = l * l;
        out.omega = std::acos(std::clamp(embed(t, 2) / 2, -1.0, 1.0));
    } else {
        out.type = ElemType::elliptic_hyperbolic;
    }
    return out;
}

std::vector<GroupElem> standard_generators(const Ring& R)
{
    const QuadInt z = R.make(0), o = R.one();
    std::vector<GroupElem> gens;
    for (const QuadInt& mu : {o, -o, R.w(), -R.w()}) gens.push_back(raw(o, mu, z, o));
    gens.push_back(raw(z, -o, o, z));
    gens.push_back(raw(R.eps, z, z, R.eps_inv));
    gens.push_back(raw(R.eps_inv, z, z, R.eps));
    return gens;
}

namespace {

using NodeKey = std::array<i64, 4>;

struct EllNode {
    QuadInt A, B, C, Dd;
};

// Conjugation-class search for elliptic elements of a fixed trace t.
// Nodes are matrices up to translation and diagonal conjugation: C is
// square-class reduced (and sign-fixed when t = 0) and A is reduced mod C.
class EllipticGraph {
public:
    EllipticGraph(const Ring& R, const QuadInt& t, i64 H) : R_(R), t_(t), H_(H), zero_trace_(t.is_zero()) {}

    void build()
    {
        for (const QuadInt& C : R_.square_class_reps(H_)) {
            if (zero_trace_ && sign_embed(C, 1) < 0) continue;
            Ideal I = Ideal::generated_by({C});
            I.for_each_residue([&](const QuadInt& A) {
                QuadInt Dd = t_ - A;
                auto B = exact_div(A * Dd - R_.one(), C);
                if (!B) return;
                add_node(EllNode{A, *B, C, Dd});
            });
        }
        UnionFind uf(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) link_neighbours(i, uf);
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (uf.find(i) == i) roots_.push_back(i);
    }

    std::vector<GroupElem> class_reps() const
    {
        std::vector<GroupElem> out;
        for (std::size_t i : roots_) {
            const EllNode& n = nodes_[i];
            out.push_back(make_elem(n.A, n.B, n.C, n.Dd));
        }
        return out;
    }

private:
    NodeKey key_of(const QuadInt& C, const QuadInt& A) const { return {C.a, C.b, A.a, A.b}; }

    void add_node(const EllNode& n)
    {
        NodeKey k = key_of(n.C, n.A);
        if (index_.count(k)) return;
        index_[k] = nodes_.size();
        nodes_.push_back(n);
    }

    // Canonical node for an arbitrary matrix of trace t, if inside the bound.
    std::optional<std::size_t> locate(QuadInt A, QuadInt B, QuadInt C, QuadInt Dd) const
    {
        i64 n = C.norm();
        if (n > H_ || n < -H_) return std::nullopt;
        i64 k;
        QuadInt Cr = R_.square_class_reduce(C, k);
        // conjugation by diag(u, 1/u) with u^-2 = eps^k
        B = B * R_.eps_pow(-k);
        C = Cr;
        if (zero_trace_ && sign_embed(C, 1) < 0) {
            A = -A; B = -B; C = -C; Dd = -Dd;
        }
        Ideal I = Ideal::generated_by({C});
        QuadInt Ar = I.reduce(A);
        auto it = index_.find(key_of(C, Ar));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    void link_neighbours(std::size_t i, UnionFind& uf)
    {
        const EllNode n = nodes_[i];
        // S-conjugates of all translates: lower-left entry -B_mu with
        // B_mu = B + mu (D - A) - mu^2 C, a definite quadratic in each embedding.
        std::array<double, 2> centre{}, radius{};
        double nC = std::fabs(static_cast<double>(n.C.norm()));
        std::array<double, 2> im{};
        for (int j = 0; j < 2; ++j) {
            double cj = embed(n.C, j + 1);
            double tj = embed(t_, j + 1);
            centre[j] = embed(n.Dd - n.A, j + 1) / (2 * cj);
            im[j] = std::sqrt(std::max(4 - tj * tj, 0.0)) / (2 * std::fabs(cj));
        }
        for (int j = 0; j < 2; ++j) {
            double other = im[1 - j];
            radius[j] = std::sqrt(static_cast<double>(H_) / (nC * other * other)) + 1e-9;
        }
        for (const QuadInt& mu :
             R_.box(centre[0] - radius[0], centre[0] + radius[0], centre[1] - radius[1], centre[1] + radius[1])) {
            QuadInt Bm = n.B + mu * (n.Dd - n.A) - mu * mu * n.C;
            // S (T_mu g T_-mu) S^-1
            QuadInt A2 = n.Dd - mu * n.C;
            QuadInt B2 = -n.C;
            QuadInt C2 = -Bm;
            QuadInt D2 = n.A + mu * n.C;
            if (auto j = locate(A2, B2, C2, D2)) uf.unite(i, *j);
        }
    }

    const Ring& R_;
    QuadInt t_;
    i64 H_;
    bool zero_trace_;
    std::vector<EllNode> nodes_;
    std::map<NodeKey, std::size_t> index_;
    std::vector<std::size_t> roots_;
};

std::vector<QuadInt> elliptic_traces(const Ring& R, bool canonical_sign)
{
    std::vector<QuadInt> out;
    for (const QuadInt& t : R.box(-2, 2, -2, 2)) {
        if (compare_abs_two(t, 1) >= 0 || compare_abs_two(t, 2) >= 0) continue;
        if (canonical_sign && sign_embed(t, 1) < 0) continue;
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int trace_order(const QuadInt& t)
{
    double x = std::acos(std::clamp(embed(t, 1) / 2, -1.0, 1.0)) / pi;
    for (int q = 2; q <= 12; ++q)
        if (std::fabs(x * q - std::round(x * q)) < 1e-9) return q;
    fail_invariant("trace of an elliptic element has unexpected order");
}

// Largest order of an elliptic element commuting with g (the stabiliser order).
int stabiliser_order(const Ring& R, const GroupElem& g, const std::vector<QuadInt>& traces)
{
    const QuadInt four = R.make(4);
    const QuadInt t = g.trace();
    const QuadInt gc = R.gcd({g.c, g.d - g.a, g.b});
    const QuadInt b0 = *exact_div(g.d - g.a, gc);
    int best = trace_order(t);
    for (const QuadInt& tau : traces) {
        int nu = trace_order(tau);
        if (nu <= best) continue;
        // delta = x + y g with y = eta / gc, eta^2 = gc^2 (4 - tau^2) / (4 - t^2)
        auto r = exact_div(gc * gc * (four - tau * tau), four - t * t);
        if (!r) continue;
        auto eta = integer_sqrt(*r);
        if (!eta) continue;
        for (const QuadInt& e : {*eta, -*eta}) {
            QuadInt num = tau - e * b0;
            if (num.a % 2 == 0 && num.b % 2 == 0) {
                best = nu;
                break;
            }
        }
    }
    return best;
}

} // namespace

std::vector<EllipticClassDatum> enumerate_elliptic(const Ring& R, i64 height_bound)
{
    if (height_bound < 1) fail_validation("height bound must be positive");
    const std::vector<QuadInt> all_traces = elliptic_traces(R, false);
    std::vector<EllipticClassDatum> out;
    for (const QuadInt& t : elliptic_traces(R, true)) {
        EllipticGraph graph(R, t, height_bound);
        graph.build();
        for (const GroupElem& g : graph.class_reps()) {
            int nu = elliptic_order(g);
            double th1 = rotation_angle(g, 1);
            if (std::fabs(th1 - pi / nu) > 1e-9) continue;
            if (stabiliser_order(R, g, all_traces) != nu) continue;
            EllipticClassDatum e;
            e.nu = nu;
            e.theta1 = th1;
            e.theta2 = rotation_angle(g, 2);
            e.twist = static_cast<int>(std::lround(e.theta2 * nu / pi)) % nu;
            e.rep = g;
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end(), [](const EllipticClassDatum& x, const EllipticClassDatum& y) {
        return std::tie(x.nu, x.twist, x.rep) < std::tie(y.nu, y.twist, y.rep);
    });
    return out;
}

std::vector<CensusEntry> census_of(const std::vector<EllipticClassDatum>& reps)
{
    std::map<std::pair<int, int>, int> counts;
    for (const auto& e : reps) ++counts[{e.nu, e.twist}];
    std::vector<CensusEntry> out;
    for (const auto& [k, n] : counts) out.push_back(CensusEntry{k.first, k.second, n});
    return out;
}

ConjResult is_conjugate(const Ring& R, const GroupElem& g1, const GroupElem& g2, std::size_t budget)
{
    ConjResult res;
    QuadInt t1 = g1.trace(), t2 = g2.trace();
    if (t1 != t2 && t1 != -t2) {
        res.answer = ConjAnswer::no;
        return res;
    }
    const auto gens = standard_generators(R);
    const int D = R.D;
    GroupElem id = raw(QuadInt(1, 0, D), QuadInt(0, 0, D), QuadInt(0, 0, D), QuadInt(1, 0, D));
    std::map<GroupElem, GroupElem> seen; // conjugate -> conjugator
    std::deque<GroupElem> queue;
    GroupElem start = normalise(g1);
    GroupElem target = normalise(g2);
    seen.emplace(start, id);
    queue.push_back(start);
    while (!queue.empty() && seen.size() < budget) {
        GroupElem cur = queue.front();
        queue.pop_front();
        if (cur == target) {
            res.answer = ConjAnswer::yes;
            res.witness = normalise(seen.at(cur));
            return res;
        }
        const GroupElem x = seen.at(cur);
        for (const GroupElem& s : gens) {
            GroupElem next;
            try {
                next = conjugate(s, cur);
            } catch (const Error&) {
                continue;
            }
            if (seen.count(next)) continue;
            seen.emplace(next, mul_raw(s, x));
            queue.push_back(next);
        }
    }
    return res;
}

} // namespace hs
