#include "geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "specfun.hpp"

namespace hs {

int GeodesicList::total_multiplicity() const
{
    int n = 0;
    for (const auto& g : classes) n += g.multiplicity;
    return n;
}

std::vector<std::pair<QuadInt, PellSolution>> discriminants_up_to(const Ring& R, double x, double trace_box_scale)
{
    std::vector<std::pair<QuadInt, PellSolution>> out;
    if (x <= 1) return out;
    const double tmax = x + 1 / x;
    const auto traces = he_trace_box(R, tmax);
    // the box is only ever widened for stability runs; the eps_d <= x filter is exact
    const auto wide = trace_box_scale > 1 ? he_trace_box(R, tmax * trace_box_scale) : traces;
    const QuadInt four = R.make(4);
    std::map<QuadInt, PellSolution> found;
    for (const QuadInt& t : wide) {
        const QuadInt n = t * t - four;
        const i64 nn = std::llabs(n.norm());
        // u up to units with u^2 | n
        for (const QuadInt& u : R.square_class_reps(isqrt(nn))) {
            if (R.unit_reduce(u) != u) continue;
            auto d0 = exact_div(n, u * u);
            if (!d0 || !in_Dpm(R, *d0)) continue;
            QuadInt d = canonical_discriminant(R, *d0);
            if (found.count(d)) continue;
            auto p = pell_from_traces(R, d, traces);
            if (!p) continue; // fundamental solution beyond x
            if (p->eps_d > x) continue;
            found.emplace(d, *p);
        }
    }
    for (auto& kv : found) out.push_back(kv);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second.t0 != b.second.t0) return abs_less(a.second.t0, b.second.t0, 1);
        return a.first < b.first;
    });
    return out;
}

GeodesicList enumerate_geodesics(const Ring& R, double x, const GeodesicOptions& opt)
{
    GeodesicList list;
    list.x = x;
    for (const auto& [d, pell] : discriminants_up_to(R, x, opt.trace_box_scale)) {
        ClassNumberOptions cn = opt.class_numbers;
        cn.cross_check = cn.cross_check && pell.eps_d <= opt.cross_check_below;
        DiscriminantRecord rec = class_number(R, d, pell, cn);
        if (rec.class_number % 2 != 0)
            fail_invariant("odd class number for d = " + d.str() + "; orientation pairing broken");
        GeodesicClass g;
        g.d = d;
        g.pell = pell;
        g.norm = pell.eps_d * pell.eps_d;
        g.angle = std::acos(embed(pell.t0, 2) / 2);
        g.multiplicity = rec.class_number;
        g.oracle_multiplicity = rec.oracle_class_number;
        list.classes.push_back(g);
    }
    return list;
}

std::vector<CountReport> pgt_report(const GeodesicList& list, const std::vector<double>& grid)
{
    std::vector<CountReport> out;
    for (double x : grid) {
        if (x > list.x + 1e-12) fail_validation("report grid point " + std::to_string(x) + " beyond the enumerated range");
        CountReport r;
        r.x = x;
        for (const auto& g : list.classes) {
            if (g.pell.eps_d > x) continue;
            r.pi_sum += g.multiplicity;
            r.psi_sum += g.multiplicity * std::log(g.norm);
        }
        r.main_psi = 2 * x * x;
        r.main_pi = x * x >= 2 ? 2 * li(x * x) : 0;
        out.push_back(r);
    }
    return out;
}

CountReport class_average_report(const GeodesicList& list, double x)
{
    CountReport r = pgt_report(list, {x}).front();
    r.psi_sum = 0;
    for (const auto& g : list.classes)
        if (g.pell.eps_d <= x) r.psi_sum += g.multiplicity * std::log(g.pell.eps_d);
    r.main_psi = x * x;
    return r;
}

std::string geodesic_csv_header(int D) { return "d[" + omega_str(D) + "],eps_d,norm,angle,t0,u0,h"; }

std::string geodesic_csv_row(const GeodesicClass& g)
{
    std::ostringstream os;
    os.precision(12);
    os << g.d.str() << ',' << g.pell.eps_d << ',' << g.norm << ',' << g.angle << ',' << g.pell.t0.str() << ','
       << g.pell.u0.str() << ',' << g.multiplicity;
    return os.str();
}

GeodesicList geodesics_from_csv(const Ring& R, double x, const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    if (!next() || line != geodesic_csv_header(R.D)) fail_validation("geodesic CSV header does not match D = " + std::to_string(R.D));
    GeodesicList list;
    list.x = x;
    int row = 1;
    while (next()) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        const std::string where = "geodesic CSV row " + std::to_string(row);
        if (f.size() != 7) fail_validation(where + ": expected 7 fields");
        GeodesicClass g;
        g.d = parse_quadint(f[0], R.D);
        g.pell.t0 = parse_quadint(f[4], R.D);
        g.pell.u0 = parse_quadint(f[5], R.D);
        try {
            size_t pos = 0;
            g.multiplicity = std::stoi(f[6], &pos);
            if (pos != f[6].size()) throw std::invalid_argument(f[6]);
        } catch (const std::exception&) {
            fail_validation(where + ": bad class number");
        }
        if (!in_Dpm(R, g.d) || canonical_discriminant(R, g.d) != g.d) fail_validation(where + ": d is not canonical in D+-");
        if (g.pell.t0 * g.pell.t0 - g.d * g.pell.u0 * g.pell.u0 != R.make(4)) fail_validation(where + ": Pell relation fails");
        if (g.multiplicity <= 0 || g.multiplicity % 2 != 0) fail_validation(where + ": class number must be positive and even");
        const double t1 = embed(g.pell.t0, 1);
        g.pell.eps_d = 0.5 * (t1 + std::sqrt(t1 * t1 - 4));
        if (g.pell.eps_d > x) fail_validation(where + ": eps_d beyond x");
        if (!list.classes.empty() && abs_less(g.pell.t0, list.classes.back().pell.t0, 1))
            fail_validation(where + ": rows not sorted by eps_d");
        g.norm = g.pell.eps_d * g.pell.eps_d;
        g.angle = std::acos(embed(g.pell.t0, 2) / 2);
        list.classes.push_back(g);
    }
    return list;
}

std::string report_csv_header() { return "x,pi_sum,main_pi,pi_ratio,psi_sum,main_psi,psi_ratio"; }

std::string report_csv_row(const CountReport& r)
{
    std::ostringstream os;
    os.precision(12);
    os << r.x << ',' << r.pi_sum << ',' << r.main_pi << ',' << r.pi_ratio() << ',' << r.psi_sum << ',' << r.main_psi << ','
       << r.psi_ratio();
    return os.str();
}

} // namespace hs
