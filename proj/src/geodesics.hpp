#pragma once

#include <string>
#include <vector>

#include "pellforms.hpp"

namespace hs {

// Primitive hyperbolic-elliptic classes of one discriminant d. The classes of
// Q and -Q rotate in opposite senses, so half of the multiplicity carries the
// angle omega and half carries pi - omega.
struct GeodesicClass {
    QuadInt d;
    PellSolution pell;
    double norm = 0;   // eps_d^2
    double angle = 0;  // arccos(t0' / 2)
    int multiplicity = 0;
    int oracle_multiplicity = -1;
};

struct GeodesicOptions {
    ClassNumberOptions class_numbers;
    double cross_check_below = 15; // run the matrix oracle for eps_d up to this
    double trace_box_scale = 1;    // widen the trace box (stability runs use 2)
};

struct GeodesicList {
    double x = 0;
    std::vector<GeodesicClass> classes; // sorted by norm, then d
    int total_multiplicity() const;
};

// Canonical d in D_{+-} with eps_d <= x, sorted by eps_d, with Pell solutions.
std::vector<std::pair<QuadInt, PellSolution>> discriminants_up_to(const Ring& R, double x, double trace_box_scale = 1);

GeodesicList enumerate_geodesics(const Ring& R, double x, const GeodesicOptions& opt = {});

struct CountReport {
    double x = 0;
    long pi_sum = 0;         // sum of h_K(d) over eps_d <= x
    double psi_sum = 0;      // sum of h_K(d) log N(p) (geodesic form) or h log eps_d (class form)
    double main_pi = 0;      // 2 li(x^2)
    double main_psi = 0;     // 2 x^2 or x^2
    double pi_ratio() const { return main_pi > 0 ? pi_sum / main_pi : 0; }
    double psi_ratio() const { return main_psi > 0 ? psi_sum / main_psi : 0; }
};

std::vector<CountReport> pgt_report(const GeodesicList& list, const std::vector<double>& grid);
CountReport class_average_report(const GeodesicList& list, double x);

std::string geodesic_csv_header(int D);
std::string geodesic_csv_row(const GeodesicClass& g);
std::string report_csv_header();
std::string report_csv_row(const CountReport& r);

// Inverse of the geodesic CSV writer. Pell relation, membership and order are
// validated; norm and angle are recomputed from the exact t0.
GeodesicList geodesics_from_csv(const Ring& R, double x, const std::string& text);

} // namespace hs
