#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modgroup.hpp"
#include "quadint.hpp"

namespace hs {

// a x^2 + b x y + c y^2 over the order.
struct Form {
    QuadInt a, b, c;
    QuadInt disc() const { return b * b - a * c * 4; }
    std::string str() const;
};

struct PellSolution {
    QuadInt t0, u0;
    double eps_d = 0; // (t0 + u0 sqrt d) / 2 in the first embedding
};

struct ClassNumberOptions {
    i64 form_height = 30;     // |N(a)| cap on first coefficients, floor
    double height_per_root = 1; // cap grows as this times sqrt|N(d)|
    int mu_box = 3;           // translation search half-width
    double oracle_height = 4; // entry box, relative to the trace embeddings
    bool cross_check = true;  // also run the matrix-conjugacy count
};

struct DiscriminantRecord {
    QuadInt d;
    PellSolution pell;
    int class_number = 0;
    int oracle_class_number = -1; // -1 when the oracle was not run
    std::vector<Form> forms;      // one representative per class
};

// Membership in D_{+-}: d > 0 > d', not a square, and d = b^2 mod 4 for some b.
bool in_Dpm(const Ring& R, const QuadInt& d, QuadInt* witness = nullptr);

// d modulo squares of units, with |d|/|d'| in [eps^-2, eps^2).
QuadInt canonical_discriminant(const Ring& R, const QuadInt& d);

// Traces t with 2 < t1 <= max_t1 and |t2| < 2, sorted by t1.
std::vector<QuadInt> he_trace_box(const Ring& R, double max_t1);

// Fundamental solution of t^2 - d u^2 = 4 (smallest t1 > 2, u1 > 0).
PellSolution pell_fundamental(const Ring& R, const QuadInt& d, double max_t1 = 1e4);
// Same search restricted to a precomputed sorted trace list.
std::optional<PellSolution> pell_from_traces(const Ring& R, const QuadInt& d, const std::vector<QuadInt>& traces);

// Forms graph count; forms are returned as canonical representatives.
int class_number_forms(const Ring& R, const QuadInt& d, const ClassNumberOptions& opt, std::vector<Form>* reps = nullptr);
// Matrix-side count: conjugacy classes of trace t0 with content u0.
int class_number_matrices(const Ring& R, const QuadInt& d, const PellSolution& pell, const ClassNumberOptions& opt);

DiscriminantRecord class_number(const Ring& R, const QuadInt& d, const ClassNumberOptions& opt = {});
DiscriminantRecord class_number(const Ring& R, const QuadInt& d, const PellSolution& pell, const ClassNumberOptions& opt);

// g(Q) = [[(t0 - b u0)/2, -c u0], [a u0, (t0 + b u0)/2]]
GroupElem form_to_matrix(const Form& Q, const PellSolution& pell);

// QuadInt columns are "a+b*w"; the first column name carries the w convention.
std::string pell_csv_header(int D);
std::string pell_csv_row(const DiscriminantRecord& rec);

} // namespace hs
