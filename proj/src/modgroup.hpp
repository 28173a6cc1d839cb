#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadint.hpp"

namespace hs {

// Element [[a, b], [c, d]] of PSL2 over the order, stored with a canonical sign:
// the first nonzero entry in the order a, b, c, d has positive first embedding.
struct GroupElem {
    QuadInt a, b, c, d;

    QuadInt det() const { return a * d - b * c; }
    QuadInt trace() const { return a + d; }
    bool operator==(const GroupElem& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator<(const GroupElem& o) const;
    std::string str() const;
};

GroupElem make_elem(const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d);
// Product and inverse without sign normalisation (SL2 level), then normalised.
GroupElem mul(const GroupElem& x, const GroupElem& y);
GroupElem inverse(const GroupElem& x);
GroupElem power(const GroupElem& x, int n);
GroupElem conjugate(const GroupElem& x, const GroupElem& g); // x g x^-1
bool is_plus_minus_identity(const GroupElem& g);

enum class ElemType { identity, hyperbolic, elliptic, hyperbolic_elliptic, elliptic_hyperbolic, parabolic };
const char* type_name(ElemType t);

struct Classification {
    ElemType type = ElemType::identity;
    double N = 0;       // hyperbolic-elliptic: norm ((|t1| + sqrt(t1^2-4))/2)^2
    double omega = 0;   // hyperbolic-elliptic: arccos(t2/2)
    double theta1 = 0;  // elliptic: oriented rotation angles in (0, pi)
    double theta2 = 0;
};

Classification classify(const GroupElem& g);
// Oriented rotation angle in (0, pi) of an elliptic embedding (|trace| < 2).
double rotation_angle(const GroupElem& g, int which);

struct EllipticClassDatum {
    int nu = 0;
    int twist = 0;
    double theta1 = 0;
    double theta2 = 0;
    GroupElem rep;
};

struct CensusEntry {
    int nu = 0;
    int twist = 0;
    int count = 0;
};

// Primitive elliptic conjugacy classes, one per elliptic fixed point, each
// represented by the generator of its stabiliser with first angle pi/nu.
// Search covers lower-left entries with |N(c)| <= height_bound.
std::vector<EllipticClassDatum> enumerate_elliptic(const Ring& R, i64 height_bound);
std::vector<CensusEntry> census_of(const std::vector<EllipticClassDatum>& reps);

enum class ConjAnswer { yes, no, unknown };

struct ConjResult {
    ConjAnswer answer = ConjAnswer::unknown;
    std::optional<GroupElem> witness; // x with x g1 x^-1 = g2
};

ConjResult is_conjugate(const Ring& R, const GroupElem& g1, const GroupElem& g2, std::size_t budget = 20000);

// Generators used for conjugation searches: translations by 1 and w, the
// inversion, and the diagonal unit matrix, with inverses.
std::vector<GroupElem> standard_generators(const Ring& R);

} // namespace hs
