#pragma once

#include "json.hpp"

#include <vector>

#include "modgroup.hpp"
#include "quadint.hpp"

namespace hs {

// Fundamental discriminants D <= 100 whose field has class number one.
const std::vector<int>& supported_discriminants();

// Ordinary class number of Q(sqrt D) from cycles of reduced indefinite forms.
int class_number_by_forms(int D);

Rational bernoulli_b2_chi(int D);
// Siegel's divisor sum for zeta_K(-1).
Rational zeta_minus_one_siegel(int D);
// zeta(-1) L(-1, chi_D) through the generalised Bernoulli number.
Rational zeta_minus_one_bernoulli(int D);

struct Field : Ring {
    Rational zeta_minus_one;
    std::vector<EllipticClassDatum> elliptic;
    std::vector<CensusEntry> census;
    Rational euler_char;
    i64 height_bound = 0;

    int elliptic_count() const { return static_cast<int>(elliptic.size()); }
    nlohmann::json to_json() const;
};

i64 default_elliptic_height(int D);
Field make_field(int D, i64 elliptic_height = 0);

std::string rational_str(const Rational& r);

} // namespace hs
