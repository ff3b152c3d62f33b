#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lcade/local_rule.hpp"
#include "lcade/modmath.hpp"

namespace lcade {

/// Inverse cotangent with range (0, pi): arccot(t) = pi/2 - arctan(t).
inline double arccot(double t) { return std::numbers::pi / 2.0 - std::atan(t); }

/// Unit-coefficient data of one prime factor: the index set
/// P = {0} u { j : gcd(a_j, p) = 1 }, its extremes, and the sector
/// angles arccot(-L), arccot(-R).
struct FactorPermutivity {
    i64 prime = 2;
    int exponent = 1;
    std::vector<i64> unit_indices;  // sorted, always contains 0
    i64 L = 0;
    i64 R = 0;
    double theta_L = 0.0;  // arccot(-L) in (0, pi/2]
    double theta_R = 0.0;  // arccot(-R) in [pi/2, pi)
};

struct PermutivityReport {
    std::vector<FactorPermutivity> factors;
    bool leftmost = false;
    bool rightmost = false;
    bool bipermutative = false;
};

inline FactorPermutivity factor_permutivity(const LocalRule& rule, const PrimePower& pp) {
    FactorPermutivity f;
    f.prime = pp.prime;
    f.exponent = pp.exponent;
    bool has_zero = false;
    for (i64 j = rule.l; j <= rule.r; ++j) {
        if (gcd_i64(rule.coeff(j), pp.prime) == 1) {
            f.unit_indices.push_back(j);
            if (j == 0) has_zero = true;
        }
    }
    if (!has_zero) {
        f.unit_indices.push_back(0);
        std::sort(f.unit_indices.begin(), f.unit_indices.end());
    }
    f.L = f.unit_indices.front();
    f.R = f.unit_indices.back();
    f.theta_L = arccot(static_cast<double>(-f.L));
    f.theta_R = arccot(static_cast<double>(-f.R));
    return f;
}

/// Per-prime-factor unit index sets plus the global permutivity flags of
/// the (normalized) rule: leftmost iff l < 0 with gcd(a_l, m) = 1,
/// rightmost iff r > 0 with gcd(a_r, m) = 1.
inline PermutivityReport permutivity_report(const LocalRule& rule) {
    PermutivityReport report;
    Modulus mod = factorize(rule.modulus);
    report.factors.reserve(mod.factors.size());
    for (const auto& pp : mod.factors)
        report.factors.push_back(factor_permutivity(rule, pp));
    report.leftmost = rule.l < 0 && gcd_i64(rule.coeff(rule.l), rule.modulus) == 1;
    report.rightmost = rule.r > 0 && gcd_i64(rule.coeff(rule.r), rule.modulus) == 1;
    report.bipermutative = report.leftmost && report.rightmost;
    return report;
}

}  // namespace lcade
