#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lcade/laurent.hpp"
#include "lcade/local_rule.hpp"
#include "lcade/permutivity.hpp"

namespace lcade {

inline constexpr double kBreakpointTol = 1e-12;

/// One prime-power contribution to the entropy curve. On [0, theta_L]
/// the term is weight*|cos t + R sin t|, on [theta_L, theta_R] it is
/// weight*(R-L)*|sin t|, and on [theta_R, pi] weight*|cos t + L sin t|,
/// with weight = k ln p.
struct CurveTerm {
    double weight = 0.0;
    i64 L = 0;
    i64 R = 0;
    double theta_L = 0.0;
    double theta_R = 0.0;
    i64 prime = 2;
    int exponent = 1;

    double eval(double theta) const {
        double s = std::sin(theta), c = std::cos(theta);
        if (theta <= theta_L)
            return weight * std::abs(c + static_cast<double>(R) * s);
        if (theta >= theta_R)
            return weight * std::abs(c + static_cast<double>(L) * s);
        return weight * static_cast<double>(R - L) * std::abs(s);
    }
};

/// Sum-of-terms piecewise curve h(theta) on [0, pi], one term per prime
/// factor of the modulus.
struct EntropyCurve {
    i64 modulus = 2;
    std::vector<CurveTerm> terms;
    std::vector<double> breakpoints;  // sorted, distinct, interior to (0, pi)
};

inline CurveTerm tde_prime_power_term(const FactorPermutivity& factor) {
    CurveTerm term;
    term.prime = factor.prime;
    term.exponent = factor.exponent;
    term.weight = factor.exponent * std::log(static_cast<double>(factor.prime));
    term.L = factor.L;
    term.R = factor.R;
    term.theta_L = factor.theta_L;
    term.theta_R = factor.theta_R;
    return term;
}

/// Closed-form curve for a prime-power modulus.
inline CurveTerm tde_prime_power(const LocalRule& rule) {
    Modulus mod = factorize(rule.modulus);
    if (mod.factors.size() != 1)
        throw std::domain_error("tde_prime_power: modulus is not a prime power");
    return tde_prime_power_term(factor_permutivity(rule, mod.factors[0]));
}

namespace detail {

inline std::vector<double> dedupe_breakpoints(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double v : values) {
        if (v <= kBreakpointTol || v >= std::numbers::pi - kBreakpointTol) continue;
        if (out.empty() || v - out.back() > kBreakpointTol) out.push_back(v);
    }
    return out;
}

}  // namespace detail

/// Full curve for composite moduli: one term per prime-power factor,
/// values add across factors.
inline EntropyCurve tde_curve(const LocalRule& rule) {
    EntropyCurve curve;
    curve.modulus = rule.modulus;
    Modulus mod = factorize(rule.modulus);
    std::vector<double> points;
    for (const auto& pp : mod.factors) {
        CurveTerm term = tde_prime_power_term(factor_permutivity(rule, pp));
        if (term.L != term.R) {  // L = R = 0 is a single formula, no kink
            points.push_back(term.theta_L);
            points.push_back(term.theta_R);
        }
        curve.terms.push_back(term);
    }
    curve.breakpoints = detail::dedupe_breakpoints(std::move(points));
    return curve;
}

inline double eval(const EntropyCurve& curve, double theta) {
    if (theta < 0.0 || theta > std::numbers::pi)
        throw std::domain_error("eval: theta outside [0, pi]");
    double total = 0.0;
    for (const auto& term : curve.terms) total += term.eval(theta);
    return total;
}

/// h(pi/2) = sum k_i (R_i - L_i) ln p_i, the classical topological
/// entropy of the automaton.
inline double topological_entropy(const LocalRule& rule) {
    double total = 0.0;
    for (const auto& term : tde_curve(rule).terms)
        total += term.weight * static_cast<double>(term.R - term.L);
    return total;
}

enum class PieceKind { right_edge, middle, left_edge };

inline const char* piece_name(PieceKind k) {
    switch (k) {
        case PieceKind::right_edge: return "cos+R*sin";
        case PieceKind::middle: return "(R-L)*sin";
        case PieceKind::left_edge: return "cos+L*sin";
    }
    return "?";
}

/// Which piece of one term is active on a sector, with its symbolic data.
struct SectorTerm {
    i64 prime = 2;
    int exponent = 1;
    PieceKind piece = PieceKind::middle;
    i64 edge = 0;      // R for the right piece, L for the left, R-L for middle
    double weight = 0.0;
};

struct Sector {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<SectorTerm> terms;
};

/// Ordered sector decomposition of the curve between consecutive
/// breakpoints, reporting the active piece of every term.
inline std::vector<Sector> closed_form_report(const EntropyCurve& curve) {
    std::vector<double> edges;
    edges.push_back(0.0);
    edges.insert(edges.end(), curve.breakpoints.begin(), curve.breakpoints.end());
    edges.push_back(std::numbers::pi);
    std::vector<Sector> sectors;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Sector sector;
        sector.lo = edges[i];
        sector.hi = edges[i + 1];
        double mid = 0.5 * (sector.lo + sector.hi);
        for (const auto& term : curve.terms) {
            SectorTerm st;
            st.prime = term.prime;
            st.exponent = term.exponent;
            st.weight = term.weight;
            if (mid <= term.theta_L) {
                st.piece = PieceKind::right_edge;
                st.edge = term.R;
            } else if (mid >= term.theta_R) {
                st.piece = PieceKind::left_edge;
                st.edge = term.L;
            } else {
                st.piece = PieceKind::middle;
                st.edge = term.R - term.L;
            }
            sector.terms.push_back(st);
        }
        sectors.push_back(std::move(sector));
    }
    return sectors;
}

}  // namespace lcade
