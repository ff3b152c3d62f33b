#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lcade/local_rule.hpp"
#include "lcade/permutivity.hpp"

namespace lcade {

/// Direction vector in the space-time plane; never (0, 0).
struct Direction {
    double x = 1.0;
    double y = 0.0;

    bool is_zero() const { return x == 0.0 && y == 0.0; }
};

inline Direction direction_from_angle(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

inline Direction scale(const Direction& v, double alpha) {
    if (alpha == 0.0) throw std::invalid_argument("scale: alpha must be nonzero");
    return {alpha * v.x, alpha * v.y};
}

// z_l = x + l*y and z_r = x + r*y for the rule's minimal memory span.
struct EdgeValues {
    double z_l = 0.0;
    double z_r = 0.0;
};

inline EdgeValues edge_values(const LocalRule& rule, const Direction& v) {
    return {v.x + static_cast<double>(rule.l) * v.y,
            v.x + static_cast<double>(rule.r) * v.y};
}

/// Uniform-measure closed form: max(|z_l|, |z_r|) ln m when z_l z_r >= 0,
/// |z_r - z_l| ln m otherwise.
inline double mtde_uniform(const LocalRule& rule, const Direction& v) {
    if (v.is_zero()) throw std::invalid_argument("mtde_uniform: zero direction");
    auto [z_l, z_r] = edge_values(rule, v);
    double lnm = std::log(static_cast<double>(rule.modulus));
    if (z_l * z_r >= 0.0) return std::max(std::abs(z_l), std::abs(z_r)) * lnm;
    return std::abs(z_r - z_l) * lnm;
}

enum class MtdeCase { none = 0, rightmost = 1, leftmost = 2, bipermutative = 3 };

struct MtdeResult {
    double value = 0.0;  // always the uniform-measure closed form
    MtdeCase which = MtdeCase::none;
};

/// Case analysis of the permutivity theorem. When a hypothesis applies
/// the value is theorem-backed; otherwise `which` stays none and the
/// returned value is still the uniform-measure closed form.
inline MtdeResult mtde_case_theorem(const LocalRule& rule, const Direction& v) {
    if (v.is_zero()) throw std::invalid_argument("mtde_case_theorem: zero direction");
    auto [z_l, z_r] = edge_values(rule, v);
    double lnm = std::log(static_cast<double>(rule.modulus));
    PermutivityReport report = permutivity_report(rule);

    MtdeResult res;
    res.value = mtde_uniform(rule, v);
    if (report.rightmost &&
        ((0.0 <= z_l && z_l <= z_r) || (z_r <= z_l && z_l <= 0.0))) {
        res.which = MtdeCase::rightmost;
        res.value = std::abs(z_r) * lnm;
    } else if (report.leftmost &&
               ((z_l <= z_r && z_r <= 0.0) || (0.0 <= z_r && z_r <= z_l))) {
        res.which = MtdeCase::leftmost;
        res.value = std::abs(z_l) * lnm;
    } else if (report.bipermutative && z_l * z_r <= 0.0) {
        res.which = MtdeCase::bipermutative;
        res.value = std::abs(z_r - z_l) * lnm;
    }
    return res;
}

struct CurveSample {
    double theta = 0.0;
    double nats = 0.0;
};

/// Angles in [0, 2pi) where z_l or z_r changes sign; these are the
/// sector boundaries of the circle curve.
inline std::vector<double> mtde_sector_boundaries(const LocalRule& rule) {
    std::vector<double> out;
    for (i64 edge : {rule.l, rule.r}) {
        double root = arccot(static_cast<double>(-edge));  // in (0, pi)
        out.push_back(root);
        out.push_back(root + std::numbers::pi);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              out.end());
    return out;
}

/// Sample the directional entropy around the unit circle: a uniform
/// theta grid over [0, 2pi] with every sector boundary inserted.
inline std::vector<CurveSample> mtde_circle_curve(const LocalRule& rule, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("mtde_circle_curve: need >= 2 samples");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> grid;
    grid.reserve(samples + 4);
    for (std::size_t i = 0; i < samples; ++i)
        grid.push_back(two_pi * static_cast<double>(i) / static_cast<double>(samples - 1));
    for (double b : mtde_sector_boundaries(rule)) grid.push_back(b);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               grid.end());
    std::vector<CurveSample> curve;
    curve.reserve(grid.size());
    for (double theta : grid)
        curve.push_back({theta, mtde_uniform(rule, direction_from_angle(theta))});
    return curve;
}

}  // namespace lcade
