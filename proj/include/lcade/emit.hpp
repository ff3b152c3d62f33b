#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcade/estimator.hpp"
#include "lcade/measures.hpp"
#include "lcade/mtde.hpp"
#include "lcade/rational.hpp"
#include "lcade/tde.hpp"

namespace lcade {

using json = nlohmann::json;

/// Output unit for entropy values; everything is stored in nats and
/// divided by ln(base) only at render time.
enum class LogBase { natural, base2, base10, base_m };

inline LogBase parse_log_base(const std::string& text) {
    if (text == "e") return LogBase::natural;
    if (text == "2") return LogBase::base2;
    if (text == "10") return LogBase::base10;
    if (text == "m") return LogBase::base_m;
    throw std::invalid_argument("log base must be one of: e, 2, 10, m");
}

inline double log_base_divisor(LogBase base, i64 modulus) {
    switch (base) {
        case LogBase::natural: return 1.0;
        case LogBase::base2: return std::numbers::ln2;
        case LogBase::base10: return std::numbers::ln10;
        case LogBase::base_m: return std::log(static_cast<double>(modulus));
    }
    return 1.0;
}

inline double render_nats(double nats, LogBase base, i64 modulus) {
    return nats / log_base_divisor(base, modulus);
}

inline std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Uniform theta grid over [0, pi] plus the curve's breakpoints, each
/// included exactly once.
inline std::vector<CurveSample> sample_tde_curve(const EntropyCurve& curve,
                                                 std::size_t samples = 721) {
    if (samples < 2) throw std::invalid_argument("sample_tde_curve: need >= 2 samples");
    std::vector<double> grid;
    grid.reserve(samples + curve.breakpoints.size());
    for (std::size_t i = 0; i < samples; ++i)
        grid.push_back(std::numbers::pi * static_cast<double>(i) /
                       static_cast<double>(samples - 1));
    grid.insert(grid.end(), curve.breakpoints.begin(), curve.breakpoints.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) <= kBreakpointTol; }),
               grid.end());
    std::vector<CurveSample> out;
    out.reserve(grid.size());
    for (double theta : grid) out.push_back({theta, eval(curve, theta)});
    return out;
}

/// "theta,entropy" CSV: 12 significant digits, LF endings, sorted rows.
inline void emit_csv(std::ostream& os, const std::vector<CurveSample>& samples,
                     LogBase base = LogBase::natural, i64 modulus = 2) {
    os << "theta,entropy\n";
    for (const auto& s : samples)
        os << format_sig12(s.theta) << ','
           << format_sig12(render_nats(s.nats, base, modulus)) << '\n';
}

/// Static single-polyline SVG plot, 800x500, with dashed vertical
/// markers at the given angles.
inline void emit_svg(std::ostream& os, const std::vector<CurveSample>& samples,
                     const std::vector<double>& markers, LogBase base = LogBase::natural,
                     i64 modulus = 2) {
    if (samples.size() < 2) throw std::invalid_argument("emit_svg: need >= 2 samples");
    constexpr double width = 800.0, height = 500.0, margin = 50.0;
    double t0 = samples.front().theta, t1 = samples.back().theta;
    double vmax = 0.0;
    for (const auto& s : samples) vmax = std::max(vmax, render_nats(s.nats, base, modulus));
    if (vmax <= 0.0) vmax = 1.0;
    auto px = [&](double theta) {
        return margin + (theta - t0) / (t1 - t0) * (width - 2 * margin);
    };
    auto py = [&](double value) {
        return height - margin - value / vmax * (height - 2 * margin);
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
    os << "  <rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  margin, height - margin, width - margin, height - margin);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  margin, margin, margin, height - margin);
    os << buf;
    for (double m : markers) {
        if (m < t0 || m > t1) continue;
        std::snprintf(buf, sizeof(buf),
                      "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n",
                      px(m), margin, px(m), height - margin);
        os << buf;
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" "
                      "text-anchor=\"middle\">%.4f</text>\n",
                      px(m), height - margin + 16.0, m);
        os << buf;
    }
    os << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", i ? " " : "", px(samples[i].theta),
                      py(render_nats(samples[i].nats, base, modulus)));
        os << buf;
    }
    os << "\"/>\n</svg>\n";
}

inline json curve_to_json(const EntropyCurve& curve) {
    json terms = json::array();
    for (const auto& t : curve.terms)
        terms.push_back({{"p", t.prime}, {"k", t.exponent}, {"L", t.L}, {"R", t.R}});
    return json{{"kind", "tde"},
                {"modulus", curve.modulus},
                {"terms", terms},
                {"breakpoints", curve.breakpoints}};
}

inline EntropyCurve curve_from_json(const json& j) {
    EntropyCurve curve;
    curve.modulus = j.at("modulus").get<i64>();
    for (const auto& t : j.at("terms")) {
        CurveTerm term;
        term.prime = t.at("p").get<i64>();
        term.exponent = t.at("k").get<int>();
        term.L = t.at("L").get<i64>();
        term.R = t.at("R").get<i64>();
        term.weight = term.exponent * std::log(static_cast<double>(term.prime));
        term.theta_L = arccot(static_cast<double>(-term.L));
        term.theta_R = arccot(static_cast<double>(-term.R));
        curve.terms.push_back(term);
    }
    curve.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    return curve;
}

inline json sectors_to_json(const std::vector<Sector>& sectors) {
    json out = json::array();
    for (const auto& s : sectors) {
        json terms = json::array();
        for (const auto& t : s.terms)
            terms.push_back({{"p", t.prime},
                             {"k", t.exponent},
                             {"piece", piece_name(t.piece)},
                             {"edge", t.edge},
                             {"weight_nats", t.weight}});
        out.push_back({{"theta_lo", s.lo}, {"theta_hi", s.hi}, {"terms", terms}});
    }
    return out;
}

inline json samples_to_json(const std::vector<CurveSample>& samples, const std::string& kind,
                            LogBase base = LogBase::natural, i64 modulus = 2) {
    json rows = json::array();
    for (const auto& s : samples)
        rows.push_back({{"theta", s.theta}, {"entropy", render_nats(s.nats, base, modulus)}});
    return json{{"kind", kind}, {"samples", rows}};
}

inline json estimate_to_json(const EstimateRecord& rec) {
    return json{{"rule", rec.rule},
                {"theta", rec.theta},
                {"half_width", rec.half_width},
                {"rows", rec.rows},
                {"mode", rec.mode.kind == CountMode::exact ? "exact" : "sampled"},
                {"seed", rec.mode.seed},
                {"budget", rec.mode.budget},
                {"count", rec.count},
                {"nats_per_row", rec.nats_per_row},
                {"nats_per_site", rec.nats_per_site}};
}

// ---- rational matrices / vectors ----------------------------------------

inline json rational_matrix_to_json(const StochasticMatrix<Rational>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.n; ++j) row.push_back(m.at(i, j).to_string());
        rows.push_back(row);
    }
    return json{{"n", m.n}, {"rows", rows}};
}

inline json prob_vector_to_json(const ProbVector<Rational>& p) {
    json entries = json::array();
    for (const auto& e : p.entries) entries.push_back(e.to_string());
    json decimals = json::array();
    for (const auto& e : p.entries) decimals.push_back(e.to_double());
    return json{{"n", p.size()}, {"entries", entries}, {"decimal", decimals}};
}

namespace detail {

inline bool parse_scalar(const json& cell, Rational* rat, double* dbl) {
    if (cell.is_string()) {
        try {
            *rat = Rational::parse(cell.get<std::string>());
            *dbl = rat->to_double();
            return true;
        } catch (const std::invalid_argument&) {
            *dbl = std::stod(cell.get<std::string>());
            return false;
        }
    }
    if (cell.is_number_integer()) {
        *rat = Rational(cell.get<i64>());
        *dbl = rat->to_double();
        return true;
    }
    *dbl = cell.get<double>();
    return false;
}

}  // namespace detail

struct ParsedMatrix {
    bool exact = false;  // every entry parsed as a rational and n <= 64
    StochasticMatrix<Rational> rational;
    StochasticMatrix<double> real;
};

/// Matrix JSON {"n":., "rows":[["1/2",...],...]}; entries may be "p/q"
/// strings or plain numbers. Exact mode survives only if every entry is
/// rational and the matrix is small enough for exact elimination.
inline ParsedMatrix parse_matrix_json(const json& j) {
    ParsedMatrix out;
    std::size_t n = j.at("n").get<std::size_t>();
    const json& rows = j.at("rows");
    if (rows.size() != n) throw std::invalid_argument("matrix: wrong row count");
    out.rational.n = n;
    out.real.n = n;
    out.rational.data.assign(n * n, Rational(0));
    out.real.data.assign(n * n, 0.0);
    out.exact = n <= 64;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw std::invalid_argument("matrix: ragged row");
        for (std::size_t k = 0; k < n; ++k) {
            Rational r;
            double d = 0.0;
            bool ok = detail::parse_scalar(rows[i][k], &r, &d);
            out.exact = out.exact && ok;
            out.rational.at(i, k) = r;
            out.real.at(i, k) = d;
        }
    }
    return out;
}

struct ParsedVector {
    bool exact = false;
    ProbVector<Rational> rational;
    ProbVector<double> real;
};

inline ParsedVector parse_vector_json(const json& j) {
    ParsedVector out;
    const json& entries = j.is_array() ? j : j.at("entries");
    out.exact = true;
    for (const auto& cell : entries) {
        Rational r;
        double d = 0.0;
        bool ok = detail::parse_scalar(cell, &r, &d);
        out.exact = out.exact && ok;
        out.rational.entries.push_back(r);
        out.real.entries.push_back(d);
    }
    return out;
}

}  // namespace lcade
