#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcade/emit.hpp"
#include "lcade/estimator.hpp"
#include "lcade/laurent.hpp"
#include "lcade/local_rule.hpp"
#include "lcade/measures.hpp"
#include "lcade/mtde.hpp"
#include "lcade/tde.hpp"

namespace lcade::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

namespace detail {

inline std::string resolve_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("LCADE_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string out = dir;
    if (out.back() != '/') out += '/';
    return out + path;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::string full = resolve_path(path);
    std::ofstream os(full, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + full);
    os << content;
}

inline json load_json(const std::string& path) {
    std::ifstream is(resolve_path(path));
    if (!is) throw std::runtime_error("cannot open input file: " + path);
    return json::parse(is);
}

inline LocalRule load_rule(const std::string& text) { return normalize(parse_rule(text)); }

struct MarkovAuto {
    bool exact = false;
    bool irreducible = true;
    std::optional<MarkovMeasure<Rational>> rational;
    MarkovMeasure<double> real;
};

// Exact rational solve when the input allows it, otherwise (or on
// rational overflow) the float elimination with power-iteration backstop.
inline MarkovAuto markov_auto(const ParsedMatrix& parsed) {
    MarkovAuto out;
    StationaryResult info;
    if (parsed.exact) {
        try {
            out.rational = markov_measure(parsed.rational, &info);
            out.exact = true;
            out.irreducible = info.irreducible;
        } catch (const RationalOverflow&) {
            out.exact = false;
        }
    }
    if (!out.exact) {
        try {
            out.real = markov_measure(parsed.real, &info);
        } catch (const std::domain_error&) {
            out.real.matrix = parsed.real;
            out.real.stationary = stationary_power_iteration(parsed.real);
            info.irreducible = parsed.real.irreducible();
        }
        out.real.exact = false;
        out.irreducible = info.irreducible;
    } else {
        // keep a float mirror for entropy evaluation
        out.real.matrix.n = parsed.real.n;
        out.real.matrix.data = parsed.real.data;
        out.real.stationary.entries.reserve(out.rational->stationary.entries.size());
        for (const auto& e : out.rational->stationary.entries)
            out.real.stationary.entries.push_back(e.to_double());
    }
    return out;
}

inline json permutivity_to_json(const PermutivityReport& report) {
    json factors = json::array();
    for (const auto& f : report.factors)
        factors.push_back({{"p", f.prime},
                           {"k", f.exponent},
                           {"P", f.unit_indices},
                           {"L", f.L},
                           {"R", f.R},
                           {"theta_L", f.theta_L},
                           {"theta_R", f.theta_R}});
    return json{{"leftmost", report.leftmost},
                {"rightmost", report.rightmost},
                {"bipermutative", report.bipermutative},
                {"factors", factors}};
}

inline void emit_text(const std::string& content, const std::string& path) {
    if (path.empty())
        std::cout << content;
    else
        write_file(path, content);
}

}  // namespace detail

/// Run one CLI invocation; argv excludes the program name. Returns the
/// process exit code (0 ok, 1 domain error, 2 usage error).
inline int run(std::vector<std::string> args, std::ostream& diag = std::cerr) {
    CLI::App app{"directional entropy of linear cellular automata over Z_m"};
    app.require_subcommand(1);

    std::string rule_text, out_path, csv_path, svg_path, json_path, sectors_path;
    std::string matrix_path, pi_path, log_base_text = "e", mode_text = "exact";
    std::size_t samples = 721;
    double theta = std::numbers::pi / 2.0;
    i64 half_width = 2, rows = 4, q = 1, dir_a = 0, dir_b = 1;
    u64 seed = 0, budget = 1ULL << 24;

    auto add_rule = [&](CLI::App* cmd) {
        cmd->add_option("rule", rule_text, "local rule, e.g. \"2x[-1]+2x[0]+3x[1] % 4\"")
            ->required();
    };
    auto add_log_base = [&](CLI::App* cmd) {
        cmd->add_option("--log-base", log_base_text, "entropy unit: e, 2, 10 or m");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "factorization, permutivity and inverse");
    add_rule(analyze);
    add_log_base(analyze);
    analyze->add_option("--out", out_path, "write the JSON report here");

    CLI::App* tde_cmd = app.add_subcommand("tde", "topological directional entropy curve");
    add_rule(tde_cmd);
    add_log_base(tde_cmd);
    tde_cmd->add_option("--samples", samples, "theta grid size (breakpoints are added)");
    tde_cmd->add_option("--out,--csv", csv_path, "curve CSV path");
    tde_cmd->add_option("--svg", svg_path, "curve SVG path");
    tde_cmd->add_option("--json", json_path, "curve JSON path");
    tde_cmd->add_option("--sectors", sectors_path, "sector report JSON path");

    CLI::App* mtde_cmd = app.add_subcommand("mtde", "uniform-measure directional entropy on the circle");
    add_rule(mtde_cmd);
    add_log_base(mtde_cmd);
    mtde_cmd->add_option("--samples", samples, "theta grid size (boundaries are added)");
    mtde_cmd->add_option("--out,--csv", csv_path, "curve CSV path");
    mtde_cmd->add_option("--svg", svg_path, "curve SVG path");
    mtde_cmd->add_option("--json", json_path, "curve JSON path");

    CLI::App* bounds = app.add_subcommand("bounds", "Bernoulli/Markov directional entropy bounds");
    add_rule(bounds);
    add_log_base(bounds);
    bounds->add_option("--pi", pi_path, "probability vector JSON");
    bounds->add_option("--matrix", matrix_path, "stochastic matrix JSON");
    bounds->add_option("-q,--q", q, "vertical component of the direction (s, q)");
    bounds->add_option("--out", out_path, "write the JSON report here");

    CLI::App* markov = app.add_subcommand("markov", "stationary distribution and entropy rate");
    markov->add_option("--matrix", matrix_path, "stochastic matrix JSON")->required();
    add_log_base(markov);
    markov->add_option("-a", dir_a, "direction component a");
    markov->add_option("-b", dir_b, "direction component b");
    markov->add_option("--out", out_path, "write the JSON report here");

    CLI::App* estimate = app.add_subcommand("estimate", "brute-force window pattern estimate");
    add_rule(estimate);
    estimate->add_option("--theta", theta, "window angle in (0, pi)");
    estimate->add_option("--half-width", half_width, "window half width (>= 1)");
    estimate->add_option("--rows", rows, "window time rows (>= 1)");
    estimate->add_option("--mode", mode_text, "exact or sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    estimate->add_option("--seed", seed, "sampled-mode RNG seed");
    estimate->add_option("--budget", budget, "segment budget");
    estimate->add_option("--out", out_path, "write the JSON record here");

    CLI::App* invert_cmd = app.add_subcommand("invert", "inverse rule, if one exists");
    add_rule(invert_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        diag << e.what() << "\n";
        return kExitUsageError;
    }

    try {
        LogBase base = parse_log_base(log_base_text);

        if (analyze->parsed()) {
            LocalRule rule = detail::load_rule(rule_text);
            Modulus mod = factorize(rule.modulus);
            json factors = json::array();
            for (const auto& f : mod.factors) factors.push_back({{"p", f.prime}, {"k", f.exponent}});
            json report{{"rule", rule_to_string(rule)},
                        {"modulus", rule.modulus},
                        {"factors", factors},
                        {"span", {{"l", rule.l}, {"r", rule.r}}},
                        {"permutivity", detail::permutivity_to_json(permutivity_report(rule))},
                        {"topological_entropy",
                         render_nats(topological_entropy(rule), base, rule.modulus)},
                        {"log_base", log_base_text}};
            auto bad = invertibility_violations(rule);
            report["invertible"] = bad.empty();
            if (bad.empty())
                report["inverse"] = rule_to_string(invert(rule));
            else
                report["violating_primes"] = bad;
            detail::emit_text(report.dump(2) + "\n", out_path);
            return kExitOk;
        }

        if (tde_cmd->parsed()) {
            LocalRule rule = detail::load_rule(rule_text);
            EntropyCurve curve = tde_curve(rule);
            auto curve_samples = sample_tde_curve(curve, samples);
            if (!csv_path.empty()) {
                std::ostringstream os;
                emit_csv(os, curve_samples, base, rule.modulus);
                detail::write_file(csv_path, os.str());
            }
            if (!svg_path.empty()) {
                std::ostringstream os;
                emit_svg(os, curve_samples, curve.breakpoints, base, rule.modulus);
                detail::write_file(svg_path, os.str());
            }
            if (!json_path.empty())
                detail::write_file(json_path, curve_to_json(curve).dump(2) + "\n");
            if (!sectors_path.empty())
                detail::write_file(sectors_path,
                                   sectors_to_json(closed_form_report(curve)).dump(2) + "\n");
            if (csv_path.empty() && svg_path.empty() && json_path.empty() && sectors_path.empty()) {
                json report = curve_to_json(curve);
                report["sectors"] = sectors_to_json(closed_form_report(curve));
                report["entropy_at_pi_over_2"] =
                    render_nats(eval(curve, std::numbers::pi / 2.0), base, rule.modulus);
                std::cout << report.dump(2) << "\n";
            }
            return kExitOk;
        }

        if (mtde_cmd->parsed()) {
            LocalRule rule = detail::load_rule(rule_text);
            auto curve_samples = mtde_circle_curve(rule, samples);
            auto boundaries = mtde_sector_boundaries(rule);
            if (!csv_path.empty()) {
                std::ostringstream os;
                emit_csv(os, curve_samples, base, rule.modulus);
                detail::write_file(csv_path, os.str());
            }
            if (!svg_path.empty()) {
                std::ostringstream os;
                emit_svg(os, curve_samples, boundaries, base, rule.modulus);
                detail::write_file(svg_path, os.str());
            }
            if (!json_path.empty()) {
                json report = samples_to_json(curve_samples, "mtde", base, rule.modulus);
                report["boundaries"] = boundaries;
                detail::write_file(json_path, report.dump(2) + "\n");
            }
            if (csv_path.empty() && svg_path.empty() && json_path.empty()) {
                json report = samples_to_json(curve_samples, "mtde", base, rule.modulus);
                report["boundaries"] = boundaries;
                std::cout << report.dump(2) << "\n";
            }
            return kExitOk;
        }

        if (bounds->parsed()) {
            LocalRule rule = detail::load_rule(rule_text);
            if (pi_path.empty() && matrix_path.empty())
                throw std::invalid_argument("bounds: provide --pi and/or --matrix");
            json report{{"rule", rule_to_string(rule)},
                        {"q", q},
                        {"span_width", rule.r - rule.l},
                        {"log_base", log_base_text}};
            if (!pi_path.empty()) {
                ParsedVector pv = parse_vector_json(detail::load_json(pi_path));
                double bound = pv.exact
                                   ? bernoulli_bound(rule, pv.rational, static_cast<double>(q))
                                   : bernoulli_bound(rule, pv.real, static_cast<double>(q));
                report["bernoulli"] = {
                    {"entropy", render_nats(pv.exact ? shannon_entropy(pv.rational)
                                                     : shannon_entropy(pv.real),
                                            base, rule.modulus)},
                    {"bound", render_nats(bound, base, rule.modulus)}};
            }
            if (!matrix_path.empty()) {
                auto mk = detail::markov_auto(parse_matrix_json(detail::load_json(matrix_path)));
                if (!mk.irreducible)
                    diag << "warning: matrix is reducible; stationary vector may be non-unique\n";
                double bound = mk.exact ? markov_bound(rule, *mk.rational, static_cast<double>(q))
                                        : markov_bound(rule, mk.real, static_cast<double>(q));
                double rate = mk.exact ? entropy_rate(*mk.rational) : entropy_rate(mk.real);
                report["markov"] = {{"entropy_rate", render_nats(rate, base, rule.modulus)},
                                    {"bound", render_nats(bound, base, rule.modulus)},
                                    {"exact", mk.exact}};
            }
            detail::emit_text(report.dump(2) + "\n", out_path);
            return kExitOk;
        }

        if (markov->parsed()) {
            auto parsed = parse_matrix_json(detail::load_json(matrix_path));
            auto mk = detail::markov_auto(parsed);
            if (!mk.irreducible)
                diag << "warning: matrix is reducible; stationary vector may be non-unique\n";
            i64 n = static_cast<i64>(parsed.real.n);
            json report{{"n", n}, {"exact", mk.exact}, {"irreducible", mk.irreducible}};
            if (mk.exact) {
                report["stationary"] = prob_vector_to_json(mk.rational->stationary);
            } else {
                report["stationary"] = {{"n", n}, {"decimal", mk.real.stationary.entries}};
            }
            double ln_base = log_base_divisor(base, n);
            auto rows_h = row_entropies(mk.real.matrix);
            for (auto& h : rows_h) h /= ln_base;
            double rate = (mk.exact ? entropy_rate(*mk.rational) : entropy_rate(mk.real)) / ln_base;
            report["row_entropies"] = rows_h;
            report["entropy_rate"] = rate;
            report["directional"] = json::array(
                {{{"a", dir_a}, {"b", dir_b},
                  {"value", static_cast<double>(dir_b < 0 ? -dir_b : dir_b) * rate}}});
            report["log_base"] = log_base_text;
            detail::emit_text(report.dump(2) + "\n", out_path);
            return kExitOk;
        }

        if (estimate->parsed()) {
            LocalRule rule = detail::load_rule(rule_text);
            CountMode mode;
            mode.kind = mode_text == "exact" ? CountMode::exact : CountMode::sampled;
            mode.seed = seed;
            mode.budget = budget;
            EstimateRecord rec = estimate_tde(rule, theta, half_width, rows, mode);
            rec.rule = rule_to_string(rule);
            detail::emit_text(estimate_to_json(rec).dump(2) + "\n", out_path);
            return kExitOk;
        }

        if (invert_cmd->parsed()) {
            LocalRule rule = detail::load_rule(rule_text);
            std::cout << rule_to_string(invert(rule)) << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitUsageError;
}

}  // namespace lcade::cli
