#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcade/modmath.hpp"

namespace lcade {

/// Linear local rule f(x_l,...,x_r) = sum a_i x_i (mod m) with memory
/// span [l, r] and residues a_l..a_r in [0, m).
///
/// Minimal-memory (normalized) form keeps a_l != 0 and a_r != 0; the one
/// exception is the zero rule, canonically span [0,0] with coefficient 0.
struct LocalRule {
    i64 modulus = 2;
    i64 l = 0;
    i64 r = 0;
    std::vector<i64> coeffs{0};

    i64 coeff(i64 i) const {
        if (i < l || i > r) return 0;
        return coeffs[static_cast<std::size_t>(i - l)];
    }
    i64 width() const { return r - l + 1; }
    bool is_zero() const {
        for (i64 c : coeffs)
            if (c != 0) return false;
        return true;
    }
    bool is_identity() const { return l == 0 && r == 0 && coeffs.size() == 1 && coeffs[0] == 1; }

    /// One output symbol from the neighborhood window x_l..x_r.
    i64 apply(std::span<const i64> window) const {
        i64 acc = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            acc = mod_reduce(acc + coeffs[i] * mod_reduce(window[i], modulus), modulus);
        return acc;
    }

    bool operator==(const LocalRule&) const = default;
};

inline LocalRule zero_rule(i64 m) { return LocalRule{m, 0, 0, {0}}; }
inline LocalRule identity_rule(i64 m) { return LocalRule{m, 0, 0, {1 % m}}; }

/// Trim coefficients that vanish mod m from both ends so a_l, a_r != 0.
/// An all-zero rule collapses to the canonical zero rule.
inline LocalRule normalize(const LocalRule& rule) {
    LocalRule out = rule;
    for (auto& c : out.coeffs) c = mod_reduce(c, out.modulus);
    std::size_t lo = 0, hi = out.coeffs.size();
    while (lo < hi && out.coeffs[lo] == 0) ++lo;
    while (hi > lo && out.coeffs[hi - 1] == 0) --hi;
    if (lo == hi) return zero_rule(out.modulus);
    out.l = rule.l + static_cast<i64>(lo);
    out.r = rule.l + static_cast<i64>(hi) - 1;
    out.coeffs.assign(out.coeffs.begin() + static_cast<std::ptrdiff_t>(lo),
                      out.coeffs.begin() + static_cast<std::ptrdiff_t>(hi));
    return out;
}

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

namespace detail {

class RuleParser {
public:
    explicit RuleParser(const std::string& text) : text_(text) {}

    LocalRule parse() {
        skip_ws();
        if (eof()) throw ParseError("empty rule", pos_);
        std::vector<std::pair<i64, u64>> terms;  // (index, raw coefficient)
        terms.push_back(parse_term());
        skip_ws();
        while (!eof() && peek() == '+') {
            ++pos_;
            terms.push_back(parse_term());
            skip_ws();
        }
        if (eof() || peek() != '%')
            throw ParseError("expected '+' or '%'", pos_);
        ++pos_;
        skip_ws();
        u64 m = parse_uint("modulus");
        skip_ws();
        if (!eof()) throw ParseError("trailing characters", pos_);
        if (m < 2) throw ParseError("modulus must be >= 2", pos_);
        if (m > static_cast<u64>(kMaxModulus))
            throw ParseError("modulus exceeds 2^31-1", pos_);

        std::set<i64> seen;
        i64 lo = terms.front().first, hi = terms.front().first;
        for (const auto& [idx, c] : terms) {
            if (!seen.insert(idx).second)
                throw ParseError("duplicate index x[" + std::to_string(idx) + "]", pos_);
            lo = std::min(lo, idx);
            hi = std::max(hi, idx);
        }
        LocalRule rule;
        rule.modulus = static_cast<i64>(m);
        rule.l = lo;
        rule.r = hi;
        rule.coeffs.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (const auto& [idx, c] : terms)
            rule.coeffs[static_cast<std::size_t>(idx - lo)] =
                static_cast<i64>(c % m);
        return rule;
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    u64 parse_uint(const char* what) {
        skip_ws();
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError(std::string("expected ") + what, pos_);
        u64 v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            u64 d = static_cast<u64>(peek() - '0');
            if (v > (UINT64_MAX - d) / 10)
                throw ParseError(std::string(what) + " out of range", pos_);
            v = v * 10 + d;
            ++pos_;
        }
        return v;
    }

    i64 parse_index() {
        skip_ws();
        bool neg = false;
        if (!eof() && (peek() == '-' || peek() == '+')) {
            neg = peek() == '-';
            ++pos_;
        }
        u64 v = parse_uint("index");
        if (v > static_cast<u64>(INT32_MAX))
            throw ParseError("index out of range", pos_);
        return neg ? -static_cast<i64>(v) : static_cast<i64>(v);
    }

    std::pair<i64, u64> parse_term() {
        skip_ws();
        u64 coeff = parse_uint("coefficient");
        skip_ws();
        if (eof() || peek() != 'x') throw ParseError("expected 'x['", pos_);
        ++pos_;
        skip_ws();
        if (eof() || peek() != '[') throw ParseError("expected '['", pos_);
        ++pos_;
        i64 idx = parse_index();
        skip_ws();
        if (eof() || peek() != ']') throw ParseError("expected ']'", pos_);
        ++pos_;
        return {idx, coeff};
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse "c x[i] + ... % m". Residues are reduced mod m; the span is the
/// index hull of the written terms, so the result is not yet normalized.
inline LocalRule parse_rule(const std::string& text) {
    return detail::RuleParser(text).parse();
}

inline std::string rule_to_string(const LocalRule& rule) {
    std::string out;
    bool first = true;
    for (i64 i = rule.l; i <= rule.r; ++i) {
        i64 c = rule.coeff(i);
        if (c == 0 && !rule.is_zero()) continue;
        if (!first) out += "+";
        out += std::to_string(c) + "x[" + std::to_string(i) + "]";
        first = false;
    }
    if (first) out = "0x[0]";
    out += " % " + std::to_string(rule.modulus);
    return out;
}

/// Finite symbol segment with index range [lo, lo + size - 1].
struct Segment {
    i64 lo = 0;
    std::vector<i64> sym;

    i64 hi() const { return lo + static_cast<i64>(sym.size()) - 1; }
    i64 at(i64 index) const { return sym[static_cast<std::size_t>(index - lo)]; }
};

/// Apply the rule across a finite segment [a, b]; output indices
/// [a - l, b - r]. No wraparound or padding, so the window shrinks by
/// the memory span.
inline Segment step(const LocalRule& rule, const Segment& input) {
    i64 in_lo = input.lo, in_hi = input.hi();
    if (in_hi - in_lo < rule.r - rule.l)
        throw std::invalid_argument("step: segment shorter than the rule span");
    Segment out;
    out.lo = in_lo - rule.l;
    i64 out_hi = in_hi - rule.r;
    out.sym.resize(static_cast<std::size_t>(out_hi - out.lo + 1));
    for (i64 n = out.lo; n <= out_hi; ++n) {
        i64 acc = 0;
        for (i64 i = rule.l; i <= rule.r; ++i)
            acc = mod_reduce(acc + rule.coeff(i) * input.at(n + i), rule.modulus);
        out.sym[static_cast<std::size_t>(n - out.lo)] = acc;
    }
    return out;
}

}  // namespace lcade
