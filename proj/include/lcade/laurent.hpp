#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcade/local_rule.hpp"
#include "lcade/modmath.hpp"

namespace lcade {

/// Finite Laurent polynomial over Z_m, exponent -> residue. Zero
/// coefficients are never stored.
struct LaurentPoly {
    i64 modulus = 2;
    std::map<i64, i64> terms;

    i64 coeff(i64 exp) const {
        auto it = terms.find(exp);
        return it == terms.end() ? 0 : it->second;
    }
    void set(i64 exp, i64 value) {
        i64 v = mod_reduce(value, modulus);
        if (v == 0)
            terms.erase(exp);
        else
            terms[exp] = v;
    }
    bool is_zero() const { return terms.empty(); }
    bool is_one() const {
        return terms.size() == 1 && terms.count(0) == 1 && terms.at(0) == 1;
    }

    bool operator==(const LaurentPoly&) const = default;
};

inline LaurentPoly laurent_one(i64 m) {
    LaurentPoly p{m, {}};
    p.set(0, 1);
    return p;
}

inline LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.modulus != b.modulus)
        throw std::invalid_argument("laurent_mul: modulus mismatch");
    LaurentPoly out{a.modulus, {}};
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms)
            out.set(ea + eb, out.coeff(ea + eb) + mod_mul(ca, cb, a.modulus));
    return out;
}

inline LaurentPoly laurent_scale(const LaurentPoly& a, i64 c) {
    LaurentPoly out{a.modulus, {}};
    for (const auto& [e, v] : a.terms) out.set(e, mod_mul(v, c, a.modulus));
    return out;
}

// Multiply by c * X^shift.
inline LaurentPoly laurent_shift_scale(const LaurentPoly& a, i64 c, i64 shift) {
    LaurentPoly out{a.modulus, {}};
    for (const auto& [e, v] : a.terms)
        out.set(e + shift, mod_mul(v, c, a.modulus));
    return out;
}

/// Site/exponent convention: the rule term a_i x_i maps to a_i X^{-i}.
inline LaurentPoly to_laurent(const LocalRule& rule) {
    LaurentPoly p{rule.modulus, {}};
    for (i64 i = rule.l; i <= rule.r; ++i) p.set(-i, rule.coeff(i));
    return p;
}

inline LocalRule from_laurent(const LaurentPoly& poly, i64 modulus) {
    if (poly.is_zero()) return zero_rule(modulus);
    i64 lo = -poly.terms.rbegin()->first;  // largest exponent -> smallest site
    i64 hi = -poly.terms.begin()->first;
    LocalRule rule;
    rule.modulus = modulus;
    rule.l = lo;
    rule.r = hi;
    rule.coeffs.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto& [e, c] : poly.terms)
        rule.coeffs[static_cast<std::size_t>(-e - lo)] = mod_reduce(c, modulus);
    return normalize(rule);
}

/// Composition of linear rules is the Laurent product of their series.
inline LocalRule compose(const LocalRule& f, const LocalRule& g) {
    if (f.modulus != g.modulus)
        throw std::invalid_argument("compose: modulus mismatch");
    return from_laurent(laurent_mul(to_laurent(f), to_laurent(g)), f.modulus);
}

inline LocalRule power(const LocalRule& f, i64 n) {
    if (n < 0) throw std::invalid_argument("power: negative exponent");
    LaurentPoly acc = laurent_one(f.modulus);
    LaurentPoly base = to_laurent(f);
    i64 e = n;
    while (e > 0) {
        if (e & 1) acc = laurent_mul(acc, base);
        base = laurent_mul(base, base);
        e >>= 1;
    }
    return from_laurent(acc, f.modulus);
}

/// Reduce the rule modulo the i-th prime-power factor of its modulus,
/// then normalize.
inline LocalRule project(const LocalRule& rule, const Modulus& mod, std::size_t factor_index) {
    if (factor_index >= mod.factors.size())
        throw std::out_of_range("project: factor index out of range");
    i64 pk = mod.factors[factor_index].value();
    LocalRule out = rule;
    out.modulus = pk;
    for (auto& c : out.coeffs) c = mod_reduce(c, pk);
    return normalize(out);
}

inline LocalRule project(const LocalRule& rule, std::size_t factor_index) {
    return project(rule, factorize(rule.modulus), factor_index);
}

/// Inverse of project: recombine per-factor rules into one rule mod m by
/// CRT on each coefficient. Factor order must match `mod.factors`.
inline LocalRule crt_recombine(const std::vector<LocalRule>& parts, const Modulus& mod) {
    if (parts.size() != mod.factors.size())
        throw std::invalid_argument("crt_recombine: factor count mismatch");
    if (parts.empty()) throw std::invalid_argument("crt_recombine: no parts");
    i64 lo = parts[0].l, hi = parts[0].r;
    bool all_zero = true;
    for (const auto& p : parts) {
        if (!p.is_zero()) {
            if (all_zero) { lo = p.l; hi = p.r; all_zero = false; }
            lo = std::min(lo, p.l);
            hi = std::max(hi, p.r);
        }
    }
    if (all_zero) return zero_rule(mod.m);
    LocalRule out;
    out.modulus = mod.m;
    out.l = lo;
    out.r = hi;
    out.coeffs.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    std::vector<i64> residues(parts.size());
    for (i64 i = lo; i <= hi; ++i) {
        for (std::size_t f = 0; f < parts.size(); ++f)
            residues[f] = parts[f].coeff(i);
        out.coeffs[static_cast<std::size_t>(i - lo)] = crt_combine(residues, mod);
    }
    return normalize(out);
}

struct NotInvertibleError : std::domain_error {
    std::vector<i64> violating_primes;
    explicit NotInvertibleError(std::vector<i64> primes)
        : std::domain_error(describe(primes)), violating_primes(std::move(primes)) {}

    static std::string describe(const std::vector<i64>& primes) {
        std::string msg = "rule is not invertible; offending prime(s):";
        for (i64 p : primes) msg += " " + std::to_string(p);
        return msg;
    }
};

/// Primes p | m for which the rule does NOT have exactly one unit
/// coefficient mod p. Empty result means the rule is invertible.
inline std::vector<i64> invertibility_violations(const LocalRule& rule) {
    Modulus mod = factorize(rule.modulus);
    std::vector<i64> bad;
    for (const auto& f : mod.factors) {
        int units = 0;
        for (i64 c : rule.coeffs)
            if (gcd_i64(c, f.prime) == 1) ++units;
        if (units != 1) bad.push_back(f.prime);
    }
    return bad;
}

inline bool is_invertible(const LocalRule& rule) {
    return invertibility_violations(rule).empty();
}

namespace detail {

// Inverse series mod p^k. The unique unit coefficient a_j lets us write
// U = a_j X^e (1 + pN); then S = a_j^{-1} X^{-e} sum_{t<k} (-pN)^t, which
// terminates because pN is nilpotent mod p^k.
inline LaurentPoly invert_prime_power(const LaurentPoly& u, i64 p, int k) {
    i64 pk = u.modulus;
    i64 unit_exp = 0, unit_coeff = 0;
    for (const auto& [e, c] : u.terms) {
        if (gcd_i64(c, p) == 1) {
            unit_exp = e;
            unit_coeff = c;
        }
    }
    i64 inv_unit = mod_inverse(unit_coeff, pk);
    // pN = inv_unit * X^{-unit_exp} * U - 1
    LaurentPoly pn = laurent_shift_scale(u, inv_unit, -unit_exp);
    pn.set(0, pn.coeff(0) - 1);
    LaurentPoly sum = laurent_one(pk);
    LaurentPoly term = laurent_one(pk);
    for (int t = 1; t < k; ++t) {
        term = laurent_mul(term, pn);
        term = laurent_scale(term, pk - 1);  // multiply by -1
        for (const auto& [e, c] : term.terms)
            sum.set(e, sum.coeff(e) + c);
        if (term.is_zero()) break;
    }
    return laurent_shift_scale(sum, inv_unit, -unit_exp);
}

}  // namespace detail

/// Inverse local rule g with compose(f, g) = identity, or
/// NotInvertibleError carrying the violating primes. Per prime power the
/// inverse comes from the terminating geometric series of the rule's
/// series; components recombine by CRT on coefficients.
inline LocalRule invert(const LocalRule& rule) {
    auto bad = invertibility_violations(rule);
    if (!bad.empty()) throw NotInvertibleError(std::move(bad));
    Modulus mod = factorize(rule.modulus);
    std::vector<LocalRule> parts;
    parts.reserve(mod.factors.size());
    for (std::size_t i = 0; i < mod.factors.size(); ++i) {
        const auto& f = mod.factors[i];
        LocalRule component = project(rule, mod, i);
        LaurentPoly inv = detail::invert_prime_power(to_laurent(component), f.prime, f.exponent);
        parts.push_back(from_laurent(inv, f.value()));
    }
    return crt_recombine(parts, mod);
}

}  // namespace lcade
