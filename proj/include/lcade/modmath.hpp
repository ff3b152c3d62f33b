#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcade {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Largest modulus we accept; keeps every a*b below 2^62 so plain
// int64 arithmetic with reduction after each multiply is safe.
inline constexpr i64 kMaxModulus = 2147483647;  // 2^31 - 1

inline i64 mod_reduce(i64 a, i64 m) {
    i64 v = a % m;
    return v < 0 ? v + m : v;
}

inline i64 mod_add(i64 a, i64 b, i64 m) { return mod_reduce(a + b, m); }

inline i64 mod_mul(i64 a, i64 b, i64 m) {
    return mod_reduce((a % m) * (b % m), m);
}

inline i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Extended gcd: returns g and x, y with a*x + b*y = g.
struct EgcdResult {
    i64 g;
    i64 x;
    i64 y;
};

inline EgcdResult egcd(i64 a, i64 b) {
    i64 old_r = a, r = b;
    i64 old_s = 1, s = 0;
    i64 old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
    return {old_r, old_s, old_t};
}

inline i64 mod_inverse(i64 a, i64 m) {
    auto e = egcd(mod_reduce(a, m), m);
    if (e.g != 1)
        throw std::domain_error("mod_inverse: " + std::to_string(a) +
                                " is not a unit modulo " + std::to_string(m));
    return mod_reduce(e.x, m);
}

inline i64 mod_pow(i64 base, i64 exp, i64 m) {
    i64 result = 1 % m;
    base = mod_reduce(base, m);
    while (exp > 0) {
        if (exp & 1) result = mod_mul(result, base, m);
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return result;
}

struct PrimePower {
    i64 prime = 2;
    int exponent = 1;

    i64 value() const {
        i64 v = 1;
        for (int i = 0; i < exponent; ++i) v *= prime;
        return v;
    }
    bool operator==(const PrimePower&) const = default;
};

/// Prime factorization record for a modulus m = p_1^{k_1} ... p_h^{k_h},
/// primes strictly increasing.
struct Modulus {
    i64 m = 2;
    std::vector<PrimePower> factors;

    bool operator==(const Modulus&) const = default;
};

/// Complete factorization by trial division.
inline Modulus factorize(i64 m) {
    if (m < 2) throw std::domain_error("factorize: modulus must be >= 2");
    if (m > kMaxModulus)
        throw std::domain_error("factorize: modulus exceeds 2^31-1");
    Modulus result;
    result.m = m;
    i64 rest = m;
    for (i64 p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        int k = 0;
        while (rest % p == 0) { rest /= p; ++k; }
        result.factors.push_back({p, k});
    }
    if (rest > 1) result.factors.push_back({rest, 1});
    return result;
}

// Combine x = r1 mod m1, x = r2 mod m2 for coprime m1, m2.
inline i64 crt_pair(i64 r1, i64 m1, i64 r2, i64 m2) {
    auto e = egcd(m1, m2);
    if (e.g != 1) throw std::domain_error("crt_pair: moduli not coprime");
    i64 m = m1 * m2;
    // x = r1 + m1 * ((r2 - r1) * inv(m1, m2) mod m2)
    i64 diff = mod_reduce(r2 - r1, m2);
    i64 inv = mod_reduce(e.x, m2);
    i64 k = mod_mul(diff, inv, m2);
    return mod_reduce(r1 + m1 * k, m);
}

/// Solve x = r_i mod (p_i^{k_i}) across all factors; all residues reduced.
inline i64 crt_combine(const std::vector<i64>& residues, const Modulus& mod) {
    if (residues.size() != mod.factors.size())
        throw std::invalid_argument("crt_combine: residue count mismatch");
    i64 x = residues.empty() ? 0 : mod_reduce(residues[0], mod.factors[0].value());
    i64 acc = residues.empty() ? 1 : mod.factors[0].value();
    for (std::size_t i = 1; i < residues.size(); ++i) {
        i64 mi = mod.factors[i].value();
        x = crt_pair(x, acc, mod_reduce(residues[i], mi), mi);
        acc *= mi;
    }
    return x;
}

}  // namespace lcade
