#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "lcade/local_rule.hpp"
#include "lcade/rational.hpp"

namespace lcade {

template <typename T>
concept ProbabilityScalar = std::is_same_v<T, Rational> || std::is_same_v<T, double>;

namespace detail {

inline double scalar_to_double(const Rational& v) { return v.to_double(); }
inline double scalar_to_double(double v) { return v; }

template <ProbabilityScalar T>
bool scalar_nonneg(const T& v) {
    if constexpr (std::is_same_v<T, Rational>)
        return v.num() >= 0;
    else
        return v >= 0.0;
}

template <ProbabilityScalar T>
bool sums_to_one(const std::vector<T>& entries) {
    if constexpr (std::is_same_v<T, Rational>) {
        Rational sum(0);
        for (const auto& e : entries) sum += e;
        return sum == Rational(1);
    } else {
        double sum = 0.0;
        for (double e : entries) sum += e;
        return std::abs(sum - 1.0) <= 1e-12;
    }
}

}  // namespace detail

/// Probability vector; entries nonnegative summing to 1 (exactly for
/// rationals, to 1e-12 for doubles).
template <ProbabilityScalar T>
struct ProbVector {
    std::vector<T> entries;

    std::size_t size() const { return entries.size(); }

    void validate() const {
        if (entries.empty()) throw std::invalid_argument("probability vector is empty");
        for (const auto& e : entries)
            if (!detail::scalar_nonneg(e))
                throw std::invalid_argument("probability vector has a negative entry");
        if (!detail::sums_to_one(entries))
            throw std::invalid_argument("probability vector does not sum to 1");
    }
};

/// Row-stochastic n x n matrix.
template <ProbabilityScalar T>
struct StochasticMatrix {
    std::size_t n = 0;
    std::vector<T> data;  // row-major

    const T& at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
    T& at(std::size_t i, std::size_t j) { return data[i * n + j]; }

    void validate() const {
        if (n == 0 || data.size() != n * n)
            throw std::invalid_argument("stochastic matrix has wrong shape");
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<T> row(data.begin() + static_cast<std::ptrdiff_t>(i * n),
                               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
            for (const auto& e : row)
                if (!detail::scalar_nonneg(e))
                    throw std::invalid_argument("stochastic matrix has a negative entry");
            if (!detail::sums_to_one(row))
                throw std::invalid_argument("stochastic matrix row does not sum to 1");
        }
    }

    /// Strong connectivity of the positive-entry digraph.
    bool irreducible() const {
        auto reach = [&](bool forward) {
            std::vector<char> seen(n, 0);
            std::vector<std::size_t> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                std::size_t u = stack.back();
                stack.pop_back();
                for (std::size_t w = 0; w < n; ++w) {
                    const T& e = forward ? at(u, w) : at(w, u);
                    bool pos = detail::scalar_to_double(e) > 0.0;
                    if (pos && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            for (char s : seen)
                if (!s) return false;
            return true;
        };
        return reach(true) && reach(false);
    }
};

template <ProbabilityScalar T>
struct MarkovMeasure {
    StochasticMatrix<T> matrix;
    ProbVector<T> stationary;
    bool exact = std::is_same_v<T, Rational>;
};

/// Shannon entropy -sum p ln p in nats, with 0 ln 0 = 0.
template <ProbabilityScalar T>
double shannon_entropy(const ProbVector<T>& p) {
    p.validate();
    double h = 0.0;
    for (const auto& e : p.entries) {
        double v = detail::scalar_to_double(e);
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

struct StationaryResult {
    bool irreducible = true;  // caller should warn when false
};

/// Solve pi T = pi with sum(pi) = 1 by Gaussian elimination on
/// (T^t - I), replacing one equation by the normalization row. Exact
/// over rationals; partial-pivoted over doubles.
template <ProbabilityScalar T>
ProbVector<T> stationary(const StochasticMatrix<T>& m, StationaryResult* info = nullptr) {
    m.validate();
    if (info) info->irreducible = m.irreducible();
    const std::size_t n = m.n;
    // Rows 0..n-2: sum_i pi_i (t_ij - delta_ij) = 0 for j = 0..n-2.
    // Row n-1: sum_i pi_i = 1.
    std::vector<std::vector<T>> a(n, std::vector<T>(n + 1, T(0)));
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            a[j][i] = m.at(i, j);
            if (i == j) a[j][i] -= T(1);
        }
    }
    for (std::size_t i = 0; i < n; ++i) a[n - 1][i] = T(1);
    a[n - 1][n] = T(1);

    // RREF with free columns pinned to zero, so one valid stationary
    // vector comes out even for reducible chains.
    std::vector<std::ptrdiff_t> pivot_row_of(n, -1);
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < n && pivot_row < n; ++col) {
        std::size_t pivot = pivot_row;
        if constexpr (std::is_same_v<T, double>) {
            for (std::size_t r = pivot_row + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
            if (std::abs(a[pivot][col]) < 1e-13) continue;  // free column
        } else {
            while (pivot < n && a[pivot][col].is_zero()) ++pivot;
            if (pivot >= n) continue;  // free column
        }
        std::swap(a[pivot_row], a[pivot]);
        T inv_pivot = T(1) / a[pivot_row][col];
        for (std::size_t k = col; k <= n; ++k) a[pivot_row][k] *= inv_pivot;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == pivot_row) continue;
            T f = a[r][col];
            if (detail::scalar_to_double(f) == 0.0) continue;
            for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[pivot_row][k];
        }
        pivot_row_of[col] = static_cast<std::ptrdiff_t>(pivot_row);
        ++pivot_row;
    }
    ProbVector<T> pi;
    pi.entries.assign(n, T(0));
    for (std::size_t col = 0; col < n; ++col)
        if (pivot_row_of[col] >= 0)
            pi.entries[col] = a[static_cast<std::size_t>(pivot_row_of[col])][n];
    if constexpr (std::is_same_v<T, double>) {
        // Clear elimination noise before validation.
        double sum = 0.0;
        for (auto& e : pi.entries) {
            if (e < 0.0 && e > -1e-12) e = 0.0;
            sum += e;
        }
        for (auto& e : pi.entries) e /= sum;
    }
    pi.validate();
    // The normalization row replaced nothing, so confirm pi T = pi.
    for (std::size_t j = 0; j < n; ++j) {
        T acc(0);
        for (std::size_t i = 0; i < n; ++i) acc += pi.entries[i] * m.at(i, j);
        double residual = std::abs(detail::scalar_to_double(acc) -
                                   detail::scalar_to_double(pi.entries[j]));
        if constexpr (std::is_same_v<T, Rational>) {
            if (acc != pi.entries[j])
                throw std::domain_error("stationary: elimination produced a non-fixed point");
        } else if (residual > 1e-10) {
            throw std::domain_error("stationary: residual too large, use power iteration");
        }
    }
    return pi;
}

/// Power iteration fallback for float matrices whose elimination is too
/// ill-conditioned; iterates pi <- pi T until the residual is tiny.
inline ProbVector<double> stationary_power_iteration(const StochasticMatrix<double>& m,
                                                     double tol = 1e-12,
                                                     std::size_t max_iter = 200000) {
    m.validate();
    const std::size_t n = m.n;
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += pi[i] * m.at(i, j);
            next[j] = acc;
        }
        double residual = 0.0, sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            residual = std::max(residual, std::abs(next[j] - pi[j]));
            sum += next[j];
        }
        for (std::size_t j = 0; j < n; ++j) pi[j] = next[j] / sum;
        if (residual <= tol) return ProbVector<double>{pi};
    }
    throw std::domain_error("stationary_power_iteration: no convergence");
}

template <ProbabilityScalar T>
MarkovMeasure<T> markov_measure(const StochasticMatrix<T>& m, StationaryResult* info = nullptr) {
    return MarkovMeasure<T>{m, stationary(m, info)};
}

/// Row entropies H_i = -sum_j t_ij ln t_ij, in nats.
template <ProbabilityScalar T>
std::vector<double> row_entropies(const StochasticMatrix<T>& m) {
    std::vector<double> h(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) {
            double t = detail::scalar_to_double(m.at(i, j));
            if (t > 0.0) h[i] -= t * std::log(t);
        }
    return h;
}

/// Entropy rate -sum_i pi_i sum_j t_ij ln t_ij of the Markov measure.
template <ProbabilityScalar T>
double entropy_rate(const MarkovMeasure<T>& mu) {
    auto h = row_entropies(mu.matrix);
    double rate = 0.0;
    for (std::size_t i = 0; i < mu.matrix.n; ++i)
        rate += detail::scalar_to_double(mu.stationary.entries[i]) * h[i];
    return rate;
}

namespace detail {

inline bool prime_divides_all_coeffs(const LocalRule& rule, i64 prime) {
    for (i64 c : rule.coeffs)
        if (gcd_i64(c, prime) == 1) return false;
    return true;
}

inline i64 single_prime_of(const LocalRule& rule, const char* who) {
    Modulus mod = factorize(rule.modulus);
    if (mod.factors.size() != 1)
        throw std::domain_error(std::string(who) + ": modulus must be a prime power");
    return mod.factors[0].prime;
}

}  // namespace detail

/// Bernoulli upper bound |q| (r-l) H(pi) for direction (s, q); zero when
/// the prime divides every coefficient.
template <ProbabilityScalar T>
double bernoulli_bound(const LocalRule& rule, const ProbVector<T>& p, double q) {
    i64 prime = detail::single_prime_of(rule, "bernoulli_bound");
    if (p.size() != static_cast<std::size_t>(rule.modulus))
        throw std::invalid_argument("bernoulli_bound: vector length != modulus");
    if (detail::prime_divides_all_coeffs(rule, prime)) return 0.0;
    return std::abs(q) * static_cast<double>(rule.r - rule.l) * shannon_entropy(p);
}

/// Markov upper bound |q| (r-l) h(mu) for direction (s, q).
template <ProbabilityScalar T>
double markov_bound(const LocalRule& rule, const MarkovMeasure<T>& mu, double q) {
    i64 prime = detail::single_prime_of(rule, "markov_bound");
    if (mu.matrix.n != static_cast<std::size_t>(rule.modulus))
        throw std::invalid_argument("markov_bound: matrix dimension != modulus");
    if (detail::prime_divides_all_coeffs(rule, prime)) return 0.0;
    return std::abs(q) * static_cast<double>(rule.r - rule.l) * entropy_rate(mu);
}

/// Directional value |b| h(mu) along the integer direction (a, b).
template <ProbabilityScalar T>
double markov_directional(const MarkovMeasure<T>& mu, i64 /*a*/, i64 b) {
    return static_cast<double>(b < 0 ? -b : b) * entropy_rate(mu);
}

/// Bernoulli cylinder probability: product of symbol probabilities.
template <ProbabilityScalar T>
T cylinder_prob(const ProbVector<T>& p, std::span<const i64> word) {
    if (word.empty()) throw std::invalid_argument("cylinder_prob: empty word");
    T acc(1);
    for (i64 s : word) {
        if (s < 0 || static_cast<std::size_t>(s) >= p.size())
            throw std::out_of_range("cylinder_prob: symbol out of range");
        acc *= p.entries[static_cast<std::size_t>(s)];
    }
    return acc;
}

/// Markov cylinder probability: pi_{j0} * prod t_{j_i j_{i+1}}.
template <ProbabilityScalar T>
T cylinder_prob(const MarkovMeasure<T>& mu, std::span<const i64> word) {
    if (word.empty()) throw std::invalid_argument("cylinder_prob: empty word");
    for (i64 s : word)
        if (s < 0 || static_cast<std::size_t>(s) >= mu.matrix.n)
            throw std::out_of_range("cylinder_prob: symbol out of range");
    T acc = mu.stationary.entries[static_cast<std::size_t>(word[0])];
    for (std::size_t k = 0; k + 1 < word.size(); ++k)
        acc *= mu.matrix.at(static_cast<std::size_t>(word[k]),
                            static_cast<std::size_t>(word[k + 1]));
    return acc;
}

}  // namespace lcade
