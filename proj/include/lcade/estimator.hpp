#pragma once

#include <cmath>
#include <concepts>
#include <cstring>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lcade/local_rule.hpp"
#include "lcade/measures.hpp"

namespace lcade {

/// splitmix64; fixed algorithm so seeded runs are bit-reproducible.
struct SplitMix64 {
    u64 state = 0;

    explicit SplitMix64(u64 seed = 0) : state(seed) {}

    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased uniform draw in [0, bound) by rejection.
    u64 below(u64 bound) {
        u64 threshold = (0ULL - bound) % bound;
        for (;;) {
            u64 r = next();
            if (r >= threshold) return r % bound;
        }
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Anything that can update one cell from its neighborhood window; lets
/// the enumeration run on nonlinear rules supplied as callbacks.
template <typename R>
concept CellularRule = requires(const R& rule, std::span<const i64> window) {
    { rule.modulus } -> std::convertible_to<i64>;
    { rule.l } -> std::convertible_to<i64>;
    { rule.r } -> std::convertible_to<i64>;
    { rule.apply(window) } -> std::convertible_to<i64>;
};

/// Nonlinear local rule adapter: span [l, r] plus an update callback
/// receiving the window x_l..x_r.
struct CallbackRule {
    i64 modulus = 2;
    i64 l = 0;
    i64 r = 0;
    std::function<i64(std::span<const i64>)> update;

    i64 apply(std::span<const i64> window) const { return update(window); }
};

/// Space-time window geometry: lattice rows t = 0..rows, and in row t
/// the sites n with |n - t cot(theta)| <= half_width.
struct WindowSpec {
    i64 half_width = 1;
    i64 rows = 1;
    double theta = std::numbers::pi / 2.0;

    void validate() const {
        if (half_width < 1) throw std::invalid_argument("window: half_width must be >= 1");
        if (rows < 1) throw std::invalid_argument("window: rows must be >= 1");
        if (!(theta > 0.0 && theta < std::numbers::pi) || std::sin(theta) <= 0.0)
            throw std::invalid_argument("window: theta must lie in (0, pi)");
    }

    double cot() const { return std::cos(theta) / std::sin(theta); }
};

struct Cell {
    i64 site = 0;
    i64 time = 0;
    bool operator==(const Cell&) const = default;
};

// Site bounds of row t; the 1e-9 slack keeps integer-slope boundaries
// from flickering with rounding.
inline std::pair<i64, i64> row_site_range(const WindowSpec& w, i64 t) {
    double center = static_cast<double>(t) * w.cot();
    double lo = center - static_cast<double>(w.half_width) - 1e-9;
    double hi = center + static_cast<double>(w.half_width) + 1e-9;
    return {static_cast<i64>(std::ceil(lo)), static_cast<i64>(std::floor(hi))};
}

inline std::vector<Cell> lattice_cells(const WindowSpec& w) {
    w.validate();
    std::vector<Cell> cells;
    for (i64 t = 0; t <= w.rows; ++t) {
        auto [lo, hi] = row_site_range(w, t);
        for (i64 n = lo; n <= hi; ++n) cells.push_back({n, t});
    }
    return cells;
}

/// Smallest interval [A, B] of time-0 sites determining every window
/// cell: A = min(n + t l), B = max(n + t r).
template <CellularRule R>
std::pair<i64, i64> dependence_cone(const R& rule, const WindowSpec& w) {
    auto cells = lattice_cells(w);
    i64 a = cells.front().site, b = cells.front().site;
    for (const Cell& c : cells) {
        a = std::min(a, c.site + c.time * rule.l);
        b = std::max(b, c.site + c.time * rule.r);
    }
    return {a, b};
}

struct CountMode {
    enum Kind { exact, sampled } kind = exact;
    u64 seed = 0;
    u64 budget = 1ULL << 24;
};

struct PatternCount {
    u64 count = 0;
    CountMode mode;
    i64 cone_lo = 0;
    i64 cone_hi = 0;
    std::size_t cells = 0;
};

namespace detail {

// Segment symbols -> flat pattern key over the window cells.
class PatternKey {
public:
    PatternKey(i64 modulus, std::size_t cells)
        : wide_(modulus > 256), buf_(cells * (modulus > 256 ? 4 : 1), '\0') {}

    void put(std::size_t index, i64 symbol) {
        if (!wide_) {
            buf_[index] = static_cast<char>(symbol);
        } else {
            std::uint32_t v = static_cast<std::uint32_t>(symbol);
            std::memcpy(buf_.data() + 4 * index, &v, 4);
        }
    }
    const std::string& str() const { return buf_; }

private:
    bool wide_;
    std::string buf_;
};

template <CellularRule R>
class WindowEvolver {
public:
    WindowEvolver(const R& rule, const WindowSpec& w) : rule_(rule) {
        w.validate();
        for (i64 t = 0; t <= w.rows; ++t) rows_.push_back(row_site_range(w, t));
        cone_lo_ = rows_.front().first;
        cone_hi_ = rows_.front().second;
        for (i64 t = 0; t <= w.rows; ++t) {
            cone_lo_ = std::min(cone_lo_, rows_[static_cast<std::size_t>(t)].first + t * rule.l);
            cone_hi_ = std::max(cone_hi_, rows_[static_cast<std::size_t>(t)].second + t * rule.r);
        }
        cells_ = 0;
        for (auto [lo, hi] : rows_) cells_ += static_cast<std::size_t>(hi - lo + 1);
        cur_.resize(static_cast<std::size_t>(cone_hi_ - cone_lo_ + 1));
        next_.resize(cur_.size());
    }

    i64 cone_lo() const { return cone_lo_; }
    i64 cone_hi() const { return cone_hi_; }
    std::size_t cone_len() const { return static_cast<std::size_t>(cone_hi_ - cone_lo_ + 1); }
    std::size_t cells() const { return cells_; }

    /// Evolve one initial segment (indexed from cone_lo) and fill `key`
    /// with the window pattern.
    void pattern(std::span<const i64> segment, PatternKey& key) {
        std::copy(segment.begin(), segment.end(), cur_.begin());
        i64 a = cone_lo_, b = cone_hi_;
        std::size_t out = 0;
        const i64 span = rule_.r - rule_.l;
        for (i64 t = 0; t < static_cast<i64>(rows_.size()); ++t) {
            auto [lo, hi] = rows_[static_cast<std::size_t>(t)];
            for (i64 n = lo; n <= hi; ++n)
                key.put(out++, cur_[static_cast<std::size_t>(n - a)]);
            if (t + 1 == static_cast<i64>(rows_.size())) break;
            i64 na = a - rule_.l, nb = b - rule_.r;
            for (i64 n = na; n <= nb; ++n)
                next_[static_cast<std::size_t>(n - na)] = rule_.apply(
                    std::span<const i64>(cur_).subspan(static_cast<std::size_t>(n + rule_.l - a),
                                                       static_cast<std::size_t>(span + 1)));
            std::swap(cur_, next_);
            a = na;
            b = nb;
        }
    }

private:
    const R& rule_;
    std::vector<std::pair<i64, i64>> rows_;
    i64 cone_lo_ = 0, cone_hi_ = 0;
    std::size_t cells_ = 0;
    std::vector<i64> cur_, next_;
};

inline bool power_fits(i64 base, std::size_t exp, u64 limit, u64* out) {
    u64 acc = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (acc > limit / static_cast<u64>(base)) return false;
        acc *= static_cast<u64>(base);
    }
    *out = acc;
    return true;
}

}  // namespace detail

/// Count distinct window patterns over initial segments of the
/// dependence cone. Exact mode enumerates all m^{cone} segments (and
/// requires that to fit the budget); sampled mode draws `budget` seeded
/// segments, so its count is a lower bound.
template <CellularRule R>
PatternCount count_patterns(const R& rule, const WindowSpec& w, CountMode mode = {}) {
    detail::WindowEvolver<R> evolver(rule, w);
    const i64 m = rule.modulus;
    PatternCount result;
    result.mode = mode;
    result.cone_lo = evolver.cone_lo();
    result.cone_hi = evolver.cone_hi();
    result.cells = evolver.cells();

    std::vector<i64> segment(evolver.cone_len(), 0);
    detail::PatternKey key(m, evolver.cells());
    std::unordered_set<std::string> seen;

    if (mode.kind == CountMode::exact) {
        u64 total = 0;
        if (!detail::power_fits(m, evolver.cone_len(), mode.budget, &total))
            throw std::domain_error("count_patterns: m^cone exceeds the exact-mode budget");
        seen.reserve(static_cast<std::size_t>(total) * 2);
        for (;;) {
            evolver.pattern(segment, key);
            seen.insert(key.str());
            // odometer
            std::size_t i = 0;
            while (i < segment.size() && ++segment[i] == m) segment[i++] = 0;
            if (i == segment.size()) break;
        }
    } else {
        SplitMix64 rng(mode.seed);
        seen.reserve(static_cast<std::size_t>(std::min<u64>(mode.budget, 1u << 22)));
        for (u64 draw = 0; draw < mode.budget; ++draw) {
            for (auto& s : segment) s = static_cast<i64>(rng.below(static_cast<u64>(m)));
            evolver.pattern(segment, key);
            seen.insert(key.str());
        }
    }
    result.count = seen.size();
    return result;
}

struct EstimateRecord {
    std::string rule;
    double theta = 0.0;
    i64 half_width = 0;
    i64 rows = 0;
    CountMode mode;
    u64 count = 0;
    i64 cone_lo = 0;
    i64 cone_hi = 0;
    double nats_per_row = 0.0;   // ln(count) / rows
    double nats_per_site = 0.0;  // ln(count) / ((2w+1) rows sin theta)

    i64 cone_sites() const { return cone_hi - cone_lo + 1; }
};

/// Empirical directional-entropy estimate from the window pattern count.
/// nats_per_row recovers the closed form as rows grows at fixed width;
/// nats_per_site is the printed-density normalization, reported for
/// diagnostics.
template <CellularRule R>
EstimateRecord estimate_tde(const R& rule, double theta, i64 half_width, i64 rows,
                            CountMode mode = {}) {
    WindowSpec w{half_width, rows, theta};
    PatternCount pc = count_patterns(rule, w, mode);
    EstimateRecord rec;
    rec.theta = theta;
    rec.half_width = half_width;
    rec.rows = rows;
    rec.mode = mode;
    rec.count = pc.count;
    rec.cone_lo = pc.cone_lo;
    rec.cone_hi = pc.cone_hi;
    double ln_count = std::log(static_cast<double>(pc.count));
    rec.nats_per_row = ln_count / static_cast<double>(rows);
    rec.nats_per_site = ln_count / (static_cast<double>(2 * half_width + 1) *
                                    static_cast<double>(rows) * std::sin(theta));
    return rec;
}

/// Draws i.i.d. symbols from a probability vector.
template <ProbabilityScalar T>
struct BernoulliSampler {
    ProbVector<T> p;
    i64 modulus() const { return static_cast<i64>(p.size()); }

    void draw(SplitMix64& rng, std::span<i64> out) const {
        for (auto& s : out) s = draw_one(rng);
    }

    i64 draw_one(SplitMix64& rng) const {
        double u = rng.unit();
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            acc += detail::scalar_to_double(p.entries[i]);
            if (u < acc) return static_cast<i64>(i);
        }
        return static_cast<i64>(p.size()) - 1;
    }
};

/// Draws a stationary Markov chain left to right.
template <ProbabilityScalar T>
struct MarkovSampler {
    MarkovMeasure<T> mu;
    i64 modulus() const { return static_cast<i64>(mu.matrix.n); }

    void draw(SplitMix64& rng, std::span<i64> out) const {
        if (out.empty()) return;
        out[0] = pick(rng, mu.stationary.entries);
        for (std::size_t k = 1; k < out.size(); ++k) {
            std::size_t prev = static_cast<std::size_t>(out[k - 1]);
            std::vector<T> row(mu.matrix.data.begin() + static_cast<std::ptrdiff_t>(prev * mu.matrix.n),
                               mu.matrix.data.begin() + static_cast<std::ptrdiff_t>((prev + 1) * mu.matrix.n));
            out[k] = pick(rng, row);
        }
    }

    static i64 pick(SplitMix64& rng, const std::vector<T>& dist) {
        double u = rng.unit();
        double acc = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            acc += detail::scalar_to_double(dist[i]);
            if (u < acc) return static_cast<i64>(i);
        }
        return static_cast<i64>(dist.size()) - 1;
    }
};

struct EmpiricalEstimate {
    double nats = 0.0;
    u64 samples = 0;
    u64 distinct_sequences = 0;
    bool undersampled = false;  // plug-in estimate is biased low when set
};

/// Plug-in estimate of the entropy of sigma^s F^q along `depth` steps of
/// blocks [-radius, radius], divided by depth. Biased low for finite
/// sample counts.
template <typename Sampler, CellularRule R>
EmpiricalEstimate empirical_measure_entropy(const Sampler& measure, const R& rule, i64 s, i64 q,
                                            i64 radius, i64 depth, u64 samples, u64 seed) {
    if (q < 0) throw std::invalid_argument("empirical_measure_entropy: q must be >= 0");
    if (depth < 1) throw std::invalid_argument("empirical_measure_entropy: depth must be >= 1");
    if (samples < 1) throw std::invalid_argument("empirical_measure_entropy: need samples >= 1");
    // Time-0 segment covering block k at sites [-radius + s k, radius + s k]
    // of row q k.
    i64 a = -radius, b = radius;
    for (i64 k = 0; k < depth; ++k) {
        a = std::min(a, -radius + s * k + q * k * rule.l);
        b = std::max(b, radius + s * k + q * k * rule.r);
    }
    const std::size_t seg_len = static_cast<std::size_t>(b - a + 1);
    const std::size_t block = static_cast<std::size_t>(2 * radius + 1);

    SplitMix64 rng(seed);
    std::vector<i64> segment(seg_len);
    std::vector<i64> next;
    detail::PatternKey key(rule.modulus, block * static_cast<std::size_t>(depth));
    std::unordered_map<std::string, u64> counts;
    for (u64 sample = 0; sample < samples; ++sample) {
        measure.draw(rng, segment);
        std::vector<i64> cur = segment;
        i64 cur_lo = a;
        std::size_t out = 0;
        for (i64 k = 0; k < depth; ++k) {
            for (i64 n = -radius + s * k; n <= radius + s * k; ++n)
                key.put(out++, cur[static_cast<std::size_t>(n - cur_lo)]);
            if (k + 1 == depth) break;
            for (i64 step_count = 0; step_count < q; ++step_count) {
                i64 na = cur_lo - rule.l;
                i64 nb = cur_lo + static_cast<i64>(cur.size()) - 1 - rule.r;
                next.resize(static_cast<std::size_t>(nb - na + 1));
                for (i64 n = na; n <= nb; ++n)
                    next[static_cast<std::size_t>(n - na)] = rule.apply(
                        std::span<const i64>(cur).subspan(
                            static_cast<std::size_t>(n + rule.l - cur_lo),
                            static_cast<std::size_t>(rule.r - rule.l + 1)));
                cur = next;
                cur_lo = na;
            }
        }
        ++counts[key.str()];
    }
    double h = 0.0;
    for (const auto& [pattern, c] : counts) {
        double f = static_cast<double>(c) / static_cast<double>(samples);
        h -= f * std::log(f);
    }
    EmpiricalEstimate est;
    est.nats = h / static_cast<double>(depth);
    est.samples = samples;
    est.distinct_sequences = counts.size();
    est.undersampled = counts.size() * 10 > samples;
    return est;
}

}  // namespace lcade
