#pragma once

// Exact sizes of spheres dU(c, r) = { t : d(c, t) = r } and balls, plus
// enumeration of sphere members.
//
// Extended Hamming: a string t of length m sits at distance
//   k + |m - L|
// from a center of length L, where k counts substituted positions among the
// first min(m, L). Summing over m gives the count in closed form, and the same
// (m, k) strata drive constructive enumeration and uniform sampling.
//
// Levenshtein: strings are pushed through the determinized automaton whose
// states are DP rows of edit distances to every prefix of the center, clipped
// at R + 1. One pass over lengths 0..L+R yields the exact count for every
// distance up to R. The same automaton, annotated with completion counts,
// supports exact uniform sampling from a single sphere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "strlap/string_space.hpp"

namespace strlap {

using BigCount = boost::multiprecision::cpp_int;

struct SphereLimits {
    /// Strings materialized by any enumeration.
    std::size_t max_enumeration = 5'000'000;
    /// Live automaton states in one length layer of the Levenshtein counter.
    std::size_t max_automaton_states = 2'000'000;
    std::size_t max_levenshtein_radius = 1000;
};

struct SphereQuery {
    Str center;
    std::size_t radius = 0;
    DistanceKind metric = DistanceKind::ExtHamming;
};

/// Natural log of a (possibly huge) nonnegative count; -inf for zero.
inline double log_count(const BigCount& n) {
    if (n.is_zero())
        return -std::numeric_limits<double>::infinity();
    const std::size_t bits = boost::multiprecision::msb(n) + 1;
    if (bits <= 1000)
        return std::log(n.convert_to<double>());
    const std::size_t shift = bits - 64;
    const BigCount top = n >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline BigCount binomial(std::size_t n, std::size_t k) {
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    BigCount c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c *= n - k + i;
        c /= i;
    }
    return c;
}

inline BigCount big_pow(std::size_t base, std::size_t exp) {
    BigCount r = 1;
    BigCount b = base;
    while (exp) {
        if (exp & 1)
            r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Extended Hamming
// ---------------------------------------------------------------------------

/// One (target length, substitution count) slice of an extended Hamming sphere.
struct HammingStratum {
    std::size_t length;        // m
    std::size_t substitutions; // k, chosen among the first min(m, L) positions
    BigCount count;
};

inline std::vector<HammingStratum> ext_hamming_strata(std::size_t center_len, std::size_t radius,
                                                      std::size_t alphabet_size) {
    if (alphabet_size == 0)
        throw Error("alphabet size must be positive");
    std::vector<HammingStratum> strata;
    const std::size_t L = center_len;
    const std::size_t a = alphabet_size;
    const std::size_t m_lo = radius >= L ? 0 : L - radius;
    for (std::size_t m = m_lo; m <= L + radius; ++m) {
        const std::size_t shift = m >= L ? m - L : L - m;
        const std::size_t k = radius - shift;
        const std::size_t base = std::min(m, L);
        if (k > base)
            continue;
        BigCount c = binomial(base, k) * big_pow(a - 1, k);
        if (m > L)
            c *= big_pow(a, m - L);
        if (!c.is_zero())
            strata.push_back({m, k, std::move(c)});
    }
    return strata;
}

inline BigCount sphere_size_ext_hamming(std::size_t center_len, std::size_t radius,
                                        std::size_t alphabet_size) {
    BigCount total = 0;
    for (const auto& s : ext_hamming_strata(center_len, radius, alphabet_size))
        total += s.count;
    return total;
}

/// Bounded-integer variant; throws CapExceeded when the count needs more than 64 bits.
inline std::uint64_t sphere_size_ext_hamming_u64(std::size_t center_len, std::size_t radius,
                                                 std::size_t alphabet_size) {
    const BigCount n = sphere_size_ext_hamming(center_len, radius, alphabet_size);
    if (n > BigCount(std::numeric_limits<std::uint64_t>::max()))
        throw CapExceeded("extended Hamming sphere size overflows 64 bits; use sphere_size_ext_hamming");
    return n.convert_to<std::uint64_t>();
}

namespace detail {

inline void visit_ext_hamming_stratum(const Str& center, const HammingStratum& st,
                                      const std::function<void(const Str&)>& visit) {
    const std::size_t L = center.size();
    const std::size_t a = center.alphabet()->size();
    const std::size_t base = std::min(st.length, L);
    std::vector<Symbol> buf(center.symbols().begin(), center.symbols().begin() + base);
    buf.resize(st.length, 0);

    std::vector<std::size_t> pos(st.substitutions);
    // Append tail (m > L) with every letter combination, then emit.
    std::function<void(std::size_t)> fill_tail = [&](std::size_t j) {
        if (j == st.length) {
            visit(Str(center.alphabet(), buf));
            return;
        }
        for (std::size_t h = 0; h < a; ++h) {
            buf[j] = static_cast<Symbol>(h);
            fill_tail(j + 1);
        }
    };
    // Substitute each chosen position with every other letter.
    std::function<void(std::size_t)> substitute = [&](std::size_t idx) {
        if (idx == pos.size()) {
            fill_tail(base);
            return;
        }
        const std::size_t p = pos[idx];
        const Symbol orig = center[p];
        for (std::size_t h = 0; h < a; ++h) {
            if (h == orig)
                continue;
            buf[p] = static_cast<Symbol>(h);
            substitute(idx + 1);
        }
        buf[p] = orig;
    };
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t idx, std::size_t from) {
        if (idx == pos.size()) {
            substitute(0);
            return;
        }
        for (std::size_t p = from; p + (pos.size() - idx) <= base; ++p) {
            pos[idx] = p;
            choose(idx + 1, p + 1);
        }
    };
    choose(0, 0);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Levenshtein
// ---------------------------------------------------------------------------

/// Exact sphere sizes |dU(center, r)| for r = 0..max_radius under d_L.
inline std::vector<BigCount> levenshtein_sphere_profile(const Str& center, std::size_t max_radius,
                                                        const SphereLimits& limits = {}) {
    if (max_radius > limits.max_levenshtein_radius)
        throw CapExceeded("Levenshtein radius " + std::to_string(max_radius) + " exceeds cap " +
                          std::to_string(limits.max_levenshtein_radius));
    using Row = std::vector<std::uint16_t>;
    const std::size_t L = center.size();
    const std::size_t a = center.alphabet()->size();
    const auto clip = static_cast<std::uint16_t>(max_radius + 1);

    // Letters absent from the center all drive identical transitions.
    std::vector<Symbol> distinct(center.symbols());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t absent = a - distinct.size();

    auto step = [&](const Row& row, std::optional<Symbol> c) {
        Row next(L + 1);
        next[0] = std::min<std::uint16_t>(row[0] + 1, clip);
        for (std::size_t i = 1; i <= L; ++i) {
            const std::uint16_t sub = row[i - 1] + ((c && *c == center[i - 1]) ? 0 : 1);
            next[i] = std::min<std::uint16_t>({sub, static_cast<std::uint16_t>(row[i] + 1),
                                               static_cast<std::uint16_t>(next[i - 1] + 1), clip});
        }
        return next;
    };

    std::vector<BigCount> profile(max_radius + 1, BigCount(0));
    std::map<Row, BigCount> layer;
    Row start(L + 1);
    for (std::size_t i = 0; i <= L; ++i)
        start[i] = static_cast<std::uint16_t>(std::min<std::size_t>(i, clip));
    layer.emplace(std::move(start), BigCount(1));

    for (std::size_t len = 0; len <= L + max_radius && !layer.empty(); ++len) {
        for (const auto& [row, count] : layer)
            if (row[L] <= max_radius)
                profile[row[L]] += count;
        if (len == L + max_radius)
            break;
        std::map<Row, BigCount> next_layer;
        auto push = [&](Row r, const BigCount& c) {
            if (*std::min_element(r.begin(), r.end()) > max_radius)
                return;
            next_layer[std::move(r)] += c;
        };
        for (const auto& [row, count] : layer) {
            for (Symbol c : distinct)
                push(step(row, c), count);
            if (absent)
                push(step(row, std::nullopt), count * absent);
        }
        if (next_layer.size() > limits.max_automaton_states)
            throw CapExceeded("Levenshtein automaton exceeded " +
                              std::to_string(limits.max_automaton_states) + " states");
        layer = std::move(next_layer);
    }
    return profile;
}

inline BigCount sphere_size_levenshtein(const Str& center, std::size_t radius,
                                        const SphereLimits& limits = {}) {
    return levenshtein_sphere_profile(center, radius, limits).back();
}

/// Exact uniform access to one Levenshtein sphere without listing it. Each
/// automaton state (clipped DP row) is tagged with the number of completions
/// that end at distance exactly R; unranking an index then walks the automaton
/// letter by letter, and a uniform index gives a uniform member.
class LevenshteinSphereIndex {
public:
    LevenshteinSphereIndex(Str center, std::size_t radius, const SphereLimits& limits = {})
        : center_(std::move(center)), radius_(radius), limits_(limits) {
        if (radius_ > limits_.max_levenshtein_radius)
            throw CapExceeded("Levenshtein radius " + std::to_string(radius_) + " exceeds cap " +
                              std::to_string(limits_.max_levenshtein_radius));
        const std::size_t L = center_.size();
        Row start(L + 1);
        for (std::size_t i = 0; i <= L; ++i)
            start[i] = static_cast<std::uint16_t>(std::min(i, radius_ + 1));
        start_ = start;
        size_ = completions(start);
    }

    const BigCount& size() const noexcept { return size_; }

    /// Member number `index` (0-based) in automaton order.
    Str unrank(BigCount index) const {
        if (index >= size_)
            throw Error("sphere index out of range");
        const std::size_t a = center_.alphabet()->size();
        std::vector<Symbol> out;
        Row row = start_;
        for (;;) {
            if (row.back() == radius_) {
                if (index.is_zero())
                    return Str(center_.alphabet(), std::move(out));
                --index;
            }
            bool moved = false;
            for (std::size_t h = 0; h < a && !moved; ++h) {
                Row next = step(row, static_cast<Symbol>(h));
                if (!alive(next))
                    continue;
                const BigCount& n = memo_.at(next);
                if (index < n) {
                    out.push_back(static_cast<Symbol>(h));
                    row = std::move(next);
                    moved = true;
                } else {
                    index -= n;
                }
            }
            if (!moved)
                throw Error("sphere unranking fell off the automaton");
        }
    }

    template <class URBG>
    Str sample(URBG& rng) const {
        return unrank(uniform_below(size_, rng));
    }

    /// Uniform integer in [0, n) by rejection on whole 64-bit limbs.
    template <class URBG>
    static BigCount uniform_below(const BigCount& n, URBG& rng) {
        if (n.is_zero())
            throw Error("cannot draw from an empty range");
        const std::size_t bits = boost::multiprecision::msb(n) + 1;
        std::uniform_int_distribution<std::uint64_t> limb;
        for (;;) {
            BigCount x = 0;
            for (std::size_t got = 0; got < bits; got += 64)
                x = (x << 64) | BigCount(limb(rng));
            x >>= (bits + 63) / 64 * 64 - bits;
            if (x < n)
                return x;
        }
    }

private:
    using Row = std::vector<std::uint16_t>;

    Row step(const Row& row, Symbol c) const {
        const std::size_t L = center_.size();
        const auto clip = static_cast<std::uint16_t>(radius_ + 1);
        Row next(L + 1);
        next[0] = std::min<std::uint16_t>(row[0] + 1, clip);
        for (std::size_t i = 1; i <= L; ++i) {
            const std::uint16_t sub = row[i - 1] + (c == center_[i - 1] ? 0 : 1);
            next[i] = std::min<std::uint16_t>({sub, static_cast<std::uint16_t>(row[i] + 1),
                                               static_cast<std::uint16_t>(next[i - 1] + 1), clip});
        }
        return next;
    }

    bool alive(const Row& row) const { return *std::min_element(row.begin(), row.end()) <= radius_; }

    // Rows strictly grow in their minimum once past the center length, so the
    // recursion depth is at most L + R.
    const BigCount& completions(const Row& row) {
        if (auto it = memo_.find(row); it != memo_.end())
            return it->second;
        BigCount n = row.back() == radius_ ? 1 : 0;
        const std::size_t a = center_.alphabet()->size();
        for (std::size_t h = 0; h < a; ++h) {
            Row next = step(row, static_cast<Symbol>(h));
            if (alive(next))
                n += completions(next);
        }
        if (memo_.size() >= limits_.max_automaton_states)
            throw CapExceeded("Levenshtein automaton exceeded " + std::to_string(limits_.max_automaton_states) +
                              " states");
        return memo_.emplace(row, std::move(n)).first->second;
    }

    Str center_;
    std::size_t radius_;
    SphereLimits limits_;
    Row start_;
    std::map<Row, BigCount> memo_;
    BigCount size_;
};

/// All strings at Levenshtein distance exactly 1, in shortlex order.
inline std::vector<Str> levenshtein_neighbors(const Str& center) {
    const auto& sym = center.symbols();
    const std::size_t a = center.alphabet()->size();
    std::set<std::vector<Symbol>> seen;
    for (std::size_t i = 0; i <= sym.size(); ++i) {
        for (std::size_t h = 0; h < a; ++h) {
            auto ins = sym;
            ins.insert(ins.begin() + static_cast<std::ptrdiff_t>(i), static_cast<Symbol>(h));
            seen.insert(std::move(ins));
        }
        if (i < sym.size()) {
            auto del = sym;
            del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
            seen.insert(std::move(del));
            for (std::size_t h = 0; h < a; ++h) {
                if (h == sym[i])
                    continue;
                auto sub = sym;
                sub[i] = static_cast<Symbol>(h);
                seen.insert(std::move(sub));
            }
        }
    }
    std::vector<Str> out;
    out.reserve(seen.size());
    for (const auto& s : seen)
        out.emplace_back(center.alphabet(), s);
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

namespace detail {

/// Breadth-first edit expansion; layer r is exactly the sphere of radius r.
inline std::vector<std::vector<Symbol>> levenshtein_layer(const Str& center, std::size_t radius,
                                                          const SphereLimits& limits) {
    std::set<std::vector<Symbol>> visited{center.symbols()};
    std::vector<std::vector<Symbol>> frontier{center.symbols()};
    for (std::size_t d = 1; d <= radius; ++d) {
        std::vector<std::vector<Symbol>> next;
        for (const auto& s : frontier) {
            for (const Str& n : levenshtein_neighbors(Str(center.alphabet(), s))) {
                if (visited.insert(n.symbols()).second) {
                    next.push_back(n.symbols());
                    if (visited.size() > limits.max_enumeration)
                        throw CapExceeded("Levenshtein enumeration exceeded " +
                                          std::to_string(limits.max_enumeration) + " strings");
                }
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Metric-generic surface
// ---------------------------------------------------------------------------

/// Visit each member of the sphere once. Unbounded for extended Hamming.
inline void for_each_in_sphere(const SphereQuery& q, const std::function<void(const Str&)>& visit,
                               const SphereLimits& limits = {}) {
    if (!q.center.alphabet())
        throw Error("sphere center has no alphabet");
    if (q.metric == DistanceKind::ExtHamming) {
        for (const auto& st : ext_hamming_strata(q.center.size(), q.radius, q.center.alphabet()->size()))
            detail::visit_ext_hamming_stratum(q.center, st, visit);
        return;
    }
    for (auto& s : detail::levenshtein_layer(q.center, q.radius, limits))
        visit(Str(q.center.alphabet(), std::move(s)));
}

inline BigCount sphere_size(const SphereQuery& q, const SphereLimits& limits = {}) {
    if (q.metric == DistanceKind::ExtHamming)
        return sphere_size_ext_hamming(q.center.size(), q.radius, q.center.alphabet()->size());
    return sphere_size_levenshtein(q.center, q.radius, limits);
}

/// Sphere members in shortlex order.
inline std::vector<Str> enumerate_sphere(const SphereQuery& q, const SphereLimits& limits = {}) {
    if (q.metric == DistanceKind::ExtHamming &&
        sphere_size(q, limits) > BigCount(limits.max_enumeration))
        throw CapExceeded("sphere has more than " + std::to_string(limits.max_enumeration) + " members");
    std::vector<Str> out;
    for_each_in_sphere(q, [&](const Str& s) { out.push_back(s); }, limits);
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
}

inline BigCount ball_size(const SphereQuery& q, const SphereLimits& limits = {}) {
    if (q.metric == DistanceKind::Levenshtein) {
        BigCount total = 0;
        for (const auto& c : levenshtein_sphere_profile(q.center, q.radius, limits))
            total += c;
        return total;
    }
    BigCount total = 0;
    for (std::size_t r = 0; r <= q.radius; ++r)
        total += sphere_size_ext_hamming(q.center.size(), r, q.center.alphabet()->size());
    return total;
}

/// Memoized sphere sizes, shared across threads. Extended Hamming counts are
/// keyed by (alphabet size, center length, radius); Levenshtein counts keep a
/// per-center profile that is extended on demand.
class SphereCache {
public:
    explicit SphereCache(SphereLimits limits = {}) : limits_(limits) {}

    const SphereLimits& limits() const noexcept { return limits_; }

    double log_sphere_size(const Str& center, std::size_t radius, DistanceKind metric) {
        if (metric == DistanceKind::ExtHamming)
            return hamming_entry(center, radius).log;
        return levenshtein_entry(center, radius).log;
    }

    BigCount sphere_size(const Str& center, std::size_t radius, DistanceKind metric) {
        if (metric == DistanceKind::ExtHamming)
            return hamming_entry(center, radius).count;
        return levenshtein_entry(center, radius).count;
    }

private:
    struct Entry {
        BigCount count;
        double log;
    };
    using HammingKey = std::tuple<std::size_t, std::size_t, std::size_t>;
    using LevKey = std::pair<std::size_t, std::vector<Symbol>>;

    Entry hamming_entry(const Str& center, std::size_t radius) {
        const HammingKey key{center.alphabet()->size(), center.size(), radius};
        {
            std::shared_lock lock(mutex_);
            if (auto it = hamming_.find(key); it != hamming_.end())
                return it->second;
        }
        BigCount n = sphere_size_ext_hamming(center.size(), radius, center.alphabet()->size());
        Entry e{n, log_count(n)};
        std::unique_lock lock(mutex_);
        return hamming_.emplace(key, std::move(e)).first->second;
    }

    Entry levenshtein_entry(const Str& center, std::size_t radius) {
        const LevKey key{center.alphabet()->size(), center.symbols()};
        {
            std::shared_lock lock(mutex_);
            if (auto it = levenshtein_.find(key); it != levenshtein_.end() && radius < it->second.size())
                return it->second[radius];
        }
        std::vector<Entry> profile;
        for (auto& c : levenshtein_sphere_profile(center, radius, limits_)) {
            const double lg = log_count(c);
            profile.push_back({std::move(c), lg});
        }
        std::unique_lock lock(mutex_);
        auto& slot = levenshtein_[key];
        if (slot.size() < profile.size())
            slot = std::move(profile);
        return slot[radius];
    }

    SphereLimits limits_;
    std::shared_mutex mutex_;
    std::map<HammingKey, Entry> hamming_;
    std::map<LevKey, std::vector<Entry>> levenshtein_;
};

} // namespace strlap
