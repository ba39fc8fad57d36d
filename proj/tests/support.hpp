#pragma once

// Shared fixtures for the unit and acceptance suites. The reference distances
// here are written independently of the library (padding / plain recursion)
// so the metric tests do not check the library against itself.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "strlap/strlap.hpp"

namespace strlap::testing {

inline AlphabetPtr binary() {
    static const AlphabetPtr a = Alphabet::from_chars("01");
    return a;
}

inline AlphabetPtr dna() {
    static const AlphabetPtr a = Alphabet::from_chars("acgt");
    return a;
}

inline Str B(std::string_view text) { return parse(text, binary()); }
inline Str D(std::string_view text) { return parse(text, dna()); }

inline std::vector<Str> strs(const AlphabetPtr& a, std::initializer_list<const char*> texts) {
    std::vector<Str> out;
    for (const char* t : texts)
        out.push_back(parse(t, a));
    return out;
}

// --- reference distances ---------------------------------------------------

/// Pad both with a sentinel and count mismatching positions.
inline std::size_t ref_ext_hamming(const std::string& s, const std::string& t) {
    const std::size_t n = std::max(s.size(), t.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int a = i < s.size() ? s[i] : -1;
        const int b = i < t.size() ? t[i] : -1;
        d += a != b;
    }
    return d;
}

/// Memoized recursion on suffixes.
inline std::size_t ref_levenshtein(const std::string& s, const std::string& t) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == s.size())
            return t.size() - j;
        if (j == t.size())
            return s.size() - i;
        auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        std::size_t best = go(i + 1, j + 1) + (s[i] != t[j]);
        best = std::min({best, go(i + 1, j) + 1, go(i, j + 1) + 1});
        return memo[key] = best;
    };
    return go(0, 0);
}

/// Every string over `letters` of length <= max_len, as text.
inline std::vector<std::string> all_texts(const std::string& letters, std::size_t max_len) {
    std::vector<std::string> out{""};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].size() < max_len)
            for (char c : letters)
                out.push_back(out[i] + c);
    return out;
}

// --- Appendix example: q(o)=0.2, q(0)=q(1)=0.15, q(xy)=0.125 -----------------

inline oracle::FiniteDistribution appendix_distribution() {
    oracle::FiniteDistribution d;
    const std::pair<const char*, double> mass[] = {{"", 0.2},    {"0", 0.15},  {"1", 0.15}, {"00", 0.125},
                                                   {"01", 0.125}, {"10", 0.125}, {"11", 0.125}};
    for (auto [t, p] : mass) {
        d.support.push_back(B(t));
        d.probs.push_back(p);
    }
    return d;
}

/// The same distribution as an integer multiset (x40): o:8, "0":6, "1":6, xy:5 each.
inline std::vector<Str> appendix_multiset() {
    std::vector<Str> out;
    auto add = [&](const char* t, int n) {
        for (int i = 0; i < n; ++i)
            out.push_back(B(t));
    };
    add("", 8);
    add("0", 6);
    add("1", 6);
    for (const char* t : {"00", "01", "10", "11"})
        add(t, 5);
    return out;
}

// --- clustering agreement ----------------------------------------------------

inline double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const std::size_t n = a.size();
    std::map<std::pair<std::size_t, std::size_t>, double> table;
    std::map<std::size_t, double> ra, rb;
    for (std::size_t i = 0; i < n; ++i) {
        table[{a[i], b[i]}] += 1;
        ra[a[i]] += 1;
        rb[b[i]] += 1;
    }
    auto c2 = [](double x) { return x * (x - 1) / 2; };
    double idx = 0, sa = 0, sb = 0;
    for (auto& [k, v] : table)
        idx += c2(v);
    for (auto& [k, v] : ra)
        sa += c2(v);
    for (auto& [k, v] : rb)
        sb += c2(v);
    const double expected = sa * sb / c2(static_cast<double>(n));
    const double max_idx = (sa + sb) / 2;
    if (max_idx == expected)
        return 1.0;
    return (idx - expected) / (max_idx - expected);
}

// --- synthetic data ----------------------------------------------------------

struct Labelled {
    std::vector<Str> strings;
    std::vector<std::size_t> labels;
};

/// n draws from a k-component mixture; labels are the generating components.
inline Labelled sample_mixture(const std::vector<LaplaceParams>& comps, const std::vector<double>& pi,
                               DistanceKind metric, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LaplaceSampler> draw;
    for (const auto& c : comps)
        draw.emplace_back(c, metric);
    std::discrete_distribution<std::size_t> pick(pi.begin(), pi.end());
    Labelled out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = pick(rng);
        out.labels.push_back(g);
        out.strings.push_back(draw[g](rng));
    }
    return out;
}

/// Tiny binary instance: LA(lambda, rho) draws with |lambda| in 1..3,
/// rho in [0.2, 0.6], n in 3..6, rejecting draws longer than 3.
inline std::vector<Str> tiny_instance(std::mt19937_64& rng, DistanceKind metric) {
    std::uniform_int_distribution<std::size_t> len(1, 3), n_dist(3, 6), bit(0, 1);
    std::uniform_real_distribution<double> rho(0.2, 0.6);
    std::vector<Symbol> sym(len(rng));
    for (auto& s : sym)
        s = static_cast<Symbol>(bit(rng));
    LaplaceSampler draw(LaplaceParams(Str(binary(), sym), rho(rng)), metric);
    const std::size_t n = n_dist(rng);
    std::vector<Str> out;
    while (out.size() < n) {
        Str s = draw(rng);
        if (s.size() <= 3)
            out.push_back(std::move(s));
    }
    return out;
}

} // namespace strlap::testing
