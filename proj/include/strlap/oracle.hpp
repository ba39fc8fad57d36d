#pragma once

// Brute-force references over truncated string spaces. Everything here is
// exhaustive and deliberately independent of the closed forms, automata and
// estimators it is used to check.

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "strlap/laplace.hpp"

namespace strlap::oracle {

inline constexpr std::size_t kDefaultCap = 2'000'000;

/// All strings of length <= max_len, in shortlex order.
inline std::vector<Str> enumerate_strings(const AlphabetPtr& alphabet, std::size_t max_len,
                                          std::size_t cap = kDefaultCap) {
    const std::size_t a = alphabet->size();
    double total = 0.0, layer = 1.0;
    for (std::size_t l = 0; l <= max_len; ++l, layer *= static_cast<double>(a))
        total += layer;
    if (total > static_cast<double>(cap))
        throw CapExceeded("string enumeration of " + std::to_string(static_cast<long long>(total)) +
                          " strings exceeds cap");
    std::vector<Str> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<std::vector<Symbol>> cur{{}};
    for (std::size_t l = 0; l <= max_len; ++l) {
        std::vector<std::vector<Symbol>> next;
        for (auto& s : cur) {
            out.emplace_back(alphabet, s);
            if (l == max_len)
                continue;
            for (std::size_t h = 0; h < a; ++h) {
                auto t = s;
                t.push_back(static_cast<Symbol>(h));
                next.push_back(std::move(t));
            }
        }
        cur = std::move(next);
    }
    return out;
}

/// Sphere size by scanning every string that could possibly qualify.
inline std::size_t brute_sphere_size(const Str& center, std::size_t radius, DistanceKind metric,
                                     std::size_t cap = kDefaultCap) {
    std::size_t n = 0;
    for (const Str& t : enumerate_strings(center.alphabet(), center.size() + radius, cap))
        n += distance(metric, center, t) == radius;
    return n;
}

inline std::vector<Str> brute_sphere(const Str& center, std::size_t radius, DistanceKind metric,
                                     std::size_t cap = kDefaultCap) {
    std::vector<Str> out;
    for (const Str& t : enumerate_strings(center.alphabet(), center.size() + radius, cap))
        if (distance(metric, center, t) == radius)
            out.push_back(t);
    return out;
}

struct FiniteDistribution {
    std::vector<Str> support;
    std::vector<double> probs;

    void validate() const {
        if (support.empty() || support.size() != probs.size())
            throw Error("distribution support and probabilities differ in length");
        double total = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0))
                throw Error("negative probability");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw Error("probabilities do not sum to 1");
        std::vector<Str> sorted = support;
        std::sort(sorted.begin(), sorted.end(), ShortlexLess{});
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error("duplicate support entry");
    }

    std::size_t max_length() const {
        std::size_t m = 0;
        for (const Str& s : support)
            m = std::max(m, s.size());
        return m;
    }
};

/// LA(lambda, rho) restricted to every string of length <= max_len, with
/// probabilities computed by brute-force sphere counts and renormalized.
inline FiniteDistribution truncated_laplace(const LaplaceParams& p, DistanceKind metric, std::size_t max_len) {
    const auto space = enumerate_strings(p.lambda.alphabet(), max_len);
    // Sphere sizes counted over a space long enough to contain every member.
    std::map<std::size_t, double> shells;
    FiniteDistribution dist;
    double total = 0.0;
    for (const Str& s : space) {
        const std::size_t d = distance(metric, s, p.lambda);
        auto it = shells.find(d);
        if (it == shells.end())
            it = shells.emplace(d, static_cast<double>(brute_sphere_size(p.lambda, d, metric))).first;
        const double q = std::pow(p.rho / (p.rho + 1.0), static_cast<double>(d)) / ((p.rho + 1.0) * it->second);
        dist.support.push_back(s);
        dist.probs.push_back(q);
        total += q;
    }
    for (double& q : dist.probs)
        q /= total;
    return dist;
}

inline double expected_distance(const FiniteDistribution& dist, const Str& center, DistanceKind metric) {
    double e = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        e += static_cast<double>(distance(metric, dist.support[i], center)) * dist.probs[i];
    return e;
}

enum class Phi { BallSize, SphereSize };

/// sum_s phi(d(s, m), |m|) q(s) with phi = |U(m, d)| or |dU(m, d)|.
inline double expected_phi(const FiniteDistribution& dist, const Str& m, Phi phi, DistanceKind metric) {
    std::map<std::size_t, double> shells;
    auto shell = [&](std::size_t r) {
        auto it = shells.find(r);
        if (it == shells.end())
            it = shells.emplace(r, static_cast<double>(brute_sphere_size(m, r, metric))).first;
        return it->second;
    };
    double e = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const std::size_t d = distance(metric, dist.support[i], m);
        double v = 0.0;
        if (phi == Phi::SphereSize) {
            v = shell(d);
        } else {
            for (std::size_t r = 0; r <= d; ++r)
                v += shell(r);
        }
        e += v * dist.probs[i];
    }
    return e;
}

struct CenterSummary {
    std::vector<Str> modes;
    std::vector<Str> medians;
    Str consensus;
    double median_value = 0.0;
};

/// Per-site most probable letter (empty letter included), truncated at the
/// first site where the empty letter attains the maximum.
inline Str consensus_of(const FiniteDistribution& dist) {
    const AlphabetPtr& alpha = dist.support.front().alphabet();
    const std::size_t a = alpha->size();
    std::vector<Symbol> out;
    for (std::size_t j = 0;; ++j) {
        std::vector<double> marg(a + 1, 0.0);
        for (std::size_t i = 0; i < dist.support.size(); ++i) {
            const Str& s = dist.support[i];
            marg[j < s.size() ? s[j] : a] += dist.probs[i];
        }
        std::size_t best = 0;
        for (std::size_t h = 1; h < a; ++h)
            if (marg[h] > marg[best])
                best = h;
        if (marg[a] >= marg[best])
            break;
        out.push_back(static_cast<Symbol>(best));
    }
    return Str(alpha, std::move(out));
}

/// Candidate centers for argmin searches: every string up to the longest
/// support string plus two.
inline std::vector<Str> candidate_centers(const FiniteDistribution& dist) {
    return enumerate_strings(dist.support.front().alphabet(), dist.max_length() + 2);
}

inline CenterSummary mode_median_consensus(const FiniteDistribution& dist, DistanceKind metric,
                                           double tie_tolerance = 1e-12) {
    dist.validate();
    CenterSummary out;
    const double top = *std::max_element(dist.probs.begin(), dist.probs.end());
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        if (dist.probs[i] >= top - tie_tolerance)
            out.modes.push_back(dist.support[i]);
    std::sort(out.modes.begin(), out.modes.end(), ShortlexLess{});

    const auto cands = candidate_centers(dist);
    std::vector<double> vals;
    vals.reserve(cands.size());
    for (const Str& c : cands)
        vals.push_back(expected_distance(dist, c, metric));
    out.median_value = *std::min_element(vals.begin(), vals.end());
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (vals[i] <= out.median_value + tie_tolerance)
            out.medians.push_back(cands[i]);
    out.consensus = consensus_of(dist);
    return out;
}

/// Shortlex-first minimizer of expected_phi over the candidate set.
inline Str modified_median(const FiniteDistribution& dist, Phi phi, DistanceKind metric,
                           double tie_tolerance = 1e-12) {
    dist.validate();
    std::optional<Str> best;
    double best_val = std::numeric_limits<double>::infinity();
    for (const Str& c : candidate_centers(dist)) {
        const double v = expected_phi(dist, c, phi, metric);
        if (v < best_val - tie_tolerance) {
            best = c;
            best_val = v;
        }
    }
    return *best;
}

struct MleResult {
    Str lambda;
    double rho = 0.0;
    double loglik = 0.0;
    /// Every candidate within tolerance of the maximum, shortlex order.
    std::vector<Str> ties;
};

/// Full log-likelihood sum_i log q(s_i; lambda, rho) with rho at its profile
/// maximizer (the mean distance), maximized over all lambda up to
/// candidate_max_len. Sphere sizes come from brute-force counting.
inline MleResult exhaustive_mle(std::span<const Str> strings, DistanceKind metric, std::size_t candidate_max_len,
                                double tie_tolerance = 1e-9) {
    if (strings.empty())
        throw Error("at least one string is required");
    const auto cands = enumerate_strings(strings.front().alphabet(), candidate_max_len);
    std::map<std::pair<std::vector<Symbol>, std::size_t>, double> shell_cache;
    auto shell = [&](const Str& c, std::size_t r) {
        auto key = std::make_pair(c.symbols(), r);
        auto it = shell_cache.find(key);
        if (it == shell_cache.end())
            it = shell_cache.emplace(key, static_cast<double>(brute_sphere_size(c, r, metric))).first;
        return it->second;
    };
    const double n = static_cast<double>(strings.size());
    std::vector<double> ll(cands.size());
    std::vector<double> rhos(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c) {
        double dsum = 0.0, log_shells = 0.0;
        for (const Str& s : strings) {
            const std::size_t d = distance(metric, s, cands[c]);
            dsum += static_cast<double>(d);
            log_shells += std::log(shell(cands[c], d));
        }
        const double rho = dsum / n;
        rhos[c] = rho;
        // rho = 0 puts all mass on lambda: log q = 0 for every (identical) string.
        ll[c] = rho == 0.0 ? 0.0 : -n * std::log(rho + 1.0) - log_shells + dsum * std::log(rho / (rho + 1.0));
    }
    const std::size_t best = static_cast<std::size_t>(std::max_element(ll.begin(), ll.end()) - ll.begin());
    MleResult out{cands[best], rhos[best], ll[best], {}};
    for (std::size_t c = 0; c < cands.size(); ++c)
        if (ll[c] >= ll[best] - tie_tolerance)
            out.ties.push_back(cands[c]);
    return out;
}

} // namespace strlap::oracle
