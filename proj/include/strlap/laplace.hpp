#pragma once

// The Laplace-like distribution LA(lambda, rho) on strings:
//
//   q(s) = (rho/(rho+1))^d / ((rho+1) * |dU(lambda, d)|),   d = d(s, lambda).
//
// The shell at distance r carries total mass (1/(rho+1)) (rho/(rho+1))^r, i.e.
// the radius is geometric and, given the radius, the string is uniform on the
// sphere. Sampling follows that decomposition.

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "strlap/spheres.hpp"

namespace strlap {

struct LaplaceParams {
    Str lambda;
    double rho = 1.0;

    LaplaceParams() = default;
    LaplaceParams(Str location, double dispersion) : lambda(std::move(location)), rho(dispersion) {
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw Error("dispersion rho must be a positive finite number");
        if (!lambda.alphabet())
            throw Error("location string has no alphabet");
    }
};

/// log(rho / (rho + 1)), the per-unit-distance decay.
inline double log_decay(double rho) { return -std::log1p(1.0 / rho); }

/// Probability that the distance to the location equals r.
inline double radius_pmf(std::size_t r, double rho) {
    return std::exp(-std::log1p(rho) + static_cast<double>(r) * log_decay(rho));
}

/// Mass of all shells with radius > cap.
inline double radius_tail_mass(std::size_t cap, double rho) {
    return std::exp(static_cast<double>(cap + 1) * log_decay(rho));
}

/// Smallest radius cap whose geometric tail is below `tail`.
inline std::size_t default_radius_cap(double rho, double tail = 1e-12) {
    std::size_t r = 0;
    while (radius_tail_mass(r, rho) >= tail)
        ++r;
    return r;
}

inline double log_pmf(const Str& s, const LaplaceParams& p, DistanceKind metric, SphereCache& cache) {
    const std::size_t d = distance(metric, s, p.lambda);
    const double log_shell = d == 0 ? 0.0 : cache.log_sphere_size(p.lambda, d, metric);
    return -std::log1p(p.rho) - log_shell + static_cast<double>(d) * log_decay(p.rho);
}

inline double log_pmf(const Str& s, const LaplaceParams& p, DistanceKind metric) {
    SphereCache cache;
    return log_pmf(s, p, metric, cache);
}

inline double pmf(const Str& s, const LaplaceParams& p, DistanceKind metric, SphereCache& cache) {
    return std::exp(log_pmf(s, p, metric, cache));
}

inline double pmf(const Str& s, const LaplaceParams& p, DistanceKind metric) {
    SphereCache cache;
    return pmf(s, p, metric, cache);
}

/// Exact sampler: geometric radius, then a uniform member of that sphere.
/// Extended Hamming draws are constructive and uncapped; Levenshtein draws
/// unrank a uniform index through the counting automaton (SphereLimits apply
/// to its state count and radius).
class LaplaceSampler {
public:
    LaplaceSampler(LaplaceParams params, DistanceKind metric, SphereLimits limits = {})
        : params_(std::move(params)), metric_(metric), limits_(limits),
          radius_(1.0 / (params_.rho + 1.0)) {}

    template <class URBG>
    Str operator()(URBG& rng) {
        const std::size_t r = radius_(rng);
        if (metric_ == DistanceKind::ExtHamming)
            return draw_ext_hamming(r, rng);
        return draw_levenshtein(r, rng);
    }

    const LaplaceParams& params() const noexcept { return params_; }

private:
    template <class URBG>
    Str draw_ext_hamming(std::size_t r, URBG& rng) {
        const Str& center = params_.lambda;
        const std::size_t a = center.alphabet()->size();
        auto it = strata_.find(r);
        if (it == strata_.end()) {
            auto strata = ext_hamming_strata(center.size(), r, a);
            BigCount total = 0;
            for (const auto& s : strata)
                total += s.count;
            const double log_total = log_count(total);
            std::vector<double> weights;
            for (const auto& s : strata)
                weights.push_back(std::exp(log_count(s.count) - log_total));
            it = strata_.emplace(r, StrataTable{std::move(strata),
                                                std::discrete_distribution<std::size_t>(weights.begin(), weights.end())})
                     .first;
        }
        auto& table = it->second;
        const HammingStratum& st = table.strata[table.pick(rng)];

        const std::size_t base = std::min(st.length, center.size());
        std::vector<Symbol> out(center.symbols().begin(), center.symbols().begin() + base);
        // Partial Fisher-Yates picks k distinct positions uniformly.
        std::vector<std::size_t> idx(base);
        for (std::size_t i = 0; i < base; ++i)
            idx[i] = i;
        for (std::size_t i = 0; i < st.substitutions; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, base - 1);
            std::swap(idx[i], idx[pick(rng)]);
            const std::size_t p = idx[i];
            std::uniform_int_distribution<std::size_t> other(0, a - 2);
            std::size_t h = other(rng);
            if (h >= out[p])
                ++h;
            out[p] = static_cast<Symbol>(h);
        }
        std::uniform_int_distribution<std::size_t> letter(0, a - 1);
        while (out.size() < st.length)
            out.push_back(static_cast<Symbol>(letter(rng)));
        return Str(center.alphabet(), std::move(out));
    }

    template <class URBG>
    Str draw_levenshtein(std::size_t r, URBG& rng) {
        auto it = spheres_.find(r);
        if (it == spheres_.end())
            it = spheres_.emplace(r, LevenshteinSphereIndex(params_.lambda, r, limits_)).first;
        return it->second.sample(rng);
    }

    struct StrataTable {
        std::vector<HammingStratum> strata;
        std::discrete_distribution<std::size_t> pick;
    };

    LaplaceParams params_;
    DistanceKind metric_;
    SphereLimits limits_;
    std::geometric_distribution<std::size_t> radius_;
    std::map<std::size_t, StrataTable> strata_;
    std::map<std::size_t, LevenshteinSphereIndex> spheres_;
};

/// n independent draws; identical output for identical seed.
inline std::vector<Str> sample(const LaplaceParams& params, DistanceKind metric, std::uint64_t seed,
                               std::size_t n, const SphereLimits& limits = {}) {
    std::mt19937_64 rng(seed);
    LaplaceSampler draw(params, metric, limits);
    std::vector<Str> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(draw(rng));
    return out;
}

struct EntropyReport {
    double entropy = 0.0;   // over shells 0..radius_cap
    double tail_mass = 0.0; // probability beyond radius_cap
    std::size_t radius_cap = 0;
};

/// -sum q log q over every string within radius_cap of the location. Each
/// shell is uniform, so it contributes -M_r log(M_r / |dU(lambda, r)|).
inline EntropyReport truncated_entropy(const LaplaceParams& p, DistanceKind metric, std::size_t radius_cap,
                                       SphereCache& cache) {
    EntropyReport rep;
    rep.radius_cap = radius_cap;
    rep.tail_mass = radius_tail_mass(radius_cap, p.rho);
    for (std::size_t r = 0; r <= radius_cap; ++r) {
        const double log_mass = -std::log1p(p.rho) + static_cast<double>(r) * log_decay(p.rho);
        const double log_shell = r == 0 ? 0.0 : cache.log_sphere_size(p.lambda, r, metric);
        rep.entropy -= std::exp(log_mass) * (log_mass - log_shell);
    }
    return rep;
}

inline EntropyReport truncated_entropy(const LaplaceParams& p, DistanceKind metric, std::size_t radius_cap) {
    SphereCache cache;
    return truncated_entropy(p, metric, radius_cap, cache);
}

} // namespace strlap
