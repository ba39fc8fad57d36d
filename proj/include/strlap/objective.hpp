#pragma once

// Dispersion (mean absolute deviation) and the location objective
//
//   F(lambda, rho) = -sum_i w_i log|dU(lambda, d_i)| + log(rho/(rho+1)) sum_i w_i d_i
//
// with d_i = d(s_i, lambda). Unit weights give the plain likelihood objective;
// responsibilities as weights give the mixture M-step bracket.

#include <span>
#include <vector>

#include "strlap/laplace.hpp"

namespace strlap {

namespace detail {

inline void check_weights(std::span<const Str> strings, std::span<const double> weights) {
    if (strings.empty())
        throw Error("at least one string is required");
    if (weights.empty())
        return;
    if (weights.size() != strings.size())
        throw Error("weights and strings differ in length");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error("weights must be nonnegative and finite");
        total += w;
    }
    if (!(total > 0.0))
        throw Error("weights must not all be zero");
}

inline double weight_at(std::span<const double> weights, std::size_t i) {
    return weights.empty() ? 1.0 : weights[i];
}

} // namespace detail

/// (Weighted) mean of d(s_i, center).
inline double mad_around(std::span<const Str> strings, const Str& center, DistanceKind metric,
                         std::span<const double> weights = {}) {
    detail::check_weights(strings, weights);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i) {
        const double w = detail::weight_at(weights, i);
        if (w == 0.0)
            continue;
        num += w * static_cast<double>(distance(metric, strings[i], center));
        den += w;
    }
    return num / den;
}

inline double objective_f(std::span<const Str> strings, const Str& lambda, double rho, DistanceKind metric,
                          SphereCache& cache, std::span<const double> weights = {}) {
    detail::check_weights(strings, weights);
    if (!(rho >= 0.0))
        throw Error("rho must be nonnegative");
    double log_shells = 0.0, dist_sum = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i) {
        const double w = detail::weight_at(weights, i);
        if (w == 0.0)
            continue;
        const std::size_t d = distance(metric, strings[i], lambda);
        if (d == 0)
            continue;
        log_shells += w * cache.log_sphere_size(lambda, d, metric);
        dist_sum += w * static_cast<double>(d);
    }
    // The decay term vanishes when every weighted string sits on lambda, even for rho = 0.
    const double decay = dist_sum == 0.0 ? 0.0 : dist_sum * log_decay(rho);
    return -log_shells + decay;
}

inline double objective_f(std::span<const Str> strings, const Str& lambda, double rho, DistanceKind metric) {
    SphereCache cache;
    return objective_f(strings, lambda, rho, metric, cache);
}

} // namespace strlap
