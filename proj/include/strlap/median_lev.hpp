#pragma once

// Location estimation under the Levenshtein distance: an approximate
// generalized median as starting point, then hill climbing over radius-1
// neighbours to maximize F with rho re-estimated per candidate.

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "strlap/objective.hpp"

namespace strlap::median_lev {

struct MedianStep {
    Str lambda;
    double rho = 0.0;
    double objective = 0.0;
};

/// iterations[0] is the starting point; each later entry is an accepted move.
struct MedianTrace {
    Str initial;
    std::vector<MedianStep> iterations;
    std::size_t converged_step = 0;
};

struct MedianFit {
    Str lambda;
    double rho = 0.0;
    MedianTrace trace;
};

/// Hard stop for the local searches; never reached on realistic inputs.
inline constexpr std::size_t kMaxSteps = 100'000;

namespace detail {

inline double weighted_distance_sum(std::span<const Str> strings, std::span<const double> weights,
                                    const Str& center) {
    double total = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i) {
        const double w = strlap::detail::weight_at(weights, i);
        if (w != 0.0)
            total += w * static_cast<double>(levenshtein(strings[i], center));
    }
    return total;
}

} // namespace detail

/// Weighted set median followed by greedy single-edit descent on the
/// weighted distance sum. Ties go to the shortlex-smallest string.
inline Str approx_set_median(std::span<const Str> strings, std::span<const double> weights = {}) {
    strlap::detail::check_weights(strings, weights);
    std::optional<Str> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const Str& cand : strings) {
        const double c = detail::weighted_distance_sum(strings, weights, cand);
        if (c < best_cost || (c == best_cost && shortlex_less(cand, *best))) {
            best = cand;
            best_cost = c;
        }
    }
    Str current = *best;
    for (std::size_t step = 0; step < kMaxSteps; ++step) {
        std::optional<Str> improved;
        double improved_cost = best_cost;
        for (const Str& n : levenshtein_neighbors(current)) {
            const double c = detail::weighted_distance_sum(strings, weights, n);
            if (c < improved_cost) {
                improved = n;
                improved_cost = c;
            }
        }
        if (!improved)
            break;
        current = std::move(*improved);
        best_cost = improved_cost;
    }
    return current;
}

/// Hill climb on F. With `fixed_rho` unset each candidate is scored at its
/// own weighted mean distance; with it set (mixture M-step) rho is held.
inline MedianFit fit(std::span<const Str> strings, std::span<const double> weights, SphereCache& cache,
                     std::optional<double> fixed_rho = std::nullopt) {
    strlap::detail::check_weights(strings, weights);
    auto score = [&](const Str& cand) {
        const double v = mad_around(strings, cand, DistanceKind::Levenshtein, weights);
        const double rho = fixed_rho.value_or(v);
        return MedianStep{cand, v, objective_f(strings, cand, rho, DistanceKind::Levenshtein, cache, weights)};
    };

    MedianFit out;
    out.trace.initial = approx_set_median(strings, weights);
    out.trace.iterations.push_back(score(out.trace.initial));

    for (std::size_t step = 0; step < kMaxSteps; ++step) {
        const MedianStep& cur = out.trace.iterations.back();
        std::optional<MedianStep> best;
        for (const Str& n : levenshtein_neighbors(cur.lambda)) {
            MedianStep s = score(n);
            // Neighbours arrive in shortlex order, so strict comparison keeps
            // the smallest string among equal objectives.
            if (s.objective > (best ? best->objective : cur.objective))
                best = std::move(s);
        }
        if (!best)
            break;
        out.trace.iterations.push_back(std::move(*best));
    }
    out.trace.converged_step = out.trace.iterations.size() - 1;
    out.lambda = out.trace.iterations.back().lambda;
    out.rho = out.trace.iterations.back().rho;
    return out;
}

inline MedianFit fit(std::span<const Str> strings, std::span<const double> weights = {}) {
    SphereCache cache;
    return fit(strings, weights, cache);
}

} // namespace strlap::median_lev
