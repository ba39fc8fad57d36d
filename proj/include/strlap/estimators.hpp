#pragma once

// Single-distribution estimators: per-site letter frequencies, the last
// reliably nonempty site j*, the near-uniformity condition U(eps), the
// truncated consensus sequence, and fit_laplace which pairs the location
// estimate with the mean absolute deviation around it.

#include <optional>
#include <span>
#include <vector>

#include "strlap/median_lev.hpp"
#include "strlap/objective.hpp"

namespace strlap {

/// Relative frequency of each letter (and of the empty letter, last column)
/// at sites 1..J_max, where J_max = longest string + 1. Sites are 0-based in
/// this interface: row 0 is the first site.
class SiteFrequencies {
public:
    SiteFrequencies(std::size_t sites, std::size_t letters)
        : sites_(sites), letters_(letters), f_(sites * (letters + 1), 0.0) {}

    std::size_t sites() const noexcept { return sites_; }
    /// Nonempty letters (z - 1); the empty letter is column `empty()`.
    std::size_t letters() const noexcept { return letters_; }
    std::size_t empty() const noexcept { return letters_; }

    double operator()(std::size_t site, std::size_t h) const { return f_[site * (letters_ + 1) + h]; }
    double& operator()(std::size_t site, std::size_t h) { return f_[site * (letters_ + 1) + h]; }

private:
    std::size_t sites_;
    std::size_t letters_;
    std::vector<double> f_;
};

/// Frequencies weighted by `weights` (unit weights when empty). With
/// responsibilities as weights this is the per-component extension used by
/// the mixture location update.
inline SiteFrequencies site_frequencies(std::span<const Str> strings, std::span<const double> weights = {}) {
    detail::check_weights(strings, weights);
    const AlphabetPtr& alpha = strings.front().alphabet();
    std::size_t longest = 0;
    for (const Str& s : strings) {
        if (!same_alphabet(s, strings.front()))
            throw AlphabetMismatch();
        longest = std::max(longest, s.size());
    }
    SiteFrequencies f(longest + 1, alpha->size());
    double total = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i) {
        const double w = detail::weight_at(weights, i);
        if (w == 0.0)
            continue;
        total += w;
        const Str& s = strings[i];
        for (std::size_t j = 0; j < f.sites(); ++j)
            f(j, j < s.size() ? s[j] : f.empty()) += w;
    }
    for (std::size_t j = 0; j < f.sites(); ++j)
        for (std::size_t h = 0; h <= f.letters(); ++h)
            f(j, h) /= total;
    return f;
}

namespace detail {
// Weighted sums accumulate rounding; frequencies this close count as tied.
inline constexpr double kTieTolerance = 1e-12;
} // namespace detail

/// Number of leading sites whose most frequent letter is nonempty: the first
/// site where the empty letter attains the maximum (ties included), minus one.
inline std::size_t j_star(const SiteFrequencies& f) {
    for (std::size_t j = 0; j < f.sites(); ++j) {
        double best_letter = 0.0;
        for (std::size_t h = 0; h < f.letters(); ++h)
            best_letter = std::max(best_letter, f(j, h));
        if (f(j, f.empty()) >= best_letter - detail::kTieTolerance)
            return j;
    }
    return f.sites();
}

struct UCondition {
    bool held = false;
    std::optional<std::size_t> j_eps;
};

/// U(eps): some tail j..j* of sites has every nonempty-letter spread
/// (max - min over all z-1 letters, unobserved ones included) below eps.
/// j_eps is the number of sites preceding the longest such tail.
inline UCondition condition_u_and_j_eps(const SiteFrequencies& f, std::size_t jstar, double epsilon) {
    if (jstar == 0)
        throw Error("condition U is undefined when j* = 0");
    if (jstar > f.sites())
        throw Error("j* exceeds the number of sites");
    if (!(epsilon > 0.0))
        throw Error("epsilon must be positive");
    auto spread = [&](std::size_t j) {
        double lo = f(j, 0), hi = f(j, 0);
        for (std::size_t h = 1; h < f.letters(); ++h) {
            lo = std::min(lo, f(j, h));
            hi = std::max(hi, f(j, h));
        }
        return hi - lo;
    };
    std::size_t start = jstar;
    while (start > 0 && spread(start - 1) < epsilon)
        --start;
    if (start == jstar)
        return {};
    return {true, start};
}

/// Most frequent letter at a site; ties go to the smallest index, so a
/// nonempty letter wins any tie with the empty letter.
inline std::size_t consensus_letter(const SiteFrequencies& f, std::size_t site) {
    std::size_t best = 0;
    for (std::size_t h = 1; h <= f.letters(); ++h)
        if (f(site, h) > f(site, best))
            best = h;
    return best;
}

struct ConsensusResult {
    std::vector<Symbol> symbols;
    std::size_t j_star = 0;
    UCondition u;
};

inline ConsensusResult truncated_consensus_from(const SiteFrequencies& f, double epsilon) {
    ConsensusResult r;
    r.j_star = j_star(f);
    if (r.j_star == 0)
        return r;
    r.u = condition_u_and_j_eps(f, r.j_star, epsilon);
    const std::size_t len = r.u.held ? *r.u.j_eps : r.j_star;
    for (std::size_t j = 0; j < len; ++j)
        r.symbols.push_back(static_cast<Symbol>(consensus_letter(f, j)));
    return r;
}

inline Str truncated_consensus(std::span<const Str> strings, double epsilon, std::span<const double> weights = {}) {
    if (!(epsilon > 0.0))
        throw Error("epsilon must be positive");
    auto f = site_frequencies(strings, weights);
    return Str(strings.front().alphabet(), truncated_consensus_from(f, epsilon).symbols);
}

struct FitReport {
    Str lambda_hat;
    double rho_hat = 0.0;
    double objective = 0.0;
    std::size_t j_star = 0;
    std::optional<std::size_t> j_epsilon;
    bool u_condition_held = false;
    /// Present for Levenshtein fits.
    std::optional<median_lev::MedianTrace> trace;
};

/// Extended Hamming: truncated consensus and the MAD around it.
/// Levenshtein: the median-then-hill-climb procedure.
inline FitReport fit_laplace(std::span<const Str> strings, DistanceKind metric, double epsilon,
                             SphereCache& cache) {
    if (strings.empty())
        throw Error("at least one string is required");
    FitReport rep;
    if (metric == DistanceKind::ExtHamming) {
        if (!(epsilon > 0.0))
            throw Error("epsilon must be positive");
        const auto f = site_frequencies(strings);
        auto c = truncated_consensus_from(f, epsilon);
        rep.j_star = c.j_star;
        rep.u_condition_held = c.u.held;
        rep.j_epsilon = c.u.j_eps;
        rep.lambda_hat = Str(strings.front().alphabet(), std::move(c.symbols));
        rep.rho_hat = mad_around(strings, rep.lambda_hat, metric);
    } else {
        auto m = median_lev::fit(strings, {}, cache);
        rep.lambda_hat = m.lambda;
        rep.rho_hat = m.rho;
        rep.trace = std::move(m.trace);
    }
    rep.objective = objective_f(strings, rep.lambda_hat, rep.rho_hat, metric, cache);
    return rep;
}

inline FitReport fit_laplace(std::span<const Str> strings, DistanceKind metric, double epsilon) {
    SphereCache cache;
    return fit_laplace(strings, metric, epsilon, cache);
}

} // namespace strlap
