#pragma once

// k-component Laplace-like mixture fitted by EM with a closed-form location
// step under the extended Hamming distance (responsibility-weighted truncated
// consensus) and a weighted hill climb under Levenshtein.
//
// Several chains start from distance-spread seeds; each is scored by the
// responsibility-weighted log-likelihood at iteration min(tau, convergence)
// and the best-scoring chain is returned.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "strlap/estimators.hpp"
#include "strlap/median_lev.hpp"
#include "strlap/seeding.hpp"

namespace strlap::mixture {

inline constexpr double kRhoFloor = 1e-6;
inline constexpr double kMinColumnMass = 1e-12;

struct MixtureParams {
    std::vector<double> pi;
    std::vector<Str> lambda;
    std::vector<double> rho;

    std::size_t k() const noexcept { return pi.size(); }

    void validate() const {
        if (pi.empty())
            throw Error("mixture needs at least one component");
        if (lambda.size() != pi.size() || rho.size() != pi.size())
            throw Error("mixture parameter vectors differ in length");
        double total = 0.0;
        for (double p : pi) {
            if (!(p > 0.0 && p <= 1.0))
                throw Error("mixing proportions must lie in (0, 1]");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw Error("mixing proportions must sum to 1");
        for (double r : rho)
            if (!(r >= kRhoFloor) || !std::isfinite(r))
                throw Error("component dispersion below floor 1e-6");
        for (const Str& l : lambda)
            if (!same_alphabet(l, lambda.front()))
                throw AlphabetMismatch();
    }

    LaplaceParams component(std::size_t g) const { return {lambda[g], rho[g]}; }
};

/// n x k posterior membership weights, row-major.
class Responsibilities {
public:
    Responsibilities() = default;
    Responsibilities(std::size_t n, std::size_t k) : n_(n), k_(k), z_(n * k, 0.0) {}

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return k_; }
    double operator()(std::size_t i, std::size_t g) const { return z_[i * k_ + g]; }
    double& operator()(std::size_t i, std::size_t g) { return z_[i * k_ + g]; }

    std::span<const double> row(std::size_t i) const { return {z_.data() + i * k_, k_}; }

    std::vector<double> column(std::size_t g) const {
        std::vector<double> c(n_);
        for (std::size_t i = 0; i < n_; ++i)
            c[i] = (*this)(i, g);
        return c;
    }

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<double> z_;
};

struct FitConfig {
    std::size_t k = 2;
    DistanceKind metric = DistanceKind::ExtHamming;
    double epsilon = 0.05;
    std::size_t max_iters = 100;
    double tol_pi = 1e-8;
    double tol_rho = 1e-8;
    std::size_t restarts = 1;
    /// Iteration at which chains are scored; defaults to max_iters.
    std::optional<std::size_t> tau;
    std::uint64_t seed = 0;
    /// Worker threads for chains; 0 = STRLAP_THREADS or hardware concurrency.
    std::size_t threads = 0;
    SphereLimits limits{};

    std::size_t effective_tau() const { return tau.value_or(max_iters); }

    void validate() const {
        if (k == 0)
            throw Error("k must be at least 1");
        if (!(epsilon > 0.0))
            throw Error("epsilon must be positive");
        if (!(tol_pi > 0.0) || !(tol_rho > 0.0))
            throw Error("tolerances must be positive");
        if (restarts == 0)
            throw Error("restarts must be at least 1");
        if (max_iters == 0)
            throw Error("max_iters must be at least 1");
        if (effective_tau() == 0 || effective_tau() > max_iters)
            throw Error("tau must lie in 1..max_iters");
    }
};

/// Per-chain bookkeeping.
struct ChainRecord {
    std::uint64_t seed = 0;
    std::vector<double> loglik_trace; // weighted log-likelihood after each iteration
    std::vector<std::string> monotonicity_violations;
    std::size_t iters = 0;
    bool converged = false;
    double score = -std::numeric_limits<double>::infinity();
    bool discarded = false;
    std::string warning;
};

struct MixtureFit {
    MixtureParams params;
    Responsibilities responsibilities;
    double weighted_loglik = 0.0;
    std::size_t iters_used = 0;
    std::size_t restart_index_chosen = 0;
    bool converged = false;
    std::vector<ChainRecord> chains;
};

inline double log_sum_exp(std::span<const double> xs) {
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double x : xs)
        s += std::exp(x - m);
    return m + std::log(s);
}

inline Responsibilities e_step(std::span<const Str> strings, const MixtureParams& params, DistanceKind metric,
                               SphereCache& cache) {
    const std::size_t k = params.k();
    Responsibilities z(strings.size(), k);
    std::vector<double> lp(k);
    for (std::size_t i = 0; i < strings.size(); ++i) {
        for (std::size_t g = 0; g < k; ++g) {
            lp[g] = std::log(params.pi[g]) + log_pmf(strings[i], params.component(g), metric, cache);
            if (!std::isfinite(lp[g]))
                throw Error("non-finite log density for string " + std::to_string(i) + ", component " +
                            std::to_string(g));
        }
        const double norm = log_sum_exp(lp);
        for (std::size_t g = 0; g < k; ++g)
            z(i, g) = std::exp(lp[g] - norm);
    }
    return z;
}

inline std::vector<double> m_step_pi(const Responsibilities& z) {
    std::vector<double> pi(z.cols(), 0.0);
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t g = 0; g < z.cols(); ++g)
            pi[g] += z(i, g);
    for (double& p : pi)
        p /= static_cast<double>(z.rows());
    return pi;
}

namespace detail {

inline std::vector<double> checked_column(const Responsibilities& z, std::size_t g) {
    auto col = z.column(g);
    double mass = 0.0;
    for (double w : col)
        mass += w;
    if (mass < kMinColumnMass)
        throw DegenerateComponent(g);
    return col;
}

} // namespace detail

inline std::vector<Str> m_step_lambda(std::span<const Str> strings, const Responsibilities& z, DistanceKind metric,
                                      double epsilon, std::span<const double> rho_prev, SphereCache& cache) {
    std::vector<Str> out;
    out.reserve(z.cols());
    for (std::size_t g = 0; g < z.cols(); ++g) {
        const auto w = detail::checked_column(z, g);
        if (metric == DistanceKind::ExtHamming)
            out.push_back(truncated_consensus(strings, epsilon, w));
        else
            out.push_back(median_lev::fit(strings, w, cache, rho_prev[g]).lambda);
    }
    return out;
}

inline std::vector<double> m_step_rho(std::span<const Str> strings, const Responsibilities& z,
                                      std::span<const Str> lambdas, DistanceKind metric) {
    std::vector<double> rho(z.cols());
    for (std::size_t g = 0; g < z.cols(); ++g) {
        const auto w = detail::checked_column(z, g);
        rho[g] = std::max(kRhoFloor, mad_around(strings, lambdas[g], metric, w));
    }
    return rho;
}

/// (1/n) sum_g sum_i z_ig log q(s_i; lambda_g, rho_g).
inline double weighted_loglik(std::span<const Str> strings, const Responsibilities& z, const MixtureParams& params,
                              DistanceKind metric, SphereCache& cache) {
    double total = 0.0;
    for (std::size_t i = 0; i < strings.size(); ++i)
        for (std::size_t g = 0; g < params.k(); ++g)
            if (z(i, g) != 0.0)
                total += z(i, g) * log_pmf(strings[i], params.component(g), metric, cache);
    return total / static_cast<double>(strings.size());
}

struct Assignment {
    std::size_t component = 0;
    std::vector<double> posterior;
};

/// MAP class per string; ties go to the lowest component index.
inline std::vector<Assignment> map_cluster(std::span<const Str> strings, const MixtureParams& params,
                                           DistanceKind metric, SphereCache& cache) {
    params.validate();
    const auto z = e_step(strings, params, metric, cache);
    std::vector<Assignment> out(strings.size());
    for (std::size_t i = 0; i < strings.size(); ++i) {
        auto row = z.row(i);
        out[i].posterior.assign(row.begin(), row.end());
        out[i].component = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

/// Distance-spread seeding: first seed uniform, each further seed drawn with
/// probability proportional to its distance from the nearest chosen seed.
/// Always taking the farthest string lets one heavy-tail outlier grab a
/// component in every restart.
inline MixtureParams initial_params(std::span<const Str> strings, const FitConfig& cfg, std::mt19937_64& rng) {
    const std::size_t n = strings.size();
    std::vector<std::size_t> seeds;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    seeds.push_back(first(rng));
    std::vector<std::size_t> nearest(n);
    for (std::size_t i = 0; i < n; ++i)
        nearest[i] = distance(cfg.metric, strings[i], strings[seeds[0]]);
    while (seeds.size() < cfg.k) {
        std::size_t s = 0;
        if (*std::max_element(nearest.begin(), nearest.end()) == 0) {
            // Every string duplicates a seed; repeats are then unavoidable.
            s = first(rng);
        } else {
            std::discrete_distribution<std::size_t> pick(nearest.begin(), nearest.end());
            s = pick(rng);
        }
        seeds.push_back(s);
        for (std::size_t i = 0; i < n; ++i)
            nearest[i] = std::min(nearest[i], distance(cfg.metric, strings[i], strings[s]));
    }
    double spread = 0.0;
    for (std::size_t d : nearest)
        spread += static_cast<double>(d);
    spread = std::max(kRhoFloor, spread / static_cast<double>(n));

    MixtureParams p;
    p.pi.assign(cfg.k, 1.0 / static_cast<double>(cfg.k));
    for (std::size_t s : seeds)
        p.lambda.push_back(strings[s]);
    p.rho.assign(cfg.k, spread);
    return p;
}

namespace detail {

inline std::string describe(const MixtureParams& p) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t g = 0; g < p.k(); ++g)
        os << (g ? "; " : "") << "g" << g + 1 << "{pi=" << p.pi[g] << ", lambda=\"" << to_text(p.lambda[g])
           << "\", rho=" << p.rho[g] << "}";
    return os.str();
}

struct ChainResult {
    ChainRecord record;
    MixtureParams params;
};

inline ChainResult run_chain(std::span<const Str> strings, const FitConfig& cfg, std::uint64_t seed,
                             SphereCache& cache) {
    ChainResult out;
    out.record.seed = seed;
    std::mt19937_64 rng(seed);
    MixtureParams theta = initial_params(strings, cfg, rng);
    const std::size_t tau = cfg.effective_tau();
    bool scored = false;
    for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
        const auto z = e_step(strings, theta, cfg.metric, cache);
        MixtureParams next;
        next.pi = m_step_pi(z);
        next.lambda = m_step_lambda(strings, z, cfg.metric, cfg.epsilon, theta.rho, cache);
        next.rho = m_step_rho(strings, z, next.lambda, cfg.metric);

        const double ll = weighted_loglik(strings, z, next, cfg.metric, cache);
        if (!out.record.loglik_trace.empty() && ll < out.record.loglik_trace.back() - 1e-9) {
            std::ostringstream os;
            os.precision(17);
            os << "iteration " << t << ": weighted log-likelihood fell from " << out.record.loglik_trace.back()
               << " to " << ll << " at " << describe(next);
            out.record.monotonicity_violations.push_back(os.str());
        }
        out.record.loglik_trace.push_back(ll);

        double dpi = 0.0, drho = 0.0;
        bool same_lambda = true;
        for (std::size_t g = 0; g < cfg.k; ++g) {
            dpi = std::max(dpi, std::abs(next.pi[g] - theta.pi[g]));
            drho = std::max(drho, std::abs(next.rho[g] - theta.rho[g]));
            same_lambda = same_lambda && next.lambda[g] == theta.lambda[g];
        }
        const bool converged = dpi < cfg.tol_pi && drho < cfg.tol_rho && same_lambda;
        theta = std::move(next);
        out.record.iters = t;
        if (!scored && (t == tau || converged)) {
            out.record.score = ll;
            scored = true;
        }
        if (converged) {
            out.record.converged = true;
            break;
        }
    }
    out.params = std::move(theta);
    return out;
}

inline std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested;
    if (n == 0) {
        if (const char* env = std::getenv("STRLAP_THREADS"))
            n = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
    }
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, jobs));
}

} // namespace detail

inline MixtureFit fit(std::span<const Str> strings, const FitConfig& cfg, SphereCache& cache) {
    cfg.validate();
    if (strings.size() < cfg.k)
        throw Error("need at least k strings");
    for (const Str& s : strings)
        if (!same_alphabet(s, strings.front()))
            throw AlphabetMismatch();

    std::vector<std::optional<detail::ChainResult>> results(cfg.restarts);
    std::vector<std::exception_ptr> failures(cfg.restarts);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r; (r = next.fetch_add(1)) < cfg.restarts;) {
            try {
                results[r] = detail::run_chain(strings, cfg, derive_seed(cfg.seed, r), cache);
            } catch (const DegenerateComponent& e) {
                ChainRecord rec;
                rec.seed = derive_seed(cfg.seed, r);
                rec.discarded = true;
                rec.warning = "chain " + std::to_string(r) + " discarded: " + e.what();
                results[r] = detail::ChainResult{std::move(rec), {}};
            } catch (...) {
                failures[r] = std::current_exception();
            }
        }
    };
    const std::size_t nworkers = detail::worker_count(cfg.threads, cfg.restarts);
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nworkers; ++w)
            pool.emplace_back(worker);
    }
    for (auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    MixtureFit out;
    std::optional<std::size_t> best;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        const auto& rec = results[r]->record;
        if (!rec.discarded && (!best || rec.score > results[*best]->record.score))
            best = r;
        out.chains.push_back(rec);
    }
    if (!best)
        throw Error("every chain collapsed to a degenerate component");

    out.restart_index_chosen = *best;
    out.params = std::move(results[*best]->params);
    out.iters_used = results[*best]->record.iters;
    out.converged = results[*best]->record.converged;
    out.responsibilities = e_step(strings, out.params, cfg.metric, cache);
    out.weighted_loglik = weighted_loglik(strings, out.responsibilities, out.params, cfg.metric, cache);
    return out;
}

inline MixtureFit fit(std::span<const Str> strings, const FitConfig& cfg) {
    SphereCache cache(cfg.limits);
    return fit(strings, cfg, cache);
}

} // namespace strlap::mixture
