#include <gtest/gtest.h>

#include "support.hpp"

using namespace strlap;
using namespace strlap::testing;

namespace {

double lev_sum(const std::vector<Str>& s, const Str& c) {
    double t = 0;
    for (const Str& x : s)
        t += static_cast<double>(levenshtein(x, c));
    return t;
}

// F at the candidate's own mean distance, via the library objective.
double f_own(const std::vector<Str>& s, const Str& c) {
    return objective_f(s, c, mad_around(s, c, DistanceKind::Levenshtein), DistanceKind::Levenshtein);
}

} // namespace

TEST(ApproxSetMedian, Examples) {
    const auto s = strs(binary(), {"00", "00", "01"});
    EXPECT_EQ(to_text(median_lev::approx_set_median(s)), "00");
    double best = 1e300;
    for (const Str& c : oracle::enumerate_strings(binary(), 3))
        best = std::min(best, lev_sum(s, c));
    EXPECT_EQ(lev_sum(s, B("00")), best);

    EXPECT_EQ(to_text(median_lev::approx_set_median(strs(dna(), {"gattaca"}))), "gattaca");

    const auto az = Alphabet::from_chars("abz");
    const std::vector<double> w{1, 0, 0};
    EXPECT_EQ(to_text(median_lev::approx_set_median(strs(az, {"ab", "zz", "zz"}), w)), "ab");
}

TEST(ApproxSetMedian, NoSingleEditImproves) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
        const auto s = tiny_instance(rng, DistanceKind::Levenshtein);
        const Str m = median_lev::approx_set_median(s);
        for (const Str& n : levenshtein_neighbors(m))
            EXPECT_GE(lev_sum(s, n), lev_sum(s, m));
    }
}

TEST(MedianFit, AllEqualInputs) {
    const auto s = strs(dna(), {"acg", "acg"});
    const auto fit = median_lev::fit(s);
    EXPECT_EQ(to_text(fit.lambda), "acg");
    EXPECT_EQ(fit.rho, 0.0);
    EXPECT_EQ(fit.trace.converged_step, 0u);
    EXPECT_EQ(fit.trace.iterations.size(), 1u);
}

TEST(MedianFit, SmallExampleTraceAndOptimum) {
    const auto s = strs(binary(), {"00", "00", "01"});
    const auto fit = median_lev::fit(s);
    const auto& it = fit.trace.iterations;
    for (std::size_t i = 1; i < it.size(); ++i)
        EXPECT_GT(it[i].objective, it[i - 1].objective);
    EXPECT_GE(it.back().objective, f_own(s, B("00")));
    double best = -1e300;
    for (const Str& c : oracle::enumerate_strings(binary(), 3))
        best = std::max(best, f_own(s, c));
    EXPECT_NEAR(it.back().objective, best, 1e-12);
}

TEST(MedianFit, LocalMaximumAndStrictTrace) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
        const auto s = tiny_instance(rng, DistanceKind::Levenshtein);
        const auto fit = median_lev::fit(s);
        const auto& it = fit.trace.iterations;
        for (std::size_t i = 1; i < it.size(); ++i)
            ASSERT_GT(it[i].objective, it[i - 1].objective);
        const double end = f_own(s, fit.lambda);
        EXPECT_NEAR(end, it.back().objective, 1e-12);
        for (const Str& n : levenshtein_neighbors(fit.lambda))
            EXPECT_LE(f_own(s, n), end);
        EXPECT_DOUBLE_EQ(fit.rho, mad_around(s, fit.lambda, DistanceKind::Levenshtein));
    }
}

namespace {

// Checks that every accepted move is the shortlex-first neighbour among those
// attaining the best F; returns how many moves had more than one such neighbour.
std::size_t check_tie_breaks(const std::vector<Str>& s) {
    const auto fit = median_lev::fit(s);
    const auto& it = fit.trace.iterations;
    std::size_t contested = 0;
    for (std::size_t i = 1; i < it.size(); ++i) {
        std::vector<Str> best;
        double top = -1e300;
        for (const Str& n : levenshtein_neighbors(it[i - 1].lambda)) {
            const double f = f_own(s, n);
            if (f > top) {
                top = f;
                best = {n};
            } else if (f == top) {
                best.push_back(n);
            }
        }
        EXPECT_EQ(it[i].lambda, best.front());
        contested += best.size() > 1;
    }
    return contested;
}

} // namespace

TEST(MedianFit, TiesGoToShortlexSmallest) {
    // Second move from this start has two neighbours with equal best F.
    const auto tied = strs(binary(), {"10001", "01100", "", "11100", ""});
    EXPECT_GT(check_tie_breaks(tied), 0u);
    EXPECT_EQ(to_text(median_lev::fit(tied).trace.iterations.at(2).lambda), "00");

    std::mt19937_64 rng(4242);
    for (int t = 0; t < 300; ++t)
        check_tie_breaks(tiny_instance(rng, DistanceKind::Levenshtein));
}

TEST(MedianFit, FixedRhoScoresAtThatRho) {
    const auto s = strs(binary(), {"000", "001", "0", "11"});
    SphereCache cache;
    const auto fit = median_lev::fit(s, {}, cache, 0.4);
    EXPECT_NEAR(fit.trace.iterations.back().objective,
                objective_f(s, fit.lambda, 0.4, DistanceKind::Levenshtein), 1e-12);
    for (const Str& n : levenshtein_neighbors(fit.lambda))
        EXPECT_LE(objective_f(s, n, 0.4, DistanceKind::Levenshtein), fit.trace.iterations.back().objective);
}

TEST(MedianFit, WeightedMatchesReplicated) {
    const auto base = strs(binary(), {"01", "110", "1"});
    const std::vector<double> w{3, 1, 2};
    std::vector<Str> rep;
    for (std::size_t i = 0; i < base.size(); ++i)
        for (int k = 0; k < w[i]; ++k)
            rep.push_back(base[i]);
    const auto a = median_lev::fit(base, w);
    const auto b = median_lev::fit(rep);
    EXPECT_EQ(a.lambda, b.lambda);
    EXPECT_NEAR(a.rho, b.rho, 1e-12);
}
