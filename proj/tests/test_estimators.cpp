#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace strlap;
using namespace strlap::testing;

namespace {

AlphabetPtr abc() {
    static const AlphabetPtr a = Alphabet::from_chars("abc");
    return a;
}

std::vector<Str> ab_ab_ac() { return strs(abc(), {"ab", "ab", "ac"}); }

} // namespace

TEST(SiteFrequencies, Examples) {
    const auto f = site_frequencies(ab_ab_ac());
    ASSERT_EQ(f.sites(), 3u);
    EXPECT_DOUBLE_EQ(f(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(f(1, 1), 2.0 / 3);
    EXPECT_DOUBLE_EQ(f(1, 2), 1.0 / 3);
    EXPECT_DOUBLE_EQ(f(2, f.empty()), 1.0);

    const auto single = site_frequencies(strs(abc(), {"cab"}));
    for (std::size_t j = 0; j < single.sites(); ++j) {
        double row = 0.0, top = 0.0;
        for (std::size_t h = 0; h <= single.letters(); ++h) {
            row += single(j, h);
            top = std::max(top, single(j, h));
        }
        EXPECT_DOUBLE_EQ(row, 1.0);
        EXPECT_DOUBLE_EQ(top, 1.0);
    }

    const auto empty = site_frequencies(strs(abc(), {"", ""}));
    ASSERT_EQ(empty.sites(), 1u);
    EXPECT_DOUBLE_EQ(empty(0, empty.empty()), 1.0);
}

TEST(SiteFrequencies, RowsSumToOneWeighted) {
    const auto s = strs(dna(), {"acgt", "a", "", "ggg"});
    const std::vector<double> w{0.3, 2.0, 0.0, 1.1};
    const auto f = site_frequencies(s, w);
    for (std::size_t j = 0; j < f.sites(); ++j) {
        double row = 0.0;
        for (std::size_t h = 0; h <= f.letters(); ++h) {
            EXPECT_GE(f(j, h), 0.0);
            EXPECT_LE(f(j, h), 1.0);
            row += f(j, h);
        }
        EXPECT_NEAR(row, 1.0, 1e-12);
    }
    EXPECT_NEAR(f(0, 0), 2.3 / 3.4, 1e-15);
}

TEST(SiteFrequencies, Errors) {
    EXPECT_THROW(site_frequencies({}), Error);
    const std::vector<Str> mixed{B("0"), D("a")};
    EXPECT_THROW(site_frequencies(mixed), AlphabetMismatch);
    const auto s = ab_ab_ac();
    const std::vector<double> zero{0, 0, 0}, neg{1, -1, 1}, short_w{1, 1};
    EXPECT_THROW(site_frequencies(s, zero), Error);
    EXPECT_THROW(site_frequencies(s, neg), Error);
    EXPECT_THROW(site_frequencies(s, short_w), Error);
}

TEST(JStar, Examples) {
    EXPECT_EQ(j_star(site_frequencies(ab_ab_ac())), 2u);
    EXPECT_EQ(j_star(site_frequencies(strs(abc(), {"", ""}))), 0u);
    EXPECT_EQ(j_star(site_frequencies(strs(abc(), {"a"}))), 1u);
    // A tie between the empty letter and a letter stops the count.
    EXPECT_EQ(j_star(site_frequencies(strs(abc(), {"a", ""}))), 0u);
}

TEST(ConditionU, Examples) {
    const auto f = site_frequencies(ab_ab_ac());
    const auto strict = condition_u_and_j_eps(f, 2, 0.1);
    EXPECT_FALSE(strict.held);
    EXPECT_FALSE(strict.j_eps);
    const auto loose = condition_u_and_j_eps(f, 2, 0.75);
    EXPECT_TRUE(loose.held);
    EXPECT_EQ(loose.j_eps, 1u);
    EXPECT_THROW(condition_u_and_j_eps(f, 0, 0.1), Error);
    EXPECT_THROW(condition_u_and_j_eps(f, 2, 0.0), Error);
}

TEST(ConditionU, UniformLastSiteGivesPrecedingIndex) {
    // Site 2 has a, b, c each exactly 1/3: spread 0, so any eps > 0 holds.
    const auto f = site_frequencies(strs(abc(), {"aa", "ab", "ac"}));
    ASSERT_EQ(j_star(f), 2u);
    const auto u = condition_u_and_j_eps(f, 2, 1e-9);
    EXPECT_TRUE(u.held);
    EXPECT_EQ(u.j_eps, 1u);
    EXPECT_EQ(to_text(truncated_consensus(strs(abc(), {"aa", "ab", "ac"}), 1e-9)), "a");
}

TEST(TruncatedConsensus, Examples) {
    EXPECT_EQ(to_text(truncated_consensus(ab_ab_ac(), 0.1)), "ab");
    EXPECT_EQ(to_text(truncated_consensus(ab_ab_ac(), 0.75)), "a");
    for (double eps : {1e-6, 0.5, 10.0})
        EXPECT_EQ(to_text(truncated_consensus(strs(abc(), {"", "", ""}), eps)), "");
    EXPECT_THROW(truncated_consensus(ab_ab_ac(), 0.0), Error);
}

TEST(TruncatedConsensus, LengthBoundAndEpsMonotone) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = tiny_instance(rng, DistanceKind::ExtHamming);
        const auto f = site_frequencies(s);
        const std::size_t js = j_star(f);
        std::size_t prev = js;
        for (double eps : {1e-9, 0.05, 0.2, 0.5, 1.0, 2.0}) {
            const auto c = truncated_consensus(s, eps);
            EXPECT_LE(c.size(), prev);
            prev = c.size();
        }
        // Below every spread the plain consensus prefix comes back.
        if (js > 0 && !condition_u_and_j_eps(f, js, 1e-9).held) {
            const auto c = truncated_consensus(s, 1e-9);
            ASSERT_EQ(c.size(), js);
            for (std::size_t j = 0; j < js; ++j)
                EXPECT_EQ(c[j], consensus_letter(f, j));
        }
    }
}

TEST(MadAround, AppendixExample) {
    const auto ms = appendix_multiset();
    EXPECT_NEAR(mad_around(ms, B(""), DistanceKind::Levenshtein), 1.3, 1e-12);
    EXPECT_NEAR(mad_around(ms, B("0"), DistanceKind::Levenshtein), 0.975, 1e-12);
    EXPECT_NEAR(mad_around(ms, B("00"), DistanceKind::Levenshtein), 1.35, 1e-12);
}

TEST(MadAround, PermutationInvariant) {
    auto ms = appendix_multiset();
    const double before = mad_around(ms, B("01"), DistanceKind::ExtHamming);
    std::mt19937_64 rng(5);
    std::shuffle(ms.begin(), ms.end(), rng);
    EXPECT_DOUBLE_EQ(mad_around(ms, B("01"), DistanceKind::ExtHamming), before);
}

TEST(ObjectiveF, Examples) {
    const auto same = strs(binary(), {"01", "01"});
    EXPECT_EQ(objective_f(same, B("01"), 1.0, DistanceKind::ExtHamming), 0.0);
    EXPECT_EQ(objective_f(same, B("01"), 0.0, DistanceKind::Levenshtein), 0.0);
    const std::vector<Str> one{B("10")};
    EXPECT_NEAR(objective_f(one, B("00"), 1.0, DistanceKind::ExtHamming), -std::log(5.0) - std::log(2.0), 1e-14);
}

TEST(ObjectiveF, EqualsLogLikelihoodMinusNormalizer) {
    const auto s = strs(binary(), {"0", "011", "", "10"});
    const LaplaceParams p(B("01"), 0.7);
    for (auto m : {DistanceKind::ExtHamming, DistanceKind::Levenshtein}) {
        double ll = 0.0;
        for (const Str& x : s)
            ll += log_pmf(x, p, m);
        EXPECT_NEAR(objective_f(s, p.lambda, p.rho, m), ll + 4 * std::log(1.7), 1e-12);
    }
}

TEST(FitLaplace, CopiesOfOneString) {
    const auto s = strs(dna(), {"gattaca", "gattaca", "gattaca"});
    for (auto m : {DistanceKind::ExtHamming, DistanceKind::Levenshtein}) {
        const auto rep = fit_laplace(s, m, 0.05);
        EXPECT_EQ(to_text(rep.lambda_hat), "gattaca");
        EXPECT_EQ(rep.rho_hat, 0.0);
        EXPECT_EQ(rep.objective, 0.0);
    }
}

TEST(FitLaplace, ExtHammingReportFields) {
    const auto rep = fit_laplace(ab_ab_ac(), DistanceKind::ExtHamming, 0.75);
    EXPECT_EQ(to_text(rep.lambda_hat), "a");
    EXPECT_EQ(rep.j_star, 2u);
    EXPECT_TRUE(rep.u_condition_held);
    EXPECT_EQ(rep.j_epsilon, 1u);
    EXPECT_DOUBLE_EQ(rep.rho_hat, 1.0);
    EXPECT_FALSE(rep.trace);
}

TEST(FitLaplace, LevenshteinImprovesOnInitializer) {
    const auto s = strs(binary(), {"00", "00", "01"});
    const auto rep = fit_laplace(s, DistanceKind::Levenshtein, 0.05);
    ASSERT_TRUE(rep.trace);
    const auto& init = rep.trace->iterations.front();
    EXPECT_EQ(to_text(rep.trace->initial), "00");
    EXPECT_GE(rep.objective, init.objective);
    EXPECT_TRUE(std::isfinite(rep.objective));
}

TEST(FitLaplace, RecoversLocationFromSamples) {
    const LaplaceParams truth(D("acgtac"), 1.0);
    const auto s = sample(truth, DistanceKind::ExtHamming, 2024, 500);
    const auto rep = fit_laplace(s, DistanceKind::ExtHamming, 0.1);
    EXPECT_EQ(rep.lambda_hat, truth.lambda);
    EXPECT_NEAR(rep.rho_hat, 1.0, 0.2);
}

TEST(FitLaplace, MatchesExhaustiveMleOnSmallExample) {
    const auto s = strs(binary(), {"00", "00", "01"});
    const auto rep = fit_laplace(s, DistanceKind::ExtHamming, 0.01);
    const auto mle = oracle::exhaustive_mle(s, DistanceKind::ExtHamming, 3);
    EXPECT_NE(std::find(mle.ties.begin(), mle.ties.end(), rep.lambda_hat), mle.ties.end());
    EXPECT_EQ(to_text(rep.lambda_hat), "00");
}
