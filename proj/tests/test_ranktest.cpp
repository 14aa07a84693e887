#include "syncind/ranktest.hpp"
#include "syncind/rng.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace syncind;
using namespace syncind::ranktest;
using depmeasure::DependenceEstimator;
using depmeasure::Kernel;
using depmeasure::PairedSample;

namespace {

PairedSample gaussian_pairs(std::uint64_t seed, std::size_t n, double coupling) {
    CounterRng rng(seed);
    std::vector<double> e(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = standard_normal(rng);
        v[i] = coupling * e[i] * e[i] + standard_normal(rng);
    }
    return PairedSample(e, v);
}

const DependenceEstimator kHsic = DependenceEstimator::hsic(Kernel::gaussian_median(), Kernel::gaussian_median());

}  // namespace

TEST(Rank, SpecExamples) {
    EXPECT_EQ(rank_of_original(std::vector<double>{0.9, 0.1, 0.2, 0.3, 0.4}, TieBreaker::identity(5)), 1U);
    EXPECT_EQ(rank_of_original(std::vector<double>{0.25, 0.1, 0.3, 0.4, 0.2}, TieBreaker::identity(5)), 3U);
}

TEST(Rank, AllTiesFollowSigma) {
    const std::vector<double> v(6, 2.0);
    EXPECT_EQ(rank_of_original(v, TieBreaker::identity(6)), 6U);
    TieBreaker tie{{5, 0, 1, 2, 3, 4}, 0};  // sigma(0) largest
    EXPECT_EQ(rank_of_original(v, tie), 1U);
    TieBreaker mid{{2, 0, 1, 3, 4, 5}, 0};
    EXPECT_EQ(rank_of_original(v, mid), 4U);
}

TEST(Rank, DistinctValuesGiveEveryRankOnce) {
    // Placing each of m distinct values first yields each rank exactly once.
    const std::vector<double> vals{0.3, 1.2, -0.4, 5.0, 2.2, 0.0};
    std::vector<std::size_t> ranks;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        std::vector<double> v = vals;
        std::swap(v[0], v[k]);
        ranks.push_back(rank_of_original(v, TieBreaker::identity(6)));
    }
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t k = 0; k < ranks.size(); ++k) EXPECT_EQ(ranks[k], k + 1);
}

TEST(Rank, InvariantToReorderingAndMonotoneTransforms) {
    CounterRng rng(41);
    for (int s = 0; s < 50; ++s) {
        std::vector<double> v(12);
        for (auto& x : v) x = std::abs(standard_normal(rng));
        const std::size_t base = rank_of_original(v, TieBreaker::identity(12));
        std::vector<double> shuffled = v;
        const auto perm = random_permutation(rng, 11);
        for (std::size_t j = 0; j < 11; ++j) shuffled[1 + j] = v[1 + perm[j]];
        EXPECT_EQ(rank_of_original(shuffled, TieBreaker::identity(12)), base);
        std::vector<double> mapped = v;
        for (auto& x : mapped) x = std::log1p(x) * 3.0 + 1.0;
        EXPECT_EQ(rank_of_original(mapped, TieBreaker::identity(12)), base);
    }
}

TEST(Permutations, DeterministicBijections) {
    const auto a = generate_permutations(9, 15, 77);
    const auto b = generate_permutations(9, 15, 77);
    EXPECT_EQ(a.perms, b.perms);
    EXPECT_NE(a.perms, generate_permutations(9, 15, 78).perms);
    // Permutation j depends only on (seed, j, n).
    EXPECT_EQ(generate_permutations(4, 15, 77).perms[3], a.perms[3]);
    for (const auto& p : a.perms) {
        auto s = p;
        std::sort(s.begin(), s.end());
        for (std::uint32_t i = 0; i < s.size(); ++i) ASSERT_EQ(s[i], i);
    }
    EXPECT_THROW((void)generate_permutations(3, 0, 1), std::invalid_argument);
}

TEST(Permutations, PositionsUniform) {
    // Chi-square on where element 0 lands, over many permutations of size 5.
    const auto set = generate_permutations(20000, 5, 99);
    std::vector<double> counts(5, 0.0);
    for (const auto& p : set.perms) counts[std::find(p.begin(), p.end(), 0U) - p.begin()] += 1.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - 4000.0) * (c - 4000.0) / 4000.0;
    EXPECT_LT(chi2, boost::math::quantile(boost::math::chi_squared(4.0), 0.999));
}

TEST(PermuteSample, SwapsSecondCoordinate) {
    const auto out = permute_sample(PairedSample({1.0, 2.0}, {10.0, 20.0}), Permutation{1, 0});
    EXPECT_EQ(out.e()[0], 1.0);
    EXPECT_EQ(out.n()[0], 20.0);
    EXPECT_EQ(out.n()[1], 10.0);
    EXPECT_THROW((void)permute_sample(PairedSample({1.0}, {1.0}), Permutation{0, 1}), std::invalid_argument);
}

TEST(RankConfig, LevelsAndValidation) {
    const auto cfg = RankConfig::from_level(0.15, 40, 1, 2);
    EXPECT_EQ(cfg.r, 6U);
    EXPECT_DOUBLE_EQ(cfg.level(), 0.15);
    EXPECT_THROW((void)RankConfig::from_level(0.1, 25, 1, 2), std::invalid_argument);
    EXPECT_THROW((void)RankConfig::from_level(0.0, 40, 1, 2), std::invalid_argument);

    RankConfig interval;
    interval.m = 40;
    interval.r = 3;
    interval.p = 38;
    interval.form = RankConfig::Form::interval;
    EXPECT_DOUBLE_EQ(interval.level(), 1.0 - 36.0 / 40.0);
    EXPECT_TRUE(interval.rejects(2));
    EXPECT_FALSE(interval.rejects(3));
    EXPECT_FALSE(interval.rejects(38));
    EXPECT_TRUE(interval.rejects(39));

    RankConfig bad;
    bad.m = 10;
    bad.r = 11;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad.r = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(IidTest, ReportContents) {
    RankConfig cfg;
    cfg.perm_seed = 5;
    cfg.tie_seed = 6;
    const auto rep = iid_independence_test(gaussian_pairs(1, 60, 0.0), kHsic, cfg);
    EXPECT_EQ(rep.measure_values.size(), 40U);
    EXPECT_GE(rep.rank, 1U);
    EXPECT_LE(rep.rank, 40U);
    EXPECT_EQ(rep.reject, rep.rank <= 6);
    EXPECT_DOUBLE_EQ(rep.level, 0.15);
    EXPECT_FALSE(rep.estimator.kernel_e.needs_resolution());
    EXPECT_EQ(rep.rank, rank_of_original(rep.measure_values, generate_tie_breaker(40, 6)));
    for (double v : rep.measure_values) EXPECT_GE(v, 0.0);
}

TEST(IidTest, DeterministicAndThreadIndependent) {
    RankConfig cfg;
    cfg.perm_seed = 11;
    const auto s = gaussian_pairs(2, 80, 0.5);
    const auto a = iid_independence_test(s, kHsic, cfg, 1);
    const auto b = iid_independence_test(s, kHsic, cfg, 4);
    EXPECT_EQ(a.measure_values, b.measure_values);
    EXPECT_EQ(a.rank, b.rank);
}

TEST(IidTest, TranslationOfDataLeavesRankUnchanged) {
    RankConfig cfg;
    cfg.perm_seed = 12;
    const auto s = gaussian_pairs(3, 50, 0.3);
    std::vector<double> e(s.e().begin(), s.e().end()), v(s.n().begin(), s.n().end());
    for (auto& x : e) x += 1000.0;
    for (auto& x : v) x -= 3.0;
    for (const auto& est : {kHsic, DependenceEstimator::distance_covariance()}) {
        EXPECT_EQ(iid_independence_test(s, est, cfg).rank, iid_independence_test(PairedSample(e, v), est, cfg).rank);
    }
}

TEST(IidTest, DetectsStrongDependence) {
    RankConfig cfg;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.perm_seed = seed;
        const auto s = gaussian_pairs(100 + seed, 200, 3.0);
        EXPECT_EQ(iid_independence_test(s, kHsic, cfg).rank, 1U);
        EXPECT_EQ(iid_independence_test(s, DependenceEstimator::distance_covariance(), cfg).rank, 1U);
    }
}

TEST(IidTest, RankUniformUnderIndependence) {
    RankConfig cfg;
    cfg.m = 8;
    cfg.r = 1;
    std::vector<double> counts(8, 0.0);
    constexpr int trials = 1600;
    for (int t = 0; t < trials; ++t) {
        cfg.perm_seed = derive_seed(43, StreamTag::permutations, t);
        cfg.tie_seed = derive_seed(43, StreamTag::tie_break, t);
        const auto s = gaussian_pairs(derive_seed(43, StreamTag::trial, t), 30, 0.0);
        counts[iid_independence_test(s, DependenceEstimator::distance_covariance(), cfg).rank - 1] += 1.0;
    }
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - 200.0) * (c - 200.0) / 200.0;
    EXPECT_LT(chi2, boost::math::quantile(boost::math::chi_squared(7.0), 0.999));
}

TEST(IidTest, ConstantDataFallsBackToTieOrder) {
    // Linear kernel on a constant coordinate: every statistic is 0, the rank
    // is decided by sigma alone.
    RankConfig cfg;
    cfg.tie_seed = 9;
    const auto rep = iid_independence_test(PairedSample({1.0, 1.0, 1.0, 1.0}, {0.0, 1.0, 2.0, 3.0}),
                                           DependenceEstimator::hsic(Kernel::linear(), Kernel::linear()), cfg);
    const auto tie = generate_tie_breaker(40, 9);
    std::size_t expected = 1;
    for (std::size_t j = 1; j < 40; ++j) expected += tie.sigma[0] < tie.sigma[j] ? 1 : 0;
    EXPECT_EQ(rep.rank, expected);
}
