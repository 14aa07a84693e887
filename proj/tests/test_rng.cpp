#include "syncind/rng.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

using namespace syncind;

namespace {

double chi2_critical(double df, double p = 0.999) {
    return boost::math::quantile(boost::math::chi_squared(df), p);
}

}  // namespace

TEST(Rng, SameKeySameStream) {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, CounterPositionIsRandomAccess) {
    CounterRng a(7);
    for (int i = 0; i < 10; ++i) (void)a();
    CounterRng b(7, 10);
    EXPECT_EQ(a(), b());
}

TEST(Rng, DeriveSeedSeparatesTagsAndIndices) {
    std::set<std::uint64_t> seen;
    for (auto tag : {StreamTag::permutations, StreamTag::tie_break, StreamTag::sps_signs,
                     StreamTag::innovations, StreamTag::trial}) {
        for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(1, tag, i));
    }
    EXPECT_EQ(seen.size(), 250U);
    EXPECT_NE(derive_seed(1, StreamTag::trial, 0), derive_seed(2, StreamTag::trial, 0));
}

TEST(Rng, Uniform01Range) {
    CounterRng rng(1);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = uniform01(rng);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_LT(lo, 1e-3);
    EXPECT_GT(hi, 1.0 - 1e-3);
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, UniformIndexIsUniform) {
    CounterRng rng(3);
    constexpr std::uint64_t bound = 7;
    constexpr int n = 70000;
    std::vector<double> counts(bound, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto k = uniform_index(rng, bound);
        ASSERT_LT(k, bound);
        counts[k] += 1.0;
    }
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_LT(chi2, chi2_critical(6));
}

TEST(Rng, NormalMoments) {
    CounterRng rng(5);
    constexpr int n = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = standard_normal(rng);
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(Rng, LaplaceAndStudentVariance) {
    CounterRng rng(9);
    constexpr int n = 200000;
    double lap = 0.0, abs_t = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = standard_laplace(rng);
        lap += x * x;
        abs_t += std::abs(student_t(rng, 3)) < 3.182446 ? 1.0 : 0.0;  // 97.5% quantile of t(3)
    }
    EXPECT_NEAR(lap / n, 2.0, 4.0 * std::sqrt(20.0 / n));
    EXPECT_NEAR(abs_t / n, 0.95, 4.0 * std::sqrt(0.95 * 0.05 / n));
}

TEST(Rng, RademacherBalanced) {
    CounterRng rng(11);
    constexpr int n = 100000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = rademacher(rng);
        ASSERT_TRUE(r == 1.0 || r == -1.0);
        s += r;
    }
    EXPECT_LT(std::abs(s), 4.0 * std::sqrt(n));
}

TEST(Rng, PermutationIsBijectionAndUniform) {
    CounterRng rng(13);
    std::map<std::vector<std::uint32_t>, double> counts;
    constexpr int n = 60000;
    for (int i = 0; i < n; ++i) {
        auto p = random_permutation(rng, 4);
        auto sorted = p;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(sorted, (std::vector<std::uint32_t>{0, 1, 2, 3}));
        counts[p] += 1.0;
    }
    ASSERT_EQ(counts.size(), 24U);
    double chi2 = 0.0;
    for (const auto& [p, c] : counts) chi2 += (c - n / 24.0) * (c - n / 24.0) / (n / 24.0);
    EXPECT_LT(chi2, chi2_critical(23));
}
