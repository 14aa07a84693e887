#include "syncind/linsys.hpp"
#include "syncind/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace syncind;
using namespace syncind::linsys;

namespace {

std::vector<double> normals(CounterRng& rng, std::size_t n) {
    std::vector<double> x(n);
    for (auto& v : x) v = standard_normal(rng);
    return x;
}

TransferModel random_model(CounterRng& rng, bool box_jenkins) {
    const auto f = oracles::random_stable_polynomial(rng, 1 + uniform_index(rng, 3), 0.9);
    const auto c = oracles::random_stable_polynomial(rng, 1 + uniform_index(rng, 3), 0.9);
    const auto d = box_jenkins ? oracles::random_stable_polynomial(rng, 1 + uniform_index(rng, 2), 0.9) : f;
    std::vector<double> b(1 + uniform_index(rng, 4));
    for (auto& x : b) x = standard_normal(rng);
    return TransferModel{BackshiftPolynomial(b), BackshiftPolynomial(f), BackshiftPolynomial(c),
                         BackshiftPolynomial(d)};
}

std::vector<double> coeffs(const BackshiftPolynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

}  // namespace

TEST(Series, RejectsNonFinite) {
    EXPECT_THROW(Series({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    EXPECT_THROW(Series({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST(Series, ZeroPrehistory) {
    const Series s({1.0, 2.0});
    EXPECT_EQ(s.at_time(0), 0.0);
    EXPECT_EQ(s.at_time(-3), 0.0);
    EXPECT_EQ(s.at_time(1), 1.0);
    EXPECT_EQ(s.at_time(2), 2.0);
    EXPECT_THROW((void)s.at_time(3), std::out_of_range);
}

TEST(Filter, GeometricImpulseResponse) {
    const auto y = apply_rational_filter({1.0}, {1.0, -0.5}, Series({1.0, 0.0, 0.0}));
    EXPECT_EQ(y.vector(), (std::vector<double>{1.0, 0.5, 0.25}));
}

TEST(Filter, FirInverse) {
    const auto y = apply_rational_filter({1.0, -0.5}, {1.0}, Series({1.0, 0.5, 0.25}));
    EXPECT_EQ(y.vector(), (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(Filter, RejectsNonMonicDenominator) {
    EXPECT_THROW((void)apply_rational_filter({1.0}, {2.0, 1.0}, Series({1.0})), std::invalid_argument);
}

TEST(Filter, InverseFiltersComposeToIdentity) {
    CounterRng rng(21);
    for (int s = 0; s < 20; ++s) {
        const BackshiftPolynomial a(oracles::random_stable_polynomial(rng, 3, 0.9));
        const BackshiftPolynomial c(oracles::random_stable_polynomial(rng, 2, 0.9));
        const Series x(normals(rng, 300));
        const auto back = apply_rational_filter(a, c, apply_rational_filter(c, a, x));
        for (std::size_t t = 0; t < x.size(); ++t) ASSERT_NEAR(back[t], x[t], 1e-10);
    }
}

TEST(SpectralRadius, KnownRoots) {
    EXPECT_DOUBLE_EQ(spectral_radius({1.0, -0.5}), 0.5);
    EXPECT_NEAR(spectral_radius({1.0, 0.0, 0.25}), 0.5, 1e-12);       // roots +-0.5i
    EXPECT_NEAR(spectral_radius({1.0, -1.5, 0.56}), 0.8, 1e-12);      // 0.7 and 0.8
    EXPECT_NEAR(spectral_radius({1.0, -0.5, 0.0, 0.0}), 0.5, 1e-12);  // trailing zeros
    EXPECT_EQ(spectral_radius({1.0}), 0.0);
    EXPECT_GT(spectral_radius({1.0, -1.2}), 1.0);
}

TEST(Simulate, ArmaxHandRecursion) {
    const TransferModel m{{0.0, 1.0}, {1.0}, {1.0, 0.3}, {1.0}};
    const auto y = simulate(m, Series({1.0, 1.0}), Series({1.0, 0.0}));
    EXPECT_DOUBLE_EQ(y[0], 1.0);
    EXPECT_DOUBLE_EQ(y[1], 1.3);
}

TEST(Simulate, MatchesDifferenceEquationOracle) {
    CounterRng rng(22);
    for (int s = 0; s < 50; ++s) {
        const TransferModel m = random_model(rng, s % 2 == 1);
        const auto u = normals(rng, 200);
        const auto e = normals(rng, 200);
        const auto got = simulate(m, Series(u), Series(e));
        const auto want = oracles::simulate_difference_equation(coeffs(m.b), coeffs(m.f), coeffs(m.c),
                                                                coeffs(m.d), u, e);
        for (std::size_t t = 0; t < u.size(); ++t) ASSERT_NEAR(got[t], want[t], 1e-10 * (1.0 + std::abs(want[t])));
    }
}

TEST(Simulate, LinearInInputs) {
    CounterRng rng(23);
    const TransferModel m = random_model(rng, true);
    const auto u1 = normals(rng, 100), u2 = normals(rng, 100);
    const auto e1 = normals(rng, 100), e2 = normals(rng, 100);
    std::vector<double> u(100), e(100);
    for (std::size_t t = 0; t < 100; ++t) {
        u[t] = 2.0 * u1[t] - 0.5 * u2[t];
        e[t] = 2.0 * e1[t] - 0.5 * e2[t];
    }
    const auto y = simulate(m, Series(u), Series(e));
    const auto y1 = simulate(m, Series(u1), Series(e1));
    const auto y2 = simulate(m, Series(u2), Series(e2));
    for (std::size_t t = 0; t < 100; ++t) ASSERT_NEAR(y[t], 2.0 * y1[t] - 0.5 * y2[t], 1e-9);
}

TEST(Simulate, Causal) {
    CounterRng rng(24);
    const TransferModel m = random_model(rng, false);
    const auto u = normals(rng, 80);
    auto e = normals(rng, 80);
    const auto before = simulate(m, Series(u), Series(e));
    e[50] += 10.0;
    const auto after = simulate(m, Series(u), Series(e));
    for (std::size_t t = 0; t < 50; ++t) EXPECT_EQ(before[t], after[t]);
    EXPECT_NE(before[50], after[50]);
}

TEST(Simulate, RejectsUnstableAndMismatchedLengths) {
    const TransferModel unstable{{0.0}, {1.0}, {1.0}, {1.0, -1.1}};
    EXPECT_THROW((void)simulate(unstable, Series::zeros(3), Series::zeros(3)), StabilityError);
    const TransferModel ok{{0.0}, {1.0}, {1.0}, {1.0, -0.5}};
    EXPECT_THROW((void)simulate(ok, Series::zeros(3), Series::zeros(4)), std::invalid_argument);
}

TEST(Residuals, RoundTripRandomModels) {
    CounterRng rng(25);
    for (int s = 0; s < 40; ++s) {
        const TransferModel m = random_model(rng, s % 2 == 0);
        const Series u(normals(rng, 500));
        const Series e(normals(rng, 500));
        const auto back = residuals(m, u, simulate(m, u, e));
        for (std::size_t t = 0; t < e.size(); ++t) ASSERT_NEAR(back[t], e[t], 1e-9);
    }
}

TEST(Residuals, NonInvertibleNoiseModelThrows) {
    const TransferModel m{{0.0}, {1.0}, {1.0, -2.0}, {1.0}};
    EXPECT_THROW((void)residuals(m, Series::zeros(3), Series::zeros(3)), InvertibilityError);
    const TransferModel bad_plant{{0.0, 1.0}, {1.0, -1.5}, {1.0}, {1.0}};
    EXPECT_THROW((void)residuals(bad_plant, Series::zeros(3), Series::zeros(3)), InvertibilityError);
}

TEST(Residuals, Ar1ZeroCandidateReturnsOutputs) {
    const auto r = residuals(ModelStructure::ar1().model(ParamVector{{0.0}}), Series::zeros(3),
                             Series({1.0, 1.5, 1.25}));
    EXPECT_EQ(r.vector(), (std::vector<double>{1.0, 1.5, 1.25}));
}

TEST(TransferModel, RequiresMonicPolynomials) {
    EXPECT_THROW((TransferModel{{0.0}, {2.0}, {1.0}, {1.0}}.validate()), std::invalid_argument);
    EXPECT_THROW((TransferModel{{0.0}, {1.0}, {0.5}, {1.0}}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((TransferModel{{3.0, 1.0}, {1.0}, {1.0}, {1.0}}.validate()));
}

TEST(CheckInvertibility, ReportsEachPolynomial) {
    const auto rep = check_invertibility(TransferModel{{0.0}, {1.0, -0.5}, {1.0, 1.5}, {1.0, -0.2}});
    EXPECT_TRUE(rep.stable);
    EXPECT_FALSE(rep.invertible);
    EXPECT_DOUBLE_EQ(rep.radius_c, 1.5);
    EXPECT_FALSE(check_invertibility(TransferModel{{0.0}, {1.0}, {1.0}, {1.0, -1.0}}).stable);
}

TEST(ModelStructure, Ar1Preset) {
    const auto s = ModelStructure::ar1();
    EXPECT_EQ(s.free_count(), 1U);
    const auto m = s.model(ParamVector{{0.5}});
    EXPECT_EQ(m.d, (BackshiftPolynomial{1.0, -0.5}));
    EXPECT_EQ(m.f, (BackshiftPolynomial{1.0, -0.5}));
    EXPECT_EQ(m.c, (BackshiftPolynomial{1.0}));
    EXPECT_TRUE(s.is_linear_regression());
}

TEST(ModelStructure, ArmaxLayout) {
    const auto s = ModelStructure::armax(2, 1, 1);
    EXPECT_EQ(s.free_count(), 4U);
    const auto m = s.model(ParamVector{{0.5, -0.2, 3.0, 0.4}});
    EXPECT_EQ(m.f, (BackshiftPolynomial{1.0, -0.5, 0.2}));
    EXPECT_EQ(m.d, m.f);
    EXPECT_EQ(m.b, (BackshiftPolynomial{0.0, 3.0}));
    EXPECT_EQ(m.c, (BackshiftPolynomial{1.0, 0.4}));
    EXPECT_FALSE(s.is_linear_regression());
    EXPECT_TRUE(ModelStructure::arx(2, 1).is_linear_regression());
}

TEST(ModelStructure, ValidatesSlots) {
    using C = std::vector<Coefficient>;
    // parameter 1 referenced but parameter 0 missing
    EXPECT_THROW(ModelStructure(C{0.0}, C{1.0}, C{1.0}, C{1.0, ParamRef{1, -1.0}}), std::invalid_argument);
    // free lag-0 coefficient of d
    EXPECT_THROW(ModelStructure(C{0.0}, C{1.0}, C{1.0}, C{ParamRef{0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(ModelStructure(C{0.0}, C{2.0}, C{1.0}, C{1.0}), std::invalid_argument);
    const ModelStructure ok(C{0.0}, C{1.0}, C{1.0}, C{1.0, ParamRef{0, -1.0}});
    EXPECT_THROW((void)ok.model(ParamVector{{0.1, 0.2}}), std::invalid_argument);
}

TEST(ModelStructure, RegressorsLinearizeResiduals) {
    // residual(theta) = residual(0) - phi' theta for ARX and output-only structures.
    CounterRng rng(26);
    const ModelStructure arx = ModelStructure::arx(2, 2);
    const ParamVector truth{{0.4, -0.3, 1.0, 0.5}};
    const Series u(normals(rng, 150));
    const Series y = simulate(arx.model(truth), u, Series(normals(rng, 150)));
    const auto phi = arx.regressors(u, y);
    const auto r0 = residuals(arx.model(ParamVector{{0.0, 0.0, 0.0, 0.0}}), u, y);
    for (int s = 0; s < 10; ++s) {
        ParamVector theta{{uniform01(rng) - 0.5, uniform01(rng) - 0.5, standard_normal(rng), standard_normal(rng)}};
        const auto r = residuals(arx.model(theta), u, y);
        for (std::size_t t = 0; t < y.size(); ++t) {
            double lin = r0[t];
            for (std::size_t k = 0; k < 4; ++k) lin -= phi[t * 4 + k] * theta[k];
            ASSERT_NEAR(r[t], lin, 1e-10);
        }
    }
    EXPECT_THROW((void)ModelStructure::armax(1, 1, 1).regressors(u, y), std::invalid_argument);
}
