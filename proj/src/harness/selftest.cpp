#include "syncind/harness/selftest.hpp"

#include "syncind/depmeasure.hpp"
#include "syncind/linsys.hpp"
#include "syncind/ranktest.hpp"
#include "syncind/robusttest.hpp"

#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <string>
#include <vector>

namespace syncind::harness {

namespace {

bool close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (!(std::abs(got[i] - want[i]) <= tol)) return false;
    }
    return true;
}

}  // namespace

bool run_selftest(std::ostream& out) {
    using namespace linsys;
    using depmeasure::Kernel;
    using depmeasure::PairedSample;

    std::vector<std::pair<std::string, std::function<bool()>>> checks;
    checks.emplace_back("filter 1/(1-0.5q^-1) impulse", [] {
        const Series x({1.0, 0.0, 0.0});
        return close(apply_rational_filter(BackshiftPolynomial({1.0}), BackshiftPolynomial({1.0, -0.5}), x)
                         .vector(),
                     {1.0, 0.5, 0.25}, 0.0);
    });
    checks.emplace_back("filter (1-0.5q^-1) inverse", [] {
        const Series x({1.0, 0.5, 0.25});
        return close(apply_rational_filter(BackshiftPolynomial({1.0, -0.5}), BackshiftPolynomial({1.0}), x)
                         .vector(),
                     {1.0, 0.0, 0.0}, 0.0);
    });
    checks.emplace_back("armax hand recursion", [] {
        const TransferModel m{BackshiftPolynomial({0.0, 1.0}), BackshiftPolynomial({1.0}),
                              BackshiftPolynomial({1.0, 0.3}), BackshiftPolynomial({1.0})};
        const Series y = simulate(m, Series({1.0, 1.0}), Series({1.0, 0.0}));
        return close(y.vector(), {1.0, 1.3}, 1e-15) &&
               close(residuals(m, Series({1.0, 1.0}), y).vector(), {1.0, 0.0}, 1e-15);
    });
    checks.emplace_back("hsic linear hand value 0.0625", [] {
        return depmeasure::hsic_v(PairedSample({0.0, 1.0}, {0.0, 1.0}), Kernel::linear(), Kernel::linear()) ==
               0.0625;
    });
    checks.emplace_back("hsic constant coordinate is 0", [] {
        const PairedSample s({2.0, 2.0, 2.0}, {0.1, -3.0, 4.0});
        return std::abs(depmeasure::hsic_v(s, Kernel::gaussian(1.0), Kernel::gaussian(0.7))) <= 1e-12;
    });
    checks.emplace_back("hsic n=1 is 0", [] {
        return depmeasure::hsic_v(PairedSample({0.3}, {0.9}), Kernel::gaussian(1.0), Kernel::linear()) == 0.0;
    });
    checks.emplace_back("dcov hand value 0.25", [] {
        return depmeasure::dcov_sq(PairedSample({0.0, 1.0}, {0.0, 1.0})) == 0.25;
    });
    checks.emplace_back("dcov constant coordinate is 0", [] {
        return depmeasure::dcov_sq(PairedSample({0.0, 1.0, 5.0}, {3.0, 3.0, 3.0})) == 0.0;
    });
    checks.emplace_back("rank: original largest", [] {
        const std::vector<double> v{0.9, 0.1, 0.2, 0.3, 0.4};
        return ranktest::rank_of_original(v, ranktest::TieBreaker::identity(5)) == 1;
    });
    checks.emplace_back("rank: two strict exceedances", [] {
        const std::vector<double> v{0.25, 0.1, 0.3, 0.4, 0.2};
        return ranktest::rank_of_original(v, ranktest::TieBreaker::identity(5)) == 3;
    });
    checks.emplace_back("rank: all ties with identity order", [] {
        const std::vector<double> v(7, 1.0);
        return ranktest::rank_of_original(v, ranktest::TieBreaker::identity(7)) == 7;
    });
    checks.emplace_back("permute_sample swap", [] {
        const ranktest::Permutation swap{1, 0};
        const PairedSample s = ranktest::permute_sample(PairedSample({1.0, 2.0}, {10.0, 20.0}), swap);
        return s.e()[0] == 1.0 && s.e()[1] == 2.0 && s.n()[0] == 20.0 && s.n()[1] == 10.0;
    });
    checks.emplace_back("residual pair at zero AR(1) candidates", [] {
        const robusttest::SystemData ys{ModelStructure::ar1(), Series::zeros(3), Series({1.0, 1.5, 1.25})};
        const robusttest::SystemData zs{ModelStructure::ar1(), Series::zeros(3), Series({-1.0, 2.0, 0.5})};
        const PairedSample zero = robusttest::residual_pair(ParamVector{{0.0}}, ParamVector{{0.0}}, ys, zs);
        const PairedSample half = robusttest::residual_pair(ParamVector{{0.5}}, ParamVector{{0.0}}, ys, zs);
        return close({zero.e().begin(), zero.e().end()}, {1.0, 1.5, 1.25}, 0.0) &&
               close({zero.n().begin(), zero.n().end()}, {-1.0, 2.0, 0.5}, 0.0) &&
               close({half.e().begin(), half.e().end()}, {1.0, 1.0, 0.5}, 1e-15);
    });

    bool all = true;
    for (const auto& [name, check] : checks) {
        bool ok = false;
        try {
            ok = check();
        } catch (const std::exception& err) {
            out << fmt::format("FAIL {} (threw: {})\n", name, err.what());
            all = false;
            continue;
        }
        out << (ok ? "ok   " : "FAIL ") << name << "\n";
        all = all && ok;
    }
    out << (all ? "selftest passed\n" : "selftest FAILED\n");
    return all;
}

}  // namespace syncind::harness
