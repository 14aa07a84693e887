#include "syncind/ranktest.hpp"

#include "syncind/parallel.hpp"
#include "syncind/rng.hpp"

#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

namespace syncind::ranktest {

using depmeasure::DependenceEstimator;
using depmeasure::PairedSample;
using depmeasure::PreparedCoordinate;

TieBreaker TieBreaker::identity(std::size_t m) {
    TieBreaker tie;
    tie.sigma.resize(m);
    std::iota(tie.sigma.begin(), tie.sigma.end(), 0U);
    return tie;
}

PermutationSet generate_permutations(std::size_t count, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_permutations: n must be positive");
    PermutationSet set;
    set.seed = seed;
    set.perms.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        CounterRng rng(derive_seed(seed, StreamTag::permutations, j + 1));
        set.perms.push_back(random_permutation(rng, n));
    }
    return set;
}

TieBreaker generate_tie_breaker(std::size_t m, std::uint64_t seed) {
    CounterRng rng(derive_seed(seed, StreamTag::tie_break));
    return TieBreaker{random_permutation(rng, m), seed};
}

PairedSample permute_sample(const PairedSample& d0, std::span<const std::uint32_t> pi) {
    if (pi.size() != d0.size()) {
        throw std::invalid_argument(fmt::format("permute_sample: permutation of size {} for n={}",
                                                pi.size(), d0.size()));
    }
    std::vector<double> e(d0.e().begin(), d0.e().end());
    std::vector<double> n(d0.size());
    for (std::size_t i = 0; i < pi.size(); ++i) n[i] = d0.n()[pi[i]];
    return PairedSample(std::move(e), std::move(n));
}

std::size_t rank_of_original(std::span<const double> values, const TieBreaker& tie) {
    if (values.empty()) throw std::invalid_argument("rank_of_original: no values");
    if (tie.sigma.size() != values.size()) {
        throw std::invalid_argument("rank_of_original: tie-breaker size differs from m");
    }
    const double v0 = values[0];
    const auto s0 = tie.sigma[0];
    std::size_t rank = 1;
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (v0 < values[j] || (v0 == values[j] && s0 < tie.sigma[j])) ++rank;
    }
    return rank;
}

RankConfig RankConfig::from_level(double alpha, std::size_t m, std::uint64_t perm_seed,
                                  std::uint64_t tie_seed) {
    const double scaled = alpha * static_cast<double>(m);
    const double rounded = std::round(scaled);
    if (!(alpha > 0.0 && alpha <= 1.0) || std::abs(scaled - rounded) > 1e-9) {
        throw std::invalid_argument(fmt::format(
            "RankConfig: level {} is not a multiple of 1/{}; choose m with alpha*m integer", alpha,
            m));
    }
    RankConfig cfg;
    cfg.m = m;
    cfg.r = static_cast<std::size_t>(rounded);
    cfg.perm_seed = perm_seed;
    cfg.tie_seed = tie_seed;
    cfg.validate();
    return cfg;
}

double RankConfig::level() const noexcept {
    const auto mm = static_cast<double>(m);
    if (form == Form::one_sided) return static_cast<double>(r) / mm;
    return 1.0 - static_cast<double>(upper() - r + 1) / mm;
}

bool RankConfig::rejects(std::size_t rank) const noexcept {
    if (form == Form::one_sided) return rank <= r;
    return rank < r || rank > upper();
}

void RankConfig::validate() const {
    if (m < 1) throw std::invalid_argument("RankConfig: m must be positive");
    if (r < 1 || r > upper() || upper() > m) {
        throw std::invalid_argument(
            fmt::format("RankConfig: need 1 <= r <= p <= m (r={}, p={}, m={})", r, upper(), m));
    }
}

DependenceEstimator resolve_estimator(const DependenceEstimator& estimator,
                                      std::span<const double> e, std::span<const double> n) {
    DependenceEstimator out = estimator;
    if (out.kind == DependenceEstimator::Kind::hsic) {
        out.kernel_e = out.kernel_e.resolved(e);
        out.kernel_n = out.kernel_n.resolved(n);
    }
    return out;
}

std::vector<double> permutation_values(const PreparedCoordinate& e, const PreparedCoordinate& n,
                                       const PermutationSet& perms) {
    std::vector<double> values(perms.perms.size() + 1);
    values[0] = std::abs(depmeasure::paired_statistic(e, n));
    for (std::size_t j = 0; j < perms.perms.size(); ++j) {
        values[j + 1] = std::abs(depmeasure::paired_statistic(e, n, perms.perms[j]));
    }
    return values;
}

TestReport iid_independence_test(const PairedSample& d0, const DependenceEstimator& estimator,
                                 const RankConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    const DependenceEstimator resolved = resolve_estimator(estimator, d0.e(), d0.n());
    const PreparedCoordinate e(resolved.kind, resolved.kernel_e, d0.e());
    const PreparedCoordinate n(resolved.kind, resolved.kernel_n, d0.n());
    const PermutationSet perms = generate_permutations(cfg.m - 1, d0.size(), cfg.perm_seed);
    const TieBreaker tie = generate_tie_breaker(cfg.m, cfg.tie_seed);

    std::vector<double> values(cfg.m);
    parallel_for(cfg.m, threads, [&](std::size_t j) {
        const std::span<const std::uint32_t> perm =
            j == 0 ? std::span<const std::uint32_t>{} : std::span(perms.perms[j - 1]);
        values[j] = std::abs(depmeasure::paired_statistic(e, n, perm));
    });

    TestReport report;
    report.rank = rank_of_original(values, tie);
    report.m = cfg.m;
    report.r = cfg.r;
    report.p = cfg.upper();
    report.form = cfg.form;
    report.level = cfg.level();
    report.reject = cfg.rejects(report.rank);
    report.measure_values = std::move(values);
    report.perm_seed = cfg.perm_seed;
    report.tie_seed = cfg.tie_seed;
    report.estimator = resolved;
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace syncind::ranktest
