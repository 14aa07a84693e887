#pragma once

#include "syncind/depmeasure.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace syncind::ranktest {

using Permutation = std::vector<std::uint32_t>;  ///< 0-based bijection on {0..n-1}

/// m-1 uniformly random permutations of {0..n-1}. Permutation j depends only
/// on (seed, j, n).
struct PermutationSet {
    std::vector<Permutation> perms;
    std::uint64_t seed = 0;
};

/// Random order sigma on the m dataset indices, used to break ties between
/// equal statistic values.
struct TieBreaker {
    Permutation sigma;
    std::uint64_t seed = 0;

    static TieBreaker identity(std::size_t m);
};

[[nodiscard]] PermutationSet generate_permutations(std::size_t count, std::size_t n,
                                                   std::uint64_t seed);

[[nodiscard]] TieBreaker generate_tie_breaker(std::size_t m, std::uint64_t seed);

/// {(e_i, n_{pi(i)})}.
[[nodiscard]] depmeasure::PairedSample permute_sample(const depmeasure::PairedSample& d0,
                                                      std::span<const std::uint32_t> pi);

/// 1 + #{j >= 1 : values[0] precedes values[j]}, where a precedes b when
/// a < b, or a == b and sigma(index of a) < sigma(index of b).
[[nodiscard]] std::size_t rank_of_original(std::span<const double> values, const TieBreaker& tie);

/// Hyperparameters of the rank test. The default one-sided form rejects iff
/// rank <= r at level r/m. The interval form accepts iff r <= rank <= p and
/// has level 1 - (p - r + 1)/m.
struct RankConfig {
    enum class Form { one_sided, interval };

    std::size_t m = 40;
    std::size_t r = 6;
    std::optional<std::size_t> p;  ///< defaults to m
    Form form = Form::one_sided;
    std::uint64_t perm_seed = 0;
    std::uint64_t tie_seed = 1;

    /// One-sided config at level alpha; alpha * m must be an integer (within
    /// 1e-9), otherwise std::invalid_argument.
    static RankConfig from_level(double alpha, std::size_t m, std::uint64_t perm_seed,
                                 std::uint64_t tie_seed);

    [[nodiscard]] std::size_t upper() const noexcept { return p.value_or(m); }
    [[nodiscard]] double level() const noexcept;
    [[nodiscard]] bool rejects(std::size_t rank) const noexcept;
    /// Throws std::invalid_argument unless 1 <= r <= p <= m.
    void validate() const;
};

struct TestReport {
    std::size_t rank = 0;
    std::size_t m = 0;
    std::size_t r = 0;
    std::size_t p = 0;
    RankConfig::Form form = RankConfig::Form::one_sided;
    double level = 0.0;
    bool reject = false;
    std::vector<double> measure_values;  ///< |statistic|, index 0 = original
    std::uint64_t perm_seed = 0;
    std::uint64_t tie_seed = 0;
    depmeasure::DependenceEstimator estimator;  ///< with resolved bandwidths
    double wall_time_seconds = 0.0;
};

/// Permutation test of independence for an i.i.d. paired sample. Median
/// bandwidths are resolved once on the unpermuted coordinates. `threads`
/// affects speed only.
[[nodiscard]] TestReport iid_independence_test(const depmeasure::PairedSample& d0,
                                               const depmeasure::DependenceEstimator& estimator,
                                               const RankConfig& cfg, unsigned threads = 1);

/// Resolve any median-heuristic kernels of `estimator` on the given columns.
[[nodiscard]] depmeasure::DependenceEstimator resolve_estimator(
    const depmeasure::DependenceEstimator& estimator, std::span<const double> e,
    std::span<const double> n);

/// |statistic| of the original pairing followed by each permuted pairing.
[[nodiscard]] std::vector<double> permutation_values(const depmeasure::PreparedCoordinate& e,
                                                     const depmeasure::PreparedCoordinate& n,
                                                     const PermutationSet& perms);

}  // namespace syncind::ranktest
