#pragma once

#include "syncind/depmeasure.hpp"
#include "syncind/linsys.hpp"
#include "syncind/spsconf.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace syncind::robusttest {

/// Observed input/output record of one system together with its model class.
struct SystemData {
    linsys::ModelStructure structure;
    linsys::Series u;
    linsys::Series y;
};

struct RobustConfig {
    double alpha = 0.15;
    std::size_t m = 40;
    std::size_t r = 5;
    spsconf::SpsConfig sps_y;
    spsconf::SpsConfig sps_z;
    depmeasure::DependenceEstimator estimator;
    std::uint64_t perm_seed = 0;
    std::uint64_t tie_seed = 1;

    /// Both regions at the same beta; 1 <= r <= m; r/m <= alpha - 2 beta.
    void validate() const;
    [[nodiscard]] double beta() const noexcept { return sps_y.beta(); }
    [[nodiscard]] double certified_level() const noexcept;
};

/// (E_t(theta), N_t(gamma)), t = 1..n. Throws linsys::InvertibilityError
/// naming the offending side.
[[nodiscard]] depmeasure::PairedSample residual_pair(const linsys::ParamVector& theta,
                                                     const linsys::ParamVector& gamma,
                                                     const SystemData& y_side,
                                                     const SystemData& z_side);

/// Ranks psi(theta, gamma) over the product of the accepted grid points.
/// Index (i, j) of `ranks` is theta_points[i] x gamma_points[j], row-major.
struct RankField {
    std::vector<std::size_t> theta_indices;  ///< grid indices in the Y region
    std::vector<std::size_t> gamma_indices;  ///< grid indices in the Z region
    std::vector<linsys::ParamVector> theta_points;
    std::vector<linsys::ParamVector> gamma_points;
    std::vector<std::size_t> ranks;
    std::vector<double> reference;  ///< |statistic| of the unpermuted pairing
    std::vector<std::size_t> excluded_theta;  ///< accepted but unstable / non-invertible
    std::vector<std::size_t> excluded_gamma;
    depmeasure::DependenceEstimator estimator;  ///< bandwidths frozen for the whole field
    std::size_t m = 0;
    std::uint64_t perm_seed = 0;
    std::uint64_t tie_seed = 0;
    bool vacuous = false;

    [[nodiscard]] std::size_t size() const noexcept { return ranks.size(); }
    [[nodiscard]] std::size_t rank_at(std::size_t i, std::size_t j) const {
        return ranks[i * gamma_points.size() + j];
    }
};

/// Permutations and the tie order are drawn once and reused at every grid
/// point. Median bandwidths are resolved from the residuals at the accepted
/// point nearest each region's center of mass.
[[nodiscard]] RankField rank_field(const SystemData& y_side, const SystemData& z_side,
                                   const RobustConfig& cfg, const spsconf::ConfidenceGrid& region_y,
                                   const spsconf::ConfidenceGrid& region_z, unsigned threads = 1);

struct RobustDecision {
    bool reject = false;
    bool vacuous = false;  ///< empty region; H0 accepted with a warning
    std::size_t max_rank = 0;
    std::size_t argmax = 0;  ///< flat index into the field (first maximum)
    std::size_t r = 0;
    double certified_level = 0.0;
    std::string warning;
};

/// Reject iff the maximal rank over the field is at most r.
[[nodiscard]] RobustDecision robust_decision(const RankField& field, std::size_t r,
                                             double certified_level);

struct RobustReport {
    spsconf::ConfidenceGrid region_y;
    spsconf::ConfidenceGrid region_z;
    RankField field;
    RobustDecision decision;
    double wall_time_seconds = 0.0;
};

/// SPS regions for both systems, then the rank field and the max-rank decision.
[[nodiscard]] RobustReport robust_independence_test(
    const SystemData& y_side, const SystemData& z_side, const RobustConfig& cfg,
    const std::vector<std::vector<double>>& axes_y, const std::vector<std::vector<double>>& axes_z,
    unsigned threads = 1);

}  // namespace syncind::robusttest
