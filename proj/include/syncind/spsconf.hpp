#pragma once

#include "syncind/linsys.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace syncind::spsconf {

/// Sign-Perturbed Sums with M sums; the region has exact level beta = q/M.
struct SpsConfig {
    std::size_t M = 80;
    std::size_t q = 1;
    std::uint64_t seed = 0;
    std::uint64_t tie_seed = 1;

    [[nodiscard]] double beta() const noexcept {
        return static_cast<double>(q) / static_cast<double>(M);
    }
    /// Throws std::invalid_argument unless 1 <= q < M.
    void validate() const;
};

/// Rademacher signs for sums 1..M-1 plus the tie order over all M sums.
/// Fixed by the config seeds, shared by every grid point of a region.
struct SignTensor {
    std::size_t n = 0;
    std::vector<std::vector<double>> signs;  ///< (M-1) rows of n signs
    std::vector<std::uint32_t> tie_order;   ///< random order on {0..M-1}

    static SignTensor generate(const SpsConfig& cfg, std::size_t n);
};

struct SpsDecision {
    bool accepted = false;
    bool invalid_candidate = false;  ///< model unstable or not invertible here
    std::size_t rank = 0;            ///< rank of the reference sum, 1 = smallest
    std::string reason;
};

/// Evaluate one candidate against pre-drawn signs.
[[nodiscard]] SpsDecision sps_evaluate(const linsys::ParamVector& theta,
                                       const linsys::ModelStructure& structure,
                                       const linsys::Series& u, const linsys::Series& y,
                                       const SpsConfig& cfg, const SignTensor& signs);

/// Evaluate one candidate, drawing the signs from `cfg`. Equivalent to the
/// corresponding grid point of sps_region with the same config.
[[nodiscard]] SpsDecision sps_accepts(const linsys::ParamVector& theta,
                                      const linsys::ModelStructure& structure,
                                      const linsys::Series& u, const linsys::Series& y,
                                      const SpsConfig& cfg);

/// Rectangular parameter grid with the SPS acceptance mask. Points are laid
/// out row-major: the last axis varies fastest.
struct ConfidenceGrid {
    std::vector<std::vector<double>> axes;
    std::vector<std::uint8_t> accepted;
    std::vector<std::uint8_t> invalid;  ///< candidates excluded by the A3/stability check
    std::vector<std::size_t> ranks;     ///< 0 where invalid
    std::size_t q = 1;
    std::size_t M = 1;
    std::uint64_t seed = 0;
    std::uint64_t tie_seed = 0;
    std::string data_hash;

    [[nodiscard]] double beta() const noexcept {
        return static_cast<double>(q) / static_cast<double>(M);
    }
    [[nodiscard]] std::size_t size() const noexcept { return accepted.size(); }
    [[nodiscard]] linsys::ParamVector point(std::size_t index) const;
    [[nodiscard]] std::vector<std::size_t> accepted_indices() const;
    [[nodiscard]] std::size_t invalid_count() const;

    /// Grid with every point accepted; for feeding known sets to the robust test.
    static ConfidenceGrid all_accepted(std::vector<std::vector<double>> axes, std::size_t q,
                                       std::size_t M);
};

/// Total number of points of a rectangular grid; throws on an empty grid.
[[nodiscard]] std::size_t grid_size(const std::vector<std::vector<double>>& axes);

/// `points` evenly spaced values from lo to hi inclusive.
[[nodiscard]] std::vector<double> linspace(double lo, double hi, std::size_t points);

/// FNV-1a over the raw bytes of the series, as 16 hex digits.
[[nodiscard]] std::string data_hash(const linsys::Series& u, const linsys::Series& y);

[[nodiscard]] ConfidenceGrid sps_region(const linsys::ModelStructure& structure,
                                        const linsys::Series& u, const linsys::Series& y,
                                        const std::vector<std::vector<double>>& axes,
                                        const SpsConfig& cfg, unsigned threads = 1);

}  // namespace syncind::spsconf
