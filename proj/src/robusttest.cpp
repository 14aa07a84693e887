#include "syncind/robusttest.hpp"

#include "syncind/parallel.hpp"
#include "syncind/ranktest.hpp"

#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <optional>
#include <stdexcept>

namespace syncind::robusttest {

using depmeasure::DependenceEstimator;
using depmeasure::PairedSample;
using depmeasure::PreparedCoordinate;
using linsys::ParamVector;
using linsys::Series;
using spsconf::ConfidenceGrid;

void RobustConfig::validate() const {
    sps_y.validate();
    sps_z.validate();
    if (sps_y.q * sps_z.M != sps_z.q * sps_y.M) {
        throw std::invalid_argument("RobustConfig: both confidence regions must share one beta");
    }
    if (m < 1 || r < 1 || r > m) {
        throw std::invalid_argument(fmt::format("RobustConfig: need 1 <= r <= m (r={}, m={})", r, m));
    }
    const double budget = alpha - 2.0 * beta();
    if (static_cast<double>(r) / static_cast<double>(m) > budget + 1e-12) {
        throw std::invalid_argument(fmt::format(
            "RobustConfig: r/m = {}/{} exceeds alpha - 2 beta = {}", r, m, budget));
    }
}

double RobustConfig::certified_level() const noexcept {
    return static_cast<double>(r) / static_cast<double>(m) + 2.0 * beta();
}

namespace {

Series side_residuals(const SystemData& side, const ParamVector& param, const char* name) {
    try {
        return linsys::residuals(side.structure.model(param), side.u, side.y);
    } catch (const linsys::InvertibilityError& err) {
        throw linsys::InvertibilityError(fmt::format("{} candidate: {}", name, err.what()));
    }
}

bool admissible(const SystemData& side, const ParamVector& param) {
    return linsys::check_invertibility(side.structure.model(param)).ok();
}

/// Accepted point closest to the accepted points' mean; ties go to the lower
/// grid index.
std::size_t center_candidate(const ConfidenceGrid& grid, const std::vector<std::size_t>& indices) {
    const std::size_t dim = grid.axes.size();
    std::vector<double> mean(dim, 0.0);
    for (std::size_t idx : indices) {
        const ParamVector p = grid.point(idx);
        for (std::size_t a = 0; a < dim; ++a) mean[a] += p[a];
    }
    for (double& v : mean) v /= static_cast<double>(indices.size());

    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const ParamVector p = grid.point(indices[k]);
        double dist = 0.0;
        for (std::size_t a = 0; a < dim; ++a) dist += (p[a] - mean[a]) * (p[a] - mean[a]);
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    return best;
}

}  // namespace

PairedSample residual_pair(const ParamVector& theta, const ParamVector& gamma,
                           const SystemData& y_side, const SystemData& z_side) {
    Series e = side_residuals(y_side, theta, "theta");
    Series n = side_residuals(z_side, gamma, "gamma");
    return PairedSample(e.vector(), n.vector());
}

RankField rank_field(const SystemData& y_side, const SystemData& z_side, const RobustConfig& cfg,
                     const ConfidenceGrid& region_y, const ConfidenceGrid& region_z,
                     unsigned threads) {
    cfg.validate();
    if (y_side.y.size() != z_side.y.size()) {
        throw std::invalid_argument("rank_field: systems have different sample sizes");
    }

    RankField field;
    field.m = cfg.m;
    field.perm_seed = cfg.perm_seed;
    field.tie_seed = cfg.tie_seed;
    field.estimator = cfg.estimator;

    for (std::size_t idx : region_y.accepted_indices()) {
        const ParamVector p = region_y.point(idx);
        if (admissible(y_side, p)) {
            field.theta_indices.push_back(idx);
            field.theta_points.push_back(p);
        } else {
            field.excluded_theta.push_back(idx);
        }
    }
    for (std::size_t idx : region_z.accepted_indices()) {
        const ParamVector p = region_z.point(idx);
        if (admissible(z_side, p)) {
            field.gamma_indices.push_back(idx);
            field.gamma_points.push_back(p);
        } else {
            field.excluded_gamma.push_back(idx);
        }
    }
    if (field.theta_points.empty() || field.gamma_points.empty()) {
        field.vacuous = true;
        return field;
    }

    const std::size_t ct = center_candidate(region_y, field.theta_indices);
    const std::size_t cg = center_candidate(region_z, field.gamma_indices);
    {
        const Series e = side_residuals(y_side, field.theta_points[ct], "theta");
        const Series n = side_residuals(z_side, field.gamma_points[cg], "gamma");
        field.estimator = ranktest::resolve_estimator(cfg.estimator, e.values(), n.values());
    }
    const DependenceEstimator& est = field.estimator;

    const std::size_t nt = field.theta_points.size();
    const std::size_t ng = field.gamma_points.size();
    std::vector<std::optional<PreparedCoordinate>> e_side(nt), n_side(ng);
    parallel_for(nt + ng, threads, [&](std::size_t k) {
        if (k < nt) {
            const Series e = side_residuals(y_side, field.theta_points[k], "theta");
            e_side[k].emplace(est.kind, est.kernel_e, e.values());
        } else {
            const Series n = side_residuals(z_side, field.gamma_points[k - nt], "gamma");
            n_side[k - nt].emplace(est.kind, est.kernel_n, n.values());
        }
    });

    const auto perms = ranktest::generate_permutations(cfg.m - 1, y_side.y.size(), cfg.perm_seed);
    const auto tie = ranktest::generate_tie_breaker(cfg.m, cfg.tie_seed);

    field.ranks.assign(nt * ng, 0);
    field.reference.assign(nt * ng, 0.0);
    parallel_for(nt * ng, threads, [&](std::size_t k) {
        const std::vector<double> values =
            ranktest::permutation_values(*e_side[k / ng], *n_side[k % ng], perms);
        field.ranks[k] = ranktest::rank_of_original(values, tie);
        field.reference[k] = values[0];
    });
    return field;
}

RobustDecision robust_decision(const RankField& field, std::size_t r, double certified_level) {
    RobustDecision decision;
    decision.r = r;
    decision.certified_level = certified_level;
    if (field.vacuous || field.ranks.empty()) {
        decision.vacuous = true;
        decision.reject = false;
        decision.warning = "confidence region is empty; H0 accepted without evidence";
        return decision;
    }
    for (std::size_t k = 0; k < field.ranks.size(); ++k) {
        if (field.ranks[k] > decision.max_rank) {
            decision.max_rank = field.ranks[k];
            decision.argmax = k;
        }
    }
    decision.reject = decision.max_rank <= r;
    return decision;
}

RobustReport robust_independence_test(const SystemData& y_side, const SystemData& z_side,
                                      const RobustConfig& cfg,
                                      const std::vector<std::vector<double>>& axes_y,
                                      const std::vector<std::vector<double>>& axes_z,
                                      unsigned threads) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    RobustReport report;
    report.region_y = spsconf::sps_region(y_side.structure, y_side.u, y_side.y, axes_y, cfg.sps_y,
                                          threads);
    report.region_z = spsconf::sps_region(z_side.structure, z_side.u, z_side.y, axes_z, cfg.sps_z,
                                          threads);
    report.field = rank_field(y_side, z_side, cfg, report.region_y, report.region_z, threads);
    report.decision = robust_decision(report.field, cfg.r, cfg.certified_level());
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace syncind::robusttest
