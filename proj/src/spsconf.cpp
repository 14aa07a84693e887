#include "syncind/spsconf.hpp"

#include "syncind/parallel.hpp"
#include "syncind/rng.hpp"

#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <stdexcept>

namespace syncind::spsconf {

using linsys::ModelStructure;
using linsys::ParamVector;
using linsys::Series;

void SpsConfig::validate() const {
    if (M < 2) throw std::invalid_argument("SpsConfig: M must be at least 2");
    if (q < 1 || q >= M) {
        throw std::invalid_argument(
            fmt::format("SpsConfig: need 1 <= q < M (q={}, M={}); q = M rejects everything", q, M));
    }
}

SignTensor SignTensor::generate(const SpsConfig& cfg, std::size_t n) {
    cfg.validate();
    SignTensor tensor;
    tensor.n = n;
    tensor.signs.resize(cfg.M - 1);
    for (std::size_t i = 0; i + 1 < cfg.M; ++i) {
        CounterRng rng(derive_seed(cfg.seed, StreamTag::sps_signs, i + 1));
        auto& row = tensor.signs[i];
        row.resize(n);
        for (auto& s : row) s = rademacher(rng);
    }
    CounterRng tie(derive_seed(cfg.tie_seed, StreamTag::sps_tie));
    tensor.tie_order = random_permutation(tie, cfg.M);
    return tensor;
}

namespace {

/// (1/n) sum_t phi_t eps_t, squared and normalized. Scalar sums are used
/// as-is; vector sums are scaled per coordinate by the RMS of their own
/// regressor column.
double perturbed_norm(const std::vector<double>& phi, std::span<const double> eps, std::size_t k) {
    const std::size_t n = eps.size();
    std::vector<double> sum(k, 0.0), sq(k, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t c = 0; c < k; ++c) {
            const double x = phi[t * k + c];
            sum[c] += x * eps[t];
            sq[c] += x * x;
        }
    }
    const double nn = static_cast<double>(n);
    double norm = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double s = sum[c] / nn;
        if (k > 1) {
            const double rms = std::sqrt(sq[c] / nn);
            if (rms > 0.0) s /= rms;
        }
        norm += s * s;
    }
    return norm;
}

}  // namespace

SpsDecision sps_evaluate(const ParamVector& theta, const ModelStructure& structure, const Series& u,
                         const Series& y, const SpsConfig& cfg, const SignTensor& signs) {
    if (!structure.is_linear_regression()) {
        throw std::invalid_argument("sps: structure must be a linear regression (AR/ARX)");
    }
    if (y.empty()) throw std::invalid_argument("sps: empty data");
    if (u.size() != y.size()) throw std::invalid_argument("sps: input/output length mismatch");
    if (signs.n != y.size() || signs.signs.size() + 1 != cfg.M) {
        throw std::invalid_argument("sps: sign tensor does not match data or config");
    }

    SpsDecision decision;
    const linsys::TransferModel model = structure.model(theta);
    const linsys::SpectralReport spectral = linsys::check_invertibility(model);
    if (!spectral.ok()) {
        decision.invalid_candidate = true;
        decision.reason = fmt::format("candidate excluded: radius f={}, c={}, d={}",
                                      spectral.radius_f, spectral.radius_c, spectral.radius_d);
        return decision;
    }

    const std::size_t n = y.size();
    const std::size_t k = structure.free_count();
    const Series eps = linsys::residuals(model, u, y);

    std::vector<double> norms(cfg.M);
    norms[0] = perturbed_norm(structure.regressors(u, y), eps.values(), k);

    std::vector<double> plant(n);
    linsys::filter_into(model.b, model.f, u.values(), plant);
    std::vector<double> flipped(n), noise(n), rebuilt(n);
    for (std::size_t i = 1; i < cfg.M; ++i) {
        const auto& alpha = signs.signs[i - 1];
        for (std::size_t t = 0; t < n; ++t) flipped[t] = alpha[t] * eps[t];
        linsys::filter_into(model.c, model.d, flipped, noise);
        for (std::size_t t = 0; t < n; ++t) rebuilt[t] = plant[t] + noise[t];
        norms[i] = perturbed_norm(structure.regressors(u, Series(rebuilt)), flipped, k);
    }

    const auto& tau = signs.tie_order;
    std::size_t rank = 1;
    for (std::size_t i = 1; i < cfg.M; ++i) {
        if (norms[i] < norms[0] || (norms[i] == norms[0] && tau[i] < tau[0])) ++rank;
    }
    decision.rank = rank;
    decision.accepted = rank <= cfg.M - cfg.q;
    return decision;
}

SpsDecision sps_accepts(const ParamVector& theta, const ModelStructure& structure, const Series& u,
                        const Series& y, const SpsConfig& cfg) {
    cfg.validate();
    return sps_evaluate(theta, structure, u, y, cfg, SignTensor::generate(cfg, y.size()));
}

ParamVector ConfidenceGrid::point(std::size_t index) const {
    ParamVector theta;
    theta.entries.resize(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        const std::size_t len = axes[a].size();
        theta.entries[a] = axes[a][index % len];
        index /= len;
    }
    return theta;
}

std::vector<std::size_t> ConfidenceGrid::accepted_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        if (accepted[i] != 0 && (invalid.empty() || invalid[i] == 0)) out.push_back(i);
    }
    return out;
}

std::size_t ConfidenceGrid::invalid_count() const {
    std::size_t count = 0;
    for (auto flag : invalid) count += flag != 0 ? 1 : 0;
    return count;
}

ConfidenceGrid ConfidenceGrid::all_accepted(std::vector<std::vector<double>> axes, std::size_t q,
                                            std::size_t M) {
    ConfidenceGrid grid;
    const std::size_t total = grid_size(axes);
    grid.axes = std::move(axes);
    grid.accepted.assign(total, 1);
    grid.invalid.assign(total, 0);
    grid.ranks.assign(total, 0);
    grid.q = q;
    grid.M = M;
    return grid;
}

std::size_t grid_size(const std::vector<std::vector<double>>& axes) {
    if (axes.empty()) throw std::invalid_argument("grid: no axes");
    std::size_t total = 1;
    for (const auto& axis : axes) {
        if (axis.empty()) throw std::invalid_argument("grid: empty axis");
        total *= axis.size();
    }
    return total;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {lo};
    std::vector<double> out(points);
    const auto last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const auto fi = static_cast<double>(i);
        // Weighted form hits the endpoints and simple fractions exactly.
        out[i] = (lo * (last - fi) + hi * fi) / last;
    }
    return out;
}

std::string data_hash(const Series& u, const Series& y) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const Series& s) {
        for (double v : s.values()) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 0x100000001b3ULL;
            }
        }
    };
    feed(u);
    feed(y);
    return fmt::format("{:016x}", h);
}

ConfidenceGrid sps_region(const ModelStructure& structure, const Series& u, const Series& y,
                          const std::vector<std::vector<double>>& axes, const SpsConfig& cfg,
                          unsigned threads) {
    cfg.validate();
    const std::size_t total = grid_size(axes);
    if (axes.size() != structure.free_count()) {
        throw std::invalid_argument(fmt::format("sps_region: {} axes for {} free parameters",
                                                axes.size(), structure.free_count()));
    }
    for (const auto& axis : axes) {
        for (std::size_t i = 1; i < axis.size(); ++i) {
            if (!(axis[i - 1] < axis[i])) throw std::invalid_argument("sps_region: axis not sorted");
        }
    }

    ConfidenceGrid grid;
    grid.axes = axes;
    grid.accepted.assign(total, 0);
    grid.invalid.assign(total, 0);
    grid.ranks.assign(total, 0);
    grid.q = cfg.q;
    grid.M = cfg.M;
    grid.seed = cfg.seed;
    grid.tie_seed = cfg.tie_seed;
    grid.data_hash = data_hash(u, y);

    const SignTensor signs = SignTensor::generate(cfg, y.size());
    parallel_for(total, threads, [&](std::size_t i) {
        const SpsDecision d = sps_evaluate(grid.point(i), structure, u, y, cfg, signs);
        grid.accepted[i] = d.accepted ? 1 : 0;
        grid.invalid[i] = d.invalid_candidate ? 1 : 0;
        grid.ranks[i] = d.rank;
    });
    return grid;
}

}  // namespace syncind::spsconf
