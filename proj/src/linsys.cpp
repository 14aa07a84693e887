#include "syncind/linsys.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace syncind::linsys {

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument(fmt::format("Series: non-finite sample at t={}", i + 1));
        }
    }
}

double Series::at_time(long t) const {
    if (t <= 0) return 0.0;
    if (static_cast<std::size_t>(t) > values_.size()) {
        throw std::out_of_range(fmt::format("Series: t={} beyond n={}", t, values_.size()));
    }
    return values_[static_cast<std::size_t>(t - 1)];
}

BackshiftPolynomial::BackshiftPolynomial(std::initializer_list<double> coeffs)
    : BackshiftPolynomial(std::vector<double>(coeffs)) {}

BackshiftPolynomial::BackshiftPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("BackshiftPolynomial: no coefficients");
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("BackshiftPolynomial: non-finite coefficient");
    }
}

void TransferModel::validate() const {
    if (!f.is_monic()) throw std::invalid_argument("TransferModel: f must be monic at lag 0");
    if (!c.is_monic()) throw std::invalid_argument("TransferModel: c must be monic at lag 0");
    if (!d.is_monic()) throw std::invalid_argument("TransferModel: d must be monic at lag 0");
}

double spectral_radius(const BackshiftPolynomial& poly) {
    const auto coeffs = poly.coeffs();
    if (coeffs[0] == 0.0) throw std::invalid_argument("spectral_radius: zero lag-0 coefficient");

    // Trailing zeros only add reciprocal roots at the origin.
    std::size_t k = coeffs.size() - 1;
    while (k > 0 && coeffs[k] == 0.0) --k;
    if (k == 0) return 0.0;
    if (k == 1) return std::abs(coeffs[1] / coeffs[0]);

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                      static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        companion(0, static_cast<Eigen::Index>(i)) = -coeffs[i + 1] / coeffs[0];
    }
    for (std::size_t i = 1; i < k; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SpectralReport check_invertibility(const TransferModel& model) {
    SpectralReport report;
    report.radius_f = spectral_radius(model.f);
    report.radius_c = spectral_radius(model.c);
    report.radius_d = spectral_radius(model.d);
    const double limit = 1.0 - kRootMargin;
    report.stable = report.radius_f < limit && report.radius_d < limit;
    report.invertible = report.radius_c < limit;
    return report;
}

void filter_into(const BackshiftPolynomial& num, const BackshiftPolynomial& den,
                 std::span<const double> in, std::span<double> out) {
    if (!den.is_monic()) throw std::invalid_argument("apply_rational_filter: denominator not monic");
    if (in.size() != out.size()) throw std::invalid_argument("apply_rational_filter: size mismatch");

    const auto b = num.coeffs();
    const auto a = den.coeffs();
    const std::size_t n = in.size();
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        const std::size_t nb = std::min(b.size(), t + 1);
        for (std::size_t i = 0; i < nb; ++i) acc += b[i] * in[t - i];
        const std::size_t na = std::min(a.size(), t + 1);
        for (std::size_t i = 1; i < na; ++i) acc -= a[i] * out[t - i];
        out[t] = acc;
    }
}

Series apply_rational_filter(const BackshiftPolynomial& num, const BackshiftPolynomial& den,
                             const Series& x) {
    std::vector<double> out(x.size());
    filter_into(num, den, x.values(), out);
    return Series(std::move(out));
}

Series simulate(const TransferModel& model, const Series& u, const Series& e) {
    model.validate();
    if (u.size() != e.size()) {
        throw std::invalid_argument(
            fmt::format("simulate: input length {} != noise length {}", u.size(), e.size()));
    }
    const SpectralReport report = check_invertibility(model);
    if (!report.stable) {
        throw StabilityError(fmt::format("simulate: unstable model (radius f={}, d={})",
                                         report.radius_f, report.radius_d));
    }

    const std::size_t n = u.size();
    std::vector<double> plant(n), noise(n);
    filter_into(model.b, model.f, u.values(), plant);
    filter_into(model.c, model.d, e.values(), noise);
    for (std::size_t t = 0; t < n; ++t) plant[t] += noise[t];
    return Series(std::move(plant));
}

Series residuals(const TransferModel& model, const Series& u, const Series& y) {
    model.validate();
    if (u.size() != y.size()) {
        throw std::invalid_argument(
            fmt::format("residuals: input length {} != output length {}", u.size(), y.size()));
    }
    const SpectralReport report = check_invertibility(model);
    if (!report.invertible) {
        throw InvertibilityError(fmt::format(
            "A3 violated: noise filter not invertible (radius c={})", report.radius_c));
    }
    if (report.radius_f >= 1.0 - kRootMargin) {
        throw InvertibilityError(
            fmt::format("A3 violated: plant denominator unstable (radius f={})", report.radius_f));
    }

    const std::size_t n = u.size();
    std::vector<double> plant(n), out(n);
    filter_into(model.b, model.f, u.values(), plant);
    for (std::size_t t = 0; t < n; ++t) plant[t] = y[t] - plant[t];
    filter_into(model.d, model.c, plant, out);
    return Series(std::move(out));
}

// --- ModelStructure -------------------------------------------------------

namespace {

void collect_indices(const std::vector<Coefficient>& slots, std::vector<bool>& seen) {
    for (const auto& slot : slots) {
        if (const auto* ref = std::get_if<ParamRef>(&slot)) {
            if (ref->index >= seen.size()) seen.resize(ref->index + 1, false);
            seen[ref->index] = true;
        }
    }
}

bool has_params(const std::vector<Coefficient>& slots) {
    return std::any_of(slots.begin(), slots.end(),
                       [](const Coefficient& s) { return std::holds_alternative<ParamRef>(s); });
}

BackshiftPolynomial realize(const std::vector<Coefficient>& slots, const ParamVector& theta) {
    std::vector<double> coeffs;
    coeffs.reserve(slots.size());
    for (const auto& slot : slots) {
        if (const auto* ref = std::get_if<ParamRef>(&slot)) {
            coeffs.push_back(ref->sign * theta[ref->index]);
        } else {
            coeffs.push_back(std::get<double>(slot));
        }
    }
    return BackshiftPolynomial(std::move(coeffs));
}

void require_fixed_one(const std::vector<Coefficient>& slots, const char* name) {
    if (slots.empty()) throw std::invalid_argument(fmt::format("ModelStructure: empty {}", name));
    const auto* lead = std::get_if<double>(&slots.front());
    if (lead == nullptr || *lead != 1.0) {
        throw std::invalid_argument(
            fmt::format("ModelStructure: {} must have fixed lag-0 coefficient 1", name));
    }
}

}  // namespace

ModelStructure::ModelStructure(std::vector<Coefficient> b, std::vector<Coefficient> f,
                               std::vector<Coefficient> c, std::vector<Coefficient> d)
    : b_(std::move(b)), f_(std::move(f)), c_(std::move(c)), d_(std::move(d)) {
    if (b_.empty()) throw std::invalid_argument("ModelStructure: empty b");
    require_fixed_one(f_, "f");
    require_fixed_one(c_, "c");
    require_fixed_one(d_, "d");

    std::vector<bool> seen;
    for (const auto* slots : {&b_, &f_, &c_, &d_}) collect_indices(*slots, seen);
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw std::invalid_argument(
                fmt::format("ModelStructure: parameter index {} is never referenced", i));
        }
    }
    free_count_ = seen.size();
}

ModelStructure ModelStructure::ar1() { return arx(1, 0); }

ModelStructure ModelStructure::arx(std::size_t na, std::size_t nb) { return armax(na, nb, 0); }

ModelStructure ModelStructure::armax(std::size_t na, std::size_t nb, std::size_t nc) {
    std::vector<Coefficient> a{1.0};
    for (std::size_t i = 0; i < na; ++i) a.emplace_back(ParamRef{i, -1.0});
    std::vector<Coefficient> b{0.0};
    for (std::size_t i = 0; i < nb; ++i) b.emplace_back(ParamRef{na + i, 1.0});
    std::vector<Coefficient> c{1.0};
    for (std::size_t i = 0; i < nc; ++i) c.emplace_back(ParamRef{na + nb + i, 1.0});
    return ModelStructure(std::move(b), a, std::move(c), a);
}

TransferModel ModelStructure::model(const ParamVector& theta) const {
    if (theta.size() != free_count_) {
        throw std::invalid_argument(fmt::format(
            "ModelStructure: parameter length {} != free coefficient count {}", theta.size(),
            free_count_));
    }
    TransferModel m{realize(b_, theta), realize(f_, theta), realize(c_, theta), realize(d_, theta)};
    m.validate();
    return m;
}

bool ModelStructure::is_linear_regression() const {
    if (has_params(c_)) return false;
    for (std::size_t i = 1; i < c_.size(); ++i) {
        if (std::get<double>(c_[i]) != 0.0) return false;
    }
    return f_ == d_ || (!has_params(b_) && !has_params(f_));
}

std::vector<double> ModelStructure::regressors(const Series& u, const Series& y) const {
    if (!is_linear_regression()) {
        throw std::invalid_argument("regressors: structure is not a linear regression");
    }
    if (u.size() != y.size()) throw std::invalid_argument("regressors: length mismatch");

    const std::size_t n = y.size();
    const std::size_t k = free_count_;

    // residual_t = sum_i d_i w_{t-i} - sum_i b_i u_{t-i}, where w = y in ARX
    // form and w = y - (B/F)u when the plant is fixed.
    std::vector<double> w = y.vector();
    if (f_ != d_) {
        const TransferModel fixed = model(ParamVector{std::vector<double>(k, 0.0)});
        std::vector<double> plant(n);
        filter_into(fixed.b, fixed.f, u.values(), plant);
        for (std::size_t t = 0; t < n; ++t) w[t] -= plant[t];
    }

    std::vector<double> phi(n * k, 0.0);
    auto accumulate = [&](const std::vector<Coefficient>& slots, std::span<const double> x,
                          double direction) {
        for (std::size_t lag = 0; lag < slots.size(); ++lag) {
            const auto* ref = std::get_if<ParamRef>(&slots[lag]);
            if (ref == nullptr) continue;
            for (std::size_t t = lag; t < n; ++t) {
                phi[t * k + ref->index] += direction * ref->sign * x[t - lag];
            }
        }
    };
    accumulate(d_, w, -1.0);
    accumulate(b_, u.values(), 1.0);
    return phi;
}

}  // namespace syncind::linsys
