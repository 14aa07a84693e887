#include "syncind/depmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace syncind::depmeasure {

PairedSample::PairedSample(std::vector<double> e, std::vector<double> n)
    : e_(std::move(e)), n_(std::move(n)) {
    if (e_.size() != n_.size()) {
        throw std::invalid_argument(
            fmt::format("PairedSample: coordinate lengths differ ({} vs {})", e_.size(), n_.size()));
    }
    if (e_.empty()) throw std::invalid_argument("PairedSample: empty sample");
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (!std::isfinite(e_[i]) || !std::isfinite(n_[i])) {
            throw std::invalid_argument(fmt::format("PairedSample: non-finite pair at index {}", i));
        }
    }
}

Kernel Kernel::gaussian(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw std::invalid_argument("Kernel: Gaussian bandwidth must be positive");
    }
    return Kernel{Kind::gaussian, bandwidth};
}

Kernel Kernel::resolved(std::span<const double> x) const {
    if (!needs_resolution()) return *this;
    return gaussian(resolve_bandwidth(x));
}

double Kernel::operator()(double x, double y) const {
    if (kind == Kind::linear) return x * y;
    if (!bandwidth) throw std::logic_error("Kernel: unresolved Gaussian bandwidth");
    const double diff = x - y;
    return std::exp(-diff * diff / (2.0 * *bandwidth * *bandwidth));
}

std::string Kernel::describe() const {
    if (kind == Kind::linear) return "linear";
    if (!bandwidth) return "gaussian(median)";
    return fmt::format("gaussian({:.17g})", *bandwidth);
}

std::string DependenceEstimator::describe() const {
    if (kind == Kind::dcov) return "dcov";
    return fmt::format("hsic[{},{}]", kernel_e.describe(), kernel_n.describe());
}

double resolve_bandwidth(std::span<const double> x) {
    if (x.size() < 2) {
        throw std::invalid_argument("resolve_bandwidth: need at least two points; set the bandwidth explicitly");
    }
    std::vector<double> dists;
    dists.reserve(x.size() * (x.size() - 1) / 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double d = std::abs(x[i] - x[j]);
            if (d > 0.0) dists.push_back(d);
        }
    }
    if (dists.empty()) {
        throw std::invalid_argument(
            "resolve_bandwidth: all points identical; set the bandwidth explicitly");
    }
    const std::size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
    const double upper = dists[mid];
    if (dists.size() % 2 == 1) return upper;
    const double lower =
        *std::max_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

Eigen::MatrixXd gram_matrix(const Kernel& kernel, std::span<const double> x) {
    if (kernel.needs_resolution()) throw std::logic_error("gram_matrix: unresolved kernel");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            const double v = kernel(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    return gram;
}

PreparedCoordinate::PreparedCoordinate(DependenceEstimator::Kind kind, const Kernel& kernel,
                                       std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (kind == DependenceEstimator::Kind::hsic) {
        matrix_ = gram_matrix(kernel, x);
        row_sums_.resize(x.size());
        for (Eigen::Index j = 0; j < n; ++j) {
            row_sums_[static_cast<std::size_t>(j)] = matrix_.col(j).sum();
        }
        total_ = 0.0;
        for (double r : row_sums_) total_ += r;
        return;
    }

    // Doubly centered distances; row sums and total vanish by construction.
    matrix_.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            matrix_(i, j) = std::abs(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::VectorXd means = matrix_.colwise().mean().transpose();
    const double grand = means.mean();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            matrix_(i, j) = matrix_(i, j) - means(i) - means(j) + grand;
        }
    }
    row_sums_.assign(x.size(), 0.0);
    total_ = 0.0;
}

double paired_statistic(const PreparedCoordinate& e, const PreparedCoordinate& n,
                        std::span<const std::uint32_t> perm) {
    const std::size_t size = e.size();
    if (n.size() != size) throw std::invalid_argument("paired_statistic: size mismatch");
    if (!perm.empty() && perm.size() != size) {
        throw std::invalid_argument("paired_statistic: permutation size mismatch");
    }
    const double nn = static_cast<double>(size);
    const double* ke = e.matrix_.data();
    const double* ln = n.matrix_.data();

    double cross = 0.0;
    double rows = 0.0;
    if (perm.empty()) {
        for (std::size_t j = 0; j < size; ++j) {
            const double* kcol = ke + j * size;
            const double* lcol = ln + j * size;
            double acc = 0.0;
            for (std::size_t i = 0; i < size; ++i) acc += kcol[i] * lcol[i];
            cross += acc;
            rows += e.row_sums_[j] * n.row_sums_[j];
        }
    } else {
        for (std::size_t j = 0; j < size; ++j) {
            const double* kcol = ke + j * size;
            const double* lcol = ln + static_cast<std::size_t>(perm[j]) * size;
            double acc = 0.0;
            for (std::size_t i = 0; i < size; ++i) acc += kcol[i] * lcol[perm[i]];
            cross += acc;
            rows += e.row_sums_[j] * n.row_sums_[perm[j]];
        }
    }
    return cross / (nn * nn) + e.total_ * n.total_ / (nn * nn * nn * nn) -
           2.0 * rows / (nn * nn * nn);
}

double hsic_v(const PairedSample& sample, const Kernel& kernel_e, const Kernel& kernel_n) {
    const PreparedCoordinate e(DependenceEstimator::Kind::hsic, kernel_e.resolved(sample.e()),
                               sample.e());
    const PreparedCoordinate n(DependenceEstimator::Kind::hsic, kernel_n.resolved(sample.n()),
                               sample.n());
    return paired_statistic(e, n);
}

double dcov_sq(const PairedSample& sample) {
    const Kernel unused = Kernel::linear();
    const PreparedCoordinate e(DependenceEstimator::Kind::dcov, unused, sample.e());
    const PreparedCoordinate n(DependenceEstimator::Kind::dcov, unused, sample.n());
    return paired_statistic(e, n);
}

double estimate(const DependenceEstimator& estimator, const PairedSample& sample) {
    switch (estimator.kind) {
        case DependenceEstimator::Kind::hsic:
            return hsic_v(sample, estimator.kernel_e, estimator.kernel_n);
        case DependenceEstimator::Kind::dcov:
            return dcov_sq(sample);
    }
    throw std::logic_error("estimate: unknown estimator");
}

}  // namespace syncind::depmeasure
