#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace syncind::depmeasure {

/// The dataset {(e_i, n_i)}_{i=1}^n consumed by every dependence measure.
/// Stored as two columns of equal length n >= 1.
class PairedSample {
public:
    PairedSample(std::vector<double> e, std::vector<double> n);

    [[nodiscard]] std::size_t size() const noexcept { return e_.size(); }
    [[nodiscard]] std::span<const double> e() const noexcept { return e_; }
    [[nodiscard]] std::span<const double> n() const noexcept { return n_; }

    friend bool operator==(const PairedSample&, const PairedSample&) = default;

private:
    std::vector<double> e_;
    std::vector<double> n_;
};

/// Gaussian kernel exp(-(x-y)^2 / (2 bandwidth^2)), or the linear kernel x*y.
/// A Gaussian kernel without a bandwidth uses the median heuristic.
struct Kernel {
    enum class Kind { gaussian, linear };

    Kind kind = Kind::gaussian;
    std::optional<double> bandwidth;

    static Kernel gaussian(double bandwidth);
    static Kernel gaussian_median() { return Kernel{Kind::gaussian, std::nullopt}; }
    static Kernel linear() { return Kernel{Kind::linear, std::nullopt}; }

    [[nodiscard]] bool needs_resolution() const noexcept {
        return kind == Kind::gaussian && !bandwidth;
    }
    /// Copy with the median-heuristic bandwidth filled in from `x`.
    [[nodiscard]] Kernel resolved(std::span<const double> x) const;
    [[nodiscard]] double operator()(double x, double y) const;
    [[nodiscard]] std::string describe() const;

    friend bool operator==(const Kernel&, const Kernel&) = default;
};

struct DependenceEstimator {
    enum class Kind { hsic, dcov };

    Kind kind = Kind::hsic;
    Kernel kernel_e = Kernel::gaussian_median();
    Kernel kernel_n = Kernel::gaussian_median();

    static DependenceEstimator hsic(Kernel kernel_e, Kernel kernel_n) {
        return {Kind::hsic, kernel_e, kernel_n};
    }
    static DependenceEstimator distance_covariance() {
        return {Kind::dcov, Kernel::linear(), Kernel::linear()};
    }

    [[nodiscard]] std::string describe() const;
    friend bool operator==(const DependenceEstimator&, const DependenceEstimator&) = default;
};

/// Median of the nonzero pairwise distances |x_i - x_j|, i < j. Throws
/// std::invalid_argument when fewer than two points are given or all points
/// coincide.
[[nodiscard]] double resolve_bandwidth(std::span<const double> x);

/// K_ij = kernel(x_i, x_j). The kernel must be resolved.
[[nodiscard]] Eigen::MatrixXd gram_matrix(const Kernel& kernel, std::span<const double> x);

/// Plug-in HSIC V-statistic (1/n^2) tr(K H L H), evaluated from Gram
/// matrices. Median-heuristic kernels are resolved on the sample itself.
[[nodiscard]] double hsic_v(const PairedSample& sample, const Kernel& kernel_e,
                            const Kernel& kernel_n);

/// Squared empirical distance covariance (1/n^2) sum_jk A_jk B_jk with doubly
/// centered distance matrices A, B.
[[nodiscard]] double dcov_sq(const PairedSample& sample);

[[nodiscard]] double estimate(const DependenceEstimator& estimator, const PairedSample& sample);

/// One coordinate of a sample, preprocessed so that the statistic of any
/// re-pairing can be evaluated in O(n^2) without kernel re-evaluation.
/// Holds the Gram matrix (HSIC) or doubly centered distance matrix (dCov),
/// its row sums and its total.
class PreparedCoordinate {
public:
    /// `kernel` is ignored for distance covariance and must be resolved for
    /// HSIC.
    PreparedCoordinate(DependenceEstimator::Kind kind, const Kernel& kernel,
                       std::span<const double> x);

    [[nodiscard]] std::size_t size() const noexcept { return row_sums_.size(); }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

    friend double paired_statistic(const PreparedCoordinate& e, const PreparedCoordinate& n,
                                   std::span<const std::uint32_t> perm);

private:
    Eigen::MatrixXd matrix_;
    std::vector<double> row_sums_;
    double total_ = 0.0;
};

/// Statistic of {(e_i, n_{perm(i)})}. An empty `perm` means the identity.
[[nodiscard]] double paired_statistic(const PreparedCoordinate& e, const PreparedCoordinate& n,
                                      std::span<const std::uint32_t> perm = {});

}  // namespace syncind::depmeasure
