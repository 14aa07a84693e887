#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace syncind::linsys {

/// Raised when a model's noise filter cannot be inverted (or its plant
/// denominator is unstable), so residuals are undefined at that parameter.
class InvertibilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when simulating with an unstable model.
class StabilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Finite real-valued time series indexed t = 1..n. Samples before t = 1
/// are zero (systems start at rest).
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> values);
    static Series zeros(std::size_t n) { return Series(std::vector<double>(n, 0.0)); }

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

    /// 0-based access to the sample at time t = i + 1.
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// 1-based time access; t <= 0 yields the zero prehistory.
    [[nodiscard]] double at_time(long t) const;

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& vector() const noexcept { return values_; }

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::vector<double> values_;
};

/// Polynomial in the backshift operator: X_t -> sum_i coeffs[i] X_{t-i}.
class BackshiftPolynomial {
public:
    BackshiftPolynomial() : coeffs_{0.0} {}
    BackshiftPolynomial(std::initializer_list<double> coeffs);
    explicit BackshiftPolynomial(std::vector<double> coeffs);

    [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return coeffs_[i]; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] bool is_monic() const noexcept { return coeffs_.front() == 1.0; }

    friend bool operator==(const BackshiftPolynomial&, const BackshiftPolynomial&) = default;

private:
    std::vector<double> coeffs_;
};

/// y = (B/F) u + (C/D) e with F, C, D monic at lag 0.
struct TransferModel {
    BackshiftPolynomial b{0.0};
    BackshiftPolynomial f{1.0};
    BackshiftPolynomial c{1.0};
    BackshiftPolynomial d{1.0};

    /// Throws std::invalid_argument unless f, c and d are monic.
    void validate() const;
};

/// Largest modulus among the reciprocal roots of z -> sum_i c_i z^i, i.e. the
/// spectral radius of the companion matrix of z^k + c_1 z^{k-1} + ... + c_k.
/// Roots of the polynomial lie outside the unit disk iff this is below 1.
[[nodiscard]] double spectral_radius(const BackshiftPolynomial& poly);

inline constexpr double kRootMargin = 1e-9;

struct SpectralReport {
    double radius_f = 0.0;
    double radius_c = 0.0;
    double radius_d = 0.0;
    bool stable = false;      ///< f and d within the margin
    bool invertible = false;  ///< c within the margin
    [[nodiscard]] bool ok() const noexcept { return stable && invertible; }
};

[[nodiscard]] SpectralReport check_invertibility(const TransferModel& model);

/// Difference-equation evaluation of (num/den) x under zero prehistory.
[[nodiscard]] Series apply_rational_filter(const BackshiftPolynomial& num,
                                           const BackshiftPolynomial& den, const Series& x);

/// Span form of apply_rational_filter; `out` must have the size of `in` and
/// must not alias it. No validation beyond a monic denominator.
void filter_into(const BackshiftPolynomial& num, const BackshiftPolynomial& den,
                 std::span<const double> in, std::span<double> out);

/// Outputs Y = (B/F)u + (C/D)e. Throws on length mismatch or instability.
[[nodiscard]] Series simulate(const TransferModel& model, const Series& u, const Series& e);

/// Reconstructed innovations (D/C)(y - (B/F)u). Throws InvertibilityError when
/// c is not invertible or f is unstable.
[[nodiscard]] Series residuals(const TransferModel& model, const Series& u, const Series& y);

/// Candidate parameter; entries are laid out in ModelStructure's index order.
struct ParamVector {
    std::vector<double> entries;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return entries[i]; }
    friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

/// One coefficient slot of a model structure: a fixed value, or
/// `sign * theta[index]`.
struct ParamRef {
    std::size_t index = 0;
    double sign = 1.0;
    friend bool operator==(const ParamRef&, const ParamRef&) = default;
};
using Coefficient = std::variant<double, ParamRef>;

/// Declares the orders of b, f, c, d and which coefficients are free, and
/// maps a ParamVector to the TransferModel it denotes. A parameter index may
/// appear in several slots (ARX shares its A polynomial between f and d).
class ModelStructure {
public:
    ModelStructure() = default;
    ModelStructure(std::vector<Coefficient> b, std::vector<Coefficient> f,
                   std::vector<Coefficient> c, std::vector<Coefficient> d);

    /// Y_t = theta Y_{t-1} + E_t.
    static ModelStructure ar1();
    /// y_t = sum_{i=1}^{na} a_i y_{t-i} + sum_{i=1}^{nb} b_i u_{t-i} + e_t,
    /// theta = (a_1..a_na, b_1..b_nb).
    static ModelStructure arx(std::size_t na, std::size_t nb);
    /// ARX plus a monic MA noise numerator with nc free coefficients appended
    /// to theta: A y = B u + C e.
    static ModelStructure armax(std::size_t na, std::size_t nb, std::size_t nc);

    [[nodiscard]] std::size_t free_count() const noexcept { return free_count_; }
    [[nodiscard]] TransferModel model(const ParamVector& theta) const;

    [[nodiscard]] const std::vector<Coefficient>& b() const noexcept { return b_; }
    [[nodiscard]] const std::vector<Coefficient>& f() const noexcept { return f_; }
    [[nodiscard]] const std::vector<Coefficient>& c() const noexcept { return c_; }
    [[nodiscard]] const std::vector<Coefficient>& d() const noexcept { return d_; }

    /// True when c is fixed to 1 and residuals are affine in theta: either f
    /// and d are slot-identical (ARX form), or b and f carry no parameters.
    [[nodiscard]] bool is_linear_regression() const;

    /// Regression vectors phi_t with residual_t(theta) = r_t - phi_t' theta,
    /// for linear-regression structures only. Row-major n x free_count().
    [[nodiscard]] std::vector<double> regressors(const Series& u, const Series& y) const;

    friend bool operator==(const ModelStructure&, const ModelStructure&) = default;

private:
    std::vector<Coefficient> b_{0.0}, f_{1.0}, c_{1.0}, d_{1.0};
    std::size_t free_count_ = 0;
};

}  // namespace syncind::linsys
