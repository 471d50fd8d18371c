#pragma once

#include "rwrobust/rng.hpp"
#include "rwrobust/types.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace rwr {

/// Symmetric PSD covariance over the continuous features together with a
/// scalar perturbation scale. The effective covariance is scale * matrix.
class CovarianceSpec {
public:
    /// Validates squareness, exact symmetry, PSD (eigenvalues >= -1e-10 * max)
    /// and scale >= 0. Throws InvariantViolation otherwise.
    explicit CovarianceSpec(Eigen::MatrixXd matrix, double scale = 1.0);

    static CovarianceSpec identity(std::size_t n, double scale = 1.0);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    double scale() const noexcept { return scale_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    double trace() const { return matrix_.trace(); }

    CovarianceSpec with_scale(double scale) const { return CovarianceSpec(matrix_, scale); }

private:
    Eigen::MatrixXd matrix_;
    double scale_;
};

inline constexpr double kPsdTolerance = 1e-10;

/// C = AᵀA with A an n×n matrix of i.i.d. standard normals from the stream,
/// trace-normalized to 1. Throws UsageError for n == 0.
CovarianceSpec make_random_covariance(std::size_t n, const SampleStream& stream);

/// matrix / trace(matrix); the scale is carried over unchanged.
/// Throws DegenerateCovarianceError when the trace is not positive.
CovarianceSpec trace_normalize(const CovarianceSpec& c);

/// Returns L with L·Lᵀ = scale·matrix. Cholesky is tried first, then
/// Cholesky with a jitter of 1e-12·trace on the diagonal; if both fail the
/// factor is built from an eigen-decomposition with negative eigenvalues
/// clamped to 0 (and is then not triangular).
Eigen::MatrixXd factorize(const CovarianceSpec& c);

/// Row-stochastic transition matrix for one categorical feature. Row v is the
/// distribution of the perturbed value given current value v.
class CategoricalTransition {
public:
    CategoricalTransition(std::size_t feature, Eigen::MatrixXd matrix);

    std::size_t feature() const noexcept { return feature_; }
    std::size_t categories() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

    /// Draws the perturbed category for current value `from` given u in [0,1).
    std::size_t draw(std::size_t from, double u) const;

private:
    std::size_t feature_;
    Eigen::MatrixXd matrix_;
    Eigen::MatrixXd cumulative_;
};

/// The per-point perturbation distribution. Continuous features receive
/// additive Gaussian noise; categorical features are resampled through their
/// transition matrices; categorical features without a matrix stay fixed.
///
/// Factors are computed once at construction, so a model is immutable and
/// safe to share across threads.
class PerturbationModel {
public:
    /// feature_count: total number of features. categorical_features: indices
    /// of categorical columns (need not all have a transition matrix).
    /// Either a global Gaussian or per-point Gaussians (or neither) may be set.
    PerturbationModel(std::size_t feature_count, std::vector<std::size_t> categorical_features,
                      std::optional<CovarianceSpec> gaussian,
                      std::vector<CategoricalTransition> transitions = {},
                      std::vector<CovarianceSpec> per_point = {});

    /// Isotropic Gaussian over all features: sigma² · I.
    static PerturbationModel isotropic(std::size_t feature_count, double sigma);

    std::size_t feature_count() const noexcept { return feature_count_; }
    const std::vector<std::size_t>& continuous_features() const noexcept { return continuous_; }
    const std::vector<std::size_t>& categorical_features() const noexcept { return categorical_; }
    const std::optional<CovarianceSpec>& gaussian() const noexcept { return gaussian_; }
    const std::vector<CovarianceSpec>& per_point() const noexcept { return per_point_; }
    const std::vector<CategoricalTransition>& transitions() const noexcept { return transitions_; }
    bool is_per_point() const noexcept { return !per_point_.empty(); }

    /// Covariance used for the given point, or nullptr when there is none.
    const CovarianceSpec* covariance_for(std::size_t point_index) const;

    /// Same model with every covariance scale multiplied by `factor`.
    PerturbationModel rescaled(double factor) const;

    /// k perturbed copies of x_t, one per row. The result is a pure function of
    /// (model, x_t, stream, k).
    SampleMatrix sample(const FeatureVector& x_t, const SampleStream& stream, std::size_t k) const;

private:
    const Eigen::MatrixXd* factor_for(std::size_t point_index) const;

    std::size_t feature_count_;
    std::vector<std::size_t> continuous_;
    std::vector<std::size_t> categorical_;
    std::optional<CovarianceSpec> gaussian_;
    std::vector<CategoricalTransition> transitions_;
    std::vector<CovarianceSpec> per_point_;
    std::optional<Eigen::MatrixXd> global_factor_;
    std::vector<Eigen::MatrixXd> point_factors_;
};

} // namespace rwr
