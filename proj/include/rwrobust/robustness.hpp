#pragma once

#include "rwrobust/classifier.hpp"
#include "rwrobust/perturbation.hpp"
#include "rwrobust/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rwr {

/// How a prediction change is detected: label inequality for classifiers,
/// |Δy| > gamma for regression models.
class FlipConfig {
public:
    static FlipConfig classification() { return FlipConfig(); }
    static FlipConfig regression(double gamma);

    bool is_regression() const noexcept { return gamma_.has_value(); }
    double gamma() const;

private:
    FlipConfig() = default;
    std::optional<double> gamma_;
};

/// 1 when the perturbed prediction counts as changed. For regression an
/// absolute change of exactly gamma counts as unchanged.
int flip_indicator(const Label& base, const Label& perturbed, const FlipConfig& cfg);

/// Convenience form that evaluates f on x_hat; `base` is the cached f(x_t).
int flip_indicator(const Classifier& f, const Label& base, const FeatureVector& x_hat, const FlipConfig& cfg);

struct RobustnessEstimate {
    std::size_t point_index = 0;
    std::string base_label;
    std::size_t flips = 0;
    std::size_t n_samples = 0;
    double p_flip = 0.0;
    double p_r = 1.0;
    /// sqrt(p(1-p)/N)
    double stderr_ = 0.0;
    std::uint64_t seed = 0;
    /// 3/N when no sample (or every sample) flipped; the plug-in error is 0 there.
    std::optional<double> rule_of_three;
};

/// Samples per counter-addressed block. Block b of point i is drawn from
/// SampleStream{seed, i, b}, so results are independent of scheduling.
inline constexpr std::size_t kSampleBlock = 2048;

/// Monte-Carlo estimate of the flip probability at x_t from n samples.
/// stream.point_index selects the substream (and per-point covariance);
/// stream.counter is ignored.
RobustnessEstimate estimate(const Classifier& f, const FeatureVector& x_t, const PerturbationModel& model, std::size_t n,
                            const SampleStream& stream, const FlipConfig& cfg);

struct PointFailure {
    std::size_t point_index;
    std::string message;
};

struct DatasetRobustness {
    /// One entry per successfully evaluated point, in input order.
    std::vector<RobustnessEstimate> estimates;
    std::vector<PointFailure> failures;
};

/// Estimates every row of `points`; row r uses point index point_indices[r]
/// (or r when point_indices is empty). Work is split into (point, block)
/// items over `workers` threads; each worker gets its own classifier handle
/// from Classifier::spawn(). Throws the first failure if every point failed.
DatasetRobustness estimate_dataset(const Classifier& f, const SampleMatrix& points,
                                   const std::vector<std::size_t>& point_indices, const PerturbationModel& model,
                                   std::size_t n, std::uint64_t master_seed, const FlipConfig& cfg,
                                   std::size_t workers = 1);

struct ConvergenceReport {
    std::size_t n_repeats = 0;
    std::vector<std::uint64_t> seeds;
    /// Pearson correlation between repeat runs' P_r vectors; nullopt where a
    /// run had zero variance.
    std::vector<std::vector<std::optional<double>>> pearson;
    std::vector<std::vector<std::optional<double>>> spearman;
    /// Minimum over defined off-diagonal entries (nullopt if none is defined).
    std::optional<double> min_pearson;
    std::optional<double> min_spearman;
    /// Runs whose P_r vector was constant ("all points equally robust").
    std::vector<std::size_t> degenerate_runs;
};

/// Repeats estimate_dataset once per seed and correlates the P_r vectors.
/// Throws UsageError for fewer than 3 points or fewer than 2 seeds.
ConvergenceReport convergence_check(const Classifier& f, const SampleMatrix& points,
                                    const std::vector<std::size_t>& point_indices, const PerturbationModel& model,
                                    std::size_t n, const std::vector<std::uint64_t>& seeds, const FlipConfig& cfg,
                                    std::size_t workers = 1);

/// 20 seeds derived from one master seed.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t count = 20);

} // namespace rwr
