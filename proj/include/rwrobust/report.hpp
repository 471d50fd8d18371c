#pragma once

#include "rwrobust/analytic.hpp"
#include "rwrobust/counterfactual.hpp"
#include "rwrobust/robustness.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rwr {

inline constexpr const char* kRobustnessHeader = "point_index,base_label,p_r,p_flip,stderr,n_samples,seed";
inline constexpr const char* kCompareColumns = "d_cf,r_adv,cf_converged";
inline constexpr const char* kSweepHeader = "scale,pearson,spearman,n_defined";
inline constexpr const char* kGridHeader = "x1,x2,p_r,d_cf";

struct ComparedPoint {
    std::size_t point_index = 0;
    double p_r = 0.0;
    double stderr_ = 0.0;
    double d_cf = 0.0;
    std::optional<double> r_adv;
    bool cf_converged = false;
};

struct ComparisonReport {
    std::vector<ComparedPoint> points;
    /// Over points with a converged counterfactual; nullopt if undefined.
    std::optional<double> pearson;
    std::optional<double> spearman;
    std::size_t inversions = 0;
    /// Points entering the correlations.
    std::size_t n_defined = 0;
};

/// Aligns estimates and scores by position (both must describe the same
/// points in the same order).
ComparisonReport compare_report(const std::vector<RobustnessEstimate>& robustness,
                                const std::vector<AdversarialScore>& adversarial);

struct SweepPoint {
    double scale = 0.0;
    std::optional<double> pearson;
    std::optional<double> spearman;
    std::size_t n_defined = 0;
};

/// For every scale, re-estimates robustness with the base model's
/// covariance multiplied by that scale and correlates it against the fixed
/// adversarial scores. Scales must be positive and ascending.
std::vector<SweepPoint> scale_sweep(const Classifier& f, const SampleMatrix& points,
                                    const std::vector<std::size_t>& point_indices, const PerturbationModel& base_model,
                                    const std::vector<AdversarialScore>& adversarial, const std::vector<double>& scales,
                                    std::size_t n, std::uint64_t master_seed, const FlipConfig& cfg,
                                    std::size_t workers = 1);

/// Index of the largest defined Spearman value, or nullopt.
std::optional<std::size_t> argmax_spearman(const std::vector<SweepPoint>& curve);

std::string robustness_csv(const std::vector<RobustnessEstimate>& estimates);
std::string comparison_csv(const std::vector<RobustnessEstimate>& estimates, const ComparisonReport& report);
std::string sweep_csv(const std::vector<SweepPoint>& curve);
std::string grid_csv(const std::vector<analytic::GridCell>& grid);
std::string convergence_csv(const ConvergenceReport& report);

/// "pearson=…,spearman=…,inversions=…"; undefined values print as "undefined".
std::string summary_line(const ComparisonReport& report);

/// Parses a report written by robustness_csv. Values are read back at the
/// 9-significant-digit precision they were written with.
std::vector<RobustnessEstimate> parse_robustness_csv(const std::string& text);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace rwr
