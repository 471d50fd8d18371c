#pragma once

#include "rwrobust/perturbation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rwr {

/// Builds a PerturbationModel from the JSON config format:
///
///   {"continuous": {"covariance": [[...]] | "identity", "scale": s,
///                   "random": {"seed": u64}, "normalize_trace": bool},
///    "categorical": [{"feature": i, "matrix": [[...]]}],
///    "per_point_covariances": "path.csv"}
///
/// "random" replaces "covariance" with a trace-normalized AᵀA matrix.
/// "per_point_covariances" replaces the global covariance with one n² row per
/// test point (relative paths resolve against base_dir); "scale" still applies.
PerturbationModel perturbation_from_json(const std::string& text, std::size_t feature_count,
                                         const std::vector<std::size_t>& categorical_features,
                                         const std::filesystem::path& base_dir = {});

PerturbationModel load_perturbation(const std::filesystem::path& path, std::size_t feature_count,
                                    const std::vector<std::size_t>& categorical_features);

/// One row per test point, n² values row-major, no header.
std::vector<CovarianceSpec> parse_per_point_covariances(const std::string& text, std::size_t n, double scale);

} // namespace rwr
