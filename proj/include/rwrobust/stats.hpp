#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rwr {

/// Standard normal CDF via erfc; relative error near machine precision.
double normal_cdf(double z);
/// Inverse standard normal CDF for p in (0,1).
double normal_quantile(double p);

/// Pearson correlation; nullopt when either input has zero variance or
/// fewer than 2 values.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> v);

/// Pearson correlation of average ranks.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

/// Number of pairs ordered strictly oppositely by a and b.
std::size_t count_inversions(std::span<const double> a, std::span<const double> b);

} // namespace rwr
