#pragma once

#include "rwrobust/classifier.hpp"
#include "rwrobust/rng.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rwr {

struct SearchConfig {
    std::size_t n_directions = 256;
    double max_radius = 10.0;
    double bisection_tolerance = 1e-6;
    bool include_axes = true;
    /// Local pattern search on the sphere around the best coarse direction.
    bool refine = true;
    /// Feature indices the search may move; empty means all features.
    /// Categorical columns belong outside this set.
    std::vector<std::size_t> search_features;

    /// Throws UsageError when a field is out of range for `dimension`.
    void validate(std::size_t dimension) const;
};

struct CounterfactualResult {
    FeatureVector x_c;
    /// Euclidean distance |x_c - x_t|; max_radius when not converged.
    double distance = 0.0;
    /// Radius of the last same-label point on the winning ray.
    double inner_radius = 0.0;
    bool converged = false;
    std::size_t directions_tried = 0;
    std::string base_label;
    std::string counterfactual_label;
};

/// Untargeted closest counterfactual by directional bisection: along every
/// direction the radius grows geometrically (x2 from 1e-3 * max_radius) until
/// the label changes or max_radius is passed, the bracket is bisected down to
/// bisection_tolerance, and the nearest flip point wins. Directions are the
/// ± coordinate axes (if enabled) plus uniform random unit vectors from the
/// stream. The returned distance is an upper bound on the true minimum.
CounterfactualResult find_counterfactual(const Classifier& f, const FeatureVector& x_t, const SearchConfig& cfg,
                                         const SampleStream& stream);

/// Runs find_counterfactual for every row, in parallel over points. Row r
/// uses SampleStream{master_seed, point_indices[r], stream_tag::kSearch}.
/// The first failing point is rethrown as PointError.
std::vector<CounterfactualResult> find_counterfactuals(const Classifier& f, const SampleMatrix& points,
                                                       const std::vector<std::size_t>& point_indices,
                                                       const SearchConfig& cfg, std::uint64_t master_seed,
                                                       std::size_t workers = 1);

struct AdversarialScore {
    double distance = 0.0;
    /// distance / max converged distance; nullopt for non-converged points.
    std::optional<double> r_adv;
    bool converged = false;
};

/// r_i = d_i / max_j d_j over converged results. Throws Error("no
/// counterfactuals found") when none converged.
std::vector<AdversarialScore> adversarial_scores(const std::vector<CounterfactualResult>& results);

} // namespace rwr
