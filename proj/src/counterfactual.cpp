#include "rwrobust/counterfactual.hpp"

#include "parallel.hpp"
#include "rwrobust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rwr {

void SearchConfig::validate(std::size_t dimension) const {
    if (n_directions == 0) throw UsageError("search: n_directions must be positive");
    if (!(max_radius > 0.0)) throw UsageError("search: max_radius must be positive");
    if (!(bisection_tolerance > 0.0)) throw UsageError("search: bisection_tolerance must be positive");
    if (include_axes && n_directions < 2 * dimension)
        throw UsageError("search: n_directions must be at least 2 x dimension (" + std::to_string(2 * dimension) +
                         ") when axes are included");
}

namespace {

struct Ray {
    Eigen::VectorXd dir; // unit vector in full feature space
    bool flipped = false;
    double inner = 0.0; // last radius known to keep the label
    double outer = 0.0; // first radius known to flip
};

class RaySearch {
public:
    RaySearch(const Classifier& f, const FeatureVector& x_t, const Label& base, const SearchConfig& cfg)
        : f_(f), x_t_(x_t), base_(base), cfg_(cfg) {
        for (double r = 1e-3 * cfg.max_radius; r < cfg.max_radius; r *= 2.0) ladder_.push_back(r);
        ladder_.push_back(cfg.max_radius);
    }

    /// Brackets and bisects every ray. Rays whose bracket cannot beat
    /// `bound` are dropped early and reported as not flipped.
    void run(std::vector<Ray>& rays, double bound = std::numeric_limits<double>::infinity()) {
        if (rays.empty()) return;
        const auto n_rungs = static_cast<Eigen::Index>(ladder_.size());
        SampleMatrix batch(static_cast<Eigen::Index>(rays.size()) * n_rungs, x_t_.size());
        for (std::size_t i = 0; i < rays.size(); ++i)
            for (Eigen::Index k = 0; k < n_rungs; ++k)
                batch.row(static_cast<Eigen::Index>(i) * n_rungs + k) = point(rays[i].dir, ladder_[k]).transpose();
        const auto labels = predict(batch);
        for (std::size_t i = 0; i < rays.size(); ++i) {
            Ray& ray = rays[i];
            ray.flipped = false;
            for (Eigen::Index k = 0; k < n_rungs; ++k) {
                if (!(labels[static_cast<std::size_t>(static_cast<Eigen::Index>(i) * n_rungs + k)] == base_)) {
                    ray.flipped = true;
                    ray.inner = k == 0 ? 0.0 : ladder_[static_cast<std::size_t>(k - 1)];
                    ray.outer = ladder_[static_cast<std::size_t>(k)];
                    break;
                }
            }
        }

        std::vector<std::size_t> active;
        for (;;) {
            double best = bound;
            for (const Ray& r : rays)
                if (r.flipped) best = std::min(best, r.outer);
            active.clear();
            for (std::size_t i = 0; i < rays.size(); ++i) {
                Ray& r = rays[i];
                if (!r.flipped) continue;
                if (r.inner >= best && r.outer > best) {
                    r.flipped = false; // cannot win
                    continue;
                }
                if (r.outer - r.inner > cfg_.bisection_tolerance) active.push_back(i);
            }
            if (active.empty()) break;
            SampleMatrix mids(static_cast<Eigen::Index>(active.size()), x_t_.size());
            std::vector<double> radius(active.size());
            for (std::size_t a = 0; a < active.size(); ++a) {
                const Ray& r = rays[active[a]];
                radius[a] = r.inner + (r.outer - r.inner) / 2.0;
                mids.row(static_cast<Eigen::Index>(a)) = point(r.dir, radius[a]).transpose();
            }
            const auto mid_labels = predict(mids);
            for (std::size_t a = 0; a < active.size(); ++a) {
                Ray& r = rays[active[a]];
                if (mid_labels[a] == base_) {
                    r.inner = radius[a];
                } else {
                    r.outer = radius[a];
                }
            }
        }
    }

    FeatureVector point(const Eigen::VectorXd& dir, double radius) const { return x_t_ + radius * dir; }
    std::size_t evaluated() const noexcept { return evaluated_; }

private:
    std::vector<Label> predict(const SampleMatrix& batch) {
        auto labels = f_.predict(batch);
        if (labels.size() != static_cast<std::size_t>(batch.rows()))
            throw Error("classifier returned a wrong number of labels during counterfactual search");
        evaluated_ += labels.size();
        return labels;
    }

    const Classifier& f_;
    const FeatureVector& x_t_;
    const Label& base_;
    const SearchConfig& cfg_;
    std::vector<double> ladder_;
    std::size_t evaluated_ = 0;
};

Eigen::VectorXd embed(const Eigen::VectorXd& sub, const std::vector<std::size_t>& features, Eigen::Index full) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(full);
    for (std::size_t i = 0; i < features.size(); ++i) v(static_cast<Eigen::Index>(features[i])) = sub(static_cast<Eigen::Index>(i));
    return v;
}

/// Orthonormal basis of the complement of unit vector u (columns).
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& u) {
    const Eigen::Index m = u.size();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    return q.rightCols(m - 1);
}

std::size_t best_ray(const std::vector<Ray>& rays) {
    std::size_t best = rays.size();
    for (std::size_t i = 0; i < rays.size(); ++i)
        if (rays[i].flipped && (best == rays.size() || rays[i].outer < rays[best].outer)) best = i;
    return best;
}

} // namespace

CounterfactualResult find_counterfactual(const Classifier& f, const FeatureVector& x_t, const SearchConfig& cfg,
                                         const SampleStream& stream) {
    const Eigen::Index full = x_t.size();
    std::vector<std::size_t> features = cfg.search_features;
    if (features.empty()) {
        features.resize(static_cast<std::size_t>(full));
        std::iota(features.begin(), features.end(), std::size_t{0});
    }
    for (std::size_t idx : features)
        if (idx >= static_cast<std::size_t>(full)) throw LayoutError("search feature index out of range");
    const std::size_t dim = features.size();
    cfg.validate(dim);

    const Label base = f.predict_one(x_t);
    CounterfactualResult result;
    result.x_c = x_t;
    result.distance = cfg.max_radius;
    result.base_label = base.token;

    std::vector<Ray> rays;
    if (cfg.include_axes) {
        for (std::size_t i = 0; i < dim; ++i) {
            for (double sign : {1.0, -1.0}) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
                e(static_cast<Eigen::Index>(i)) = sign;
                rays.push_back({embed(e, features, full)});
            }
        }
    }
    auto engine = stream.engine();
    std::normal_distribution<double> normal;
    while (rays.size() < cfg.n_directions) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(engine);
        const double norm = v.norm();
        if (norm == 0.0) continue;
        rays.push_back({embed(v / norm, features, full)});
    }

    RaySearch search(f, x_t, base, cfg);
    search.run(rays);
    result.directions_tried = rays.size();
    std::size_t best = best_ray(rays);
    if (best == rays.size()) return result;

    Ray winner = rays[best];
    if (cfg.refine && dim >= 2) {
        // Pattern search over rotations of the winning direction.
        double step = 0.25;
        for (int iter = 0; iter < 400 && step > 1e-7; ++iter) {
            Eigen::VectorXd u(static_cast<Eigen::Index>(dim));
            for (std::size_t i = 0; i < dim; ++i) u(static_cast<Eigen::Index>(i)) = winner.dir(static_cast<Eigen::Index>(features[i]));
            const Eigen::MatrixXd tangents = tangent_basis(u);
            std::vector<Ray> candidates;
            for (Eigen::Index t = 0; t < tangents.cols(); ++t) {
                for (double sign : {1.0, -1.0}) {
                    Eigen::VectorXd v = std::cos(step) * u + sign * std::sin(step) * tangents.col(t);
                    candidates.push_back({embed(v.normalized(), features, full)});
                }
            }
            search.run(candidates, winner.outer);
            result.directions_tried += candidates.size();
            const std::size_t c = best_ray(candidates);
            if (c != candidates.size() && candidates[c].outer < winner.outer) {
                winner = candidates[c];
            } else {
                step /= 2.0;
            }
        }
    }

    const FeatureVector x_c = search.point(winner.dir, winner.outer);
    const Label check = f.predict_one(x_c);
    if (check == base) throw InvariantViolation("counterfactual search produced a point that does not change the label");
    result.x_c = x_c;
    result.distance = (x_c - x_t).norm();
    result.inner_radius = winner.inner;
    result.converged = true;
    result.counterfactual_label = check.token;
    return result;
}

std::vector<CounterfactualResult> find_counterfactuals(const Classifier& f, const SampleMatrix& points,
                                                       const std::vector<std::size_t>& point_indices,
                                                       const SearchConfig& cfg, std::uint64_t master_seed,
                                                       std::size_t workers) {
    const auto n_points = static_cast<std::size_t>(points.rows());
    if (!point_indices.empty() && point_indices.size() != n_points)
        throw UsageError("find_counterfactuals: point index list does not match the number of points");
    workers = std::max<std::size_t>(workers, 1);
    std::vector<std::unique_ptr<Classifier>> spawned(workers);
    std::vector<const Classifier*> handles(workers, &f);
    for (std::size_t w = 1; w < workers; ++w) {
        spawned[w] = f.spawn();
        if (spawned[w]) handles[w] = spawned[w].get();
    }
    std::vector<CounterfactualResult> results(n_points);
    std::vector<std::string> errors(n_points);
    detail::parallel_for(n_points, workers, [&](std::size_t row, std::size_t w) {
        const std::size_t index = point_indices.empty() ? row : point_indices[row];
        try {
            results[row] = find_counterfactual(*handles[w], points.row(static_cast<Eigen::Index>(row)).transpose(), cfg,
                                               SampleStream{master_seed, index, stream_tag::kSearch});
        } catch (const std::exception& e) {
            errors[row] = e.what();
        }
    });
    for (std::size_t row = 0; row < n_points; ++row)
        if (!errors[row].empty()) throw PointError(point_indices.empty() ? row : point_indices[row], errors[row]);
    return results;
}

std::vector<AdversarialScore> adversarial_scores(const std::vector<CounterfactualResult>& results) {
    double max_distance = 0.0;
    bool any = false;
    for (const auto& r : results) {
        if (!r.converged) continue;
        any = true;
        max_distance = std::max(max_distance, r.distance);
    }
    if (!any) throw Error("no counterfactuals found");
    std::vector<AdversarialScore> out;
    out.reserve(results.size());
    for (const auto& r : results) {
        AdversarialScore s;
        s.distance = r.distance;
        s.converged = r.converged;
        if (r.converged) s.r_adv = r.distance / max_distance;
        out.push_back(s);
    }
    return out;
}

} // namespace rwr
