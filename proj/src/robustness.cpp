#include "rwrobust/robustness.hpp"

#include "parallel.hpp"
#include "rwrobust/errors.hpp"
#include "rwrobust/stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace rwr {

FlipConfig FlipConfig::regression(double gamma) {
    if (!(gamma > 0.0)) throw UsageError("regression threshold gamma must be positive");
    FlipConfig cfg;
    cfg.gamma_ = gamma;
    return cfg;
}

double FlipConfig::gamma() const {
    if (!gamma_) throw UsageError("gamma is only defined in regression mode");
    return *gamma_;
}

int flip_indicator(const Label& base, const Label& perturbed, const FlipConfig& cfg) {
    if (!cfg.is_regression()) return base.token == perturbed.token ? 0 : 1;
    if (!base.has_value() || !perturbed.has_value()) throw UsageError("regression mode needs numeric model outputs");
    return std::abs(perturbed.value - base.value) > cfg.gamma() ? 1 : 0;
}

int flip_indicator(const Classifier& f, const Label& base, const FeatureVector& x_hat, const FlipConfig& cfg) {
    return flip_indicator(base, f.predict_one(x_hat), cfg);
}

namespace {

std::size_t block_count(std::size_t n) {
    return (n + kSampleBlock - 1) / kSampleBlock;
}

std::size_t count_block_flips(const Classifier& f, const Label& base, const FeatureVector& x_t,
                              const PerturbationModel& model, const SampleStream& stream, std::size_t block,
                              std::size_t n, const FlipConfig& cfg) {
    const std::size_t begin = block * kSampleBlock;
    const std::size_t k = std::min(kSampleBlock, n - begin);
    const SampleMatrix samples = model.sample(x_t, stream.with_counter(block), k);
    const auto labels = f.predict(samples);
    if (labels.size() != k)
        throw Error("classifier returned " + std::to_string(labels.size()) + " labels for " + std::to_string(k) + " samples");
    std::size_t flips = 0;
    for (const auto& l : labels) flips += static_cast<std::size_t>(flip_indicator(base, l, cfg));
    return flips;
}

RobustnessEstimate finish(std::size_t point_index, std::string base_label, std::size_t flips, std::size_t n,
                          std::uint64_t seed) {
    RobustnessEstimate e;
    e.point_index = point_index;
    e.base_label = std::move(base_label);
    e.flips = flips;
    e.n_samples = n;
    e.seed = seed;
    e.p_flip = static_cast<double>(flips) / static_cast<double>(n);
    e.p_r = 1.0 - e.p_flip;
    e.stderr_ = std::sqrt(e.p_flip * (1.0 - e.p_flip) / static_cast<double>(n));
    if (flips == 0 || flips == n) e.rule_of_three = 3.0 / static_cast<double>(n);
    return e;
}

} // namespace

RobustnessEstimate estimate(const Classifier& f, const FeatureVector& x_t, const PerturbationModel& model, std::size_t n,
                            const SampleStream& stream, const FlipConfig& cfg) {
    if (n == 0) throw UsageError("estimate: sample count must be >= 1");
    const auto point = static_cast<std::size_t>(stream.point_index);
    try {
        const Label base = f.predict_one(x_t);
        std::size_t flips = 0;
        for (std::size_t b = 0; b < block_count(n); ++b) flips += count_block_flips(f, base, x_t, model, stream, b, n, cfg);
        return finish(point, base.token, flips, n, stream.master_seed);
    } catch (const PointError&) {
        throw;
    } catch (const std::exception& e) {
        throw PointError(point, e.what());
    }
}

DatasetRobustness estimate_dataset(const Classifier& f, const SampleMatrix& points,
                                   const std::vector<std::size_t>& point_indices, const PerturbationModel& model,
                                   std::size_t n, std::uint64_t master_seed, const FlipConfig& cfg, std::size_t workers) {
    const auto n_points = static_cast<std::size_t>(points.rows());
    if (n_points == 0) throw UsageError("estimate_dataset: no points");
    if (n == 0) throw UsageError("estimate_dataset: sample count must be >= 1");
    if (!point_indices.empty() && point_indices.size() != n_points)
        throw UsageError("estimate_dataset: point index list does not match the number of points");
    workers = std::max<std::size_t>(workers, 1);
    const auto index_of = [&](std::size_t row) { return point_indices.empty() ? row : point_indices[row]; };

    // One handle per worker; worker 0 reuses f.
    std::vector<std::unique_ptr<Classifier>> spawned(workers);
    std::vector<const Classifier*> handles(workers, &f);
    for (std::size_t w = 1; w < workers; ++w) {
        spawned[w] = f.spawn();
        if (spawned[w]) handles[w] = spawned[w].get();
    }

    std::vector<std::optional<Label>> base(n_points);
    std::vector<std::string> error(n_points);
    std::mutex error_mutex;
    const auto record = [&](std::size_t row, const char* what) {
        std::lock_guard lock(error_mutex);
        if (error[row].empty()) error[row] = what;
    };

    detail::parallel_for(n_points, workers, [&](std::size_t row, std::size_t w) {
        try {
            base[row] = handles[w]->predict_one(points.row(static_cast<Eigen::Index>(row)).transpose());
        } catch (const std::exception& e) {
            record(row, e.what());
        }
    });

    const std::size_t blocks = block_count(n);
    std::vector<std::size_t> flips(n_points * blocks, 0);
    detail::parallel_for(n_points * blocks, workers, [&](std::size_t item, std::size_t w) {
        const std::size_t row = item / blocks, block = item % blocks;
        if (!base[row]) return;
        try {
            const FeatureVector x = points.row(static_cast<Eigen::Index>(row)).transpose();
            const auto stream = SampleStream::for_point(master_seed, index_of(row));
            flips[item] = count_block_flips(*handles[w], *base[row], x, model, stream, block, n, cfg);
        } catch (const std::exception& e) {
            record(row, e.what());
        }
    });

    DatasetRobustness out;
    for (std::size_t row = 0; row < n_points; ++row) {
        if (!error[row].empty()) {
            out.failures.push_back({index_of(row), error[row]});
            continue;
        }
        std::size_t total = 0;
        for (std::size_t b = 0; b < blocks; ++b) total += flips[row * blocks + b];
        out.estimates.push_back(finish(index_of(row), base[row]->token, total, n, master_seed));
    }
    if (out.estimates.empty()) throw PointError(out.failures.front().point_index, out.failures.front().message);
    return out;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t count) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(count);
    for (std::size_t i = 0; i < count; ++i) seeds.push_back(mix64(master_seed + 0x632BE59BD9B4E019ULL * (i + 1)));
    return seeds;
}

ConvergenceReport convergence_check(const Classifier& f, const SampleMatrix& points,
                                    const std::vector<std::size_t>& point_indices, const PerturbationModel& model,
                                    std::size_t n, const std::vector<std::uint64_t>& seeds, const FlipConfig& cfg,
                                    std::size_t workers) {
    if (points.rows() < 3) throw UsageError("convergence_check: need at least 3 points");
    if (seeds.size() < 2) throw UsageError("convergence_check: need at least 2 seeds");

    ConvergenceReport report;
    report.n_repeats = seeds.size();
    report.seeds = seeds;
    std::vector<std::vector<double>> runs;
    for (std::uint64_t seed : seeds) {
        auto result = estimate_dataset(f, points, point_indices, model, n, seed, cfg, workers);
        if (!result.failures.empty()) throw PointError(result.failures.front().point_index, result.failures.front().message);
        std::vector<double> pr;
        pr.reserve(result.estimates.size());
        for (const auto& e : result.estimates) pr.push_back(e.p_r);
        if (std::all_of(pr.begin(), pr.end(), [&](double v) { return v == pr.front(); }))
            report.degenerate_runs.push_back(runs.size());
        runs.push_back(std::move(pr));
    }

    const std::size_t k = runs.size();
    report.pearson.assign(k, std::vector<std::optional<double>>(k));
    report.spearman.assign(k, std::vector<std::optional<double>>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            std::optional<double> p, s;
            if (i == j) {
                p = s = 1.0;
                if (std::find(report.degenerate_runs.begin(), report.degenerate_runs.end(), i) != report.degenerate_runs.end())
                    p = s = std::nullopt;
            } else {
                p = pearson(runs[i], runs[j]);
                s = spearman(runs[i], runs[j]);
                if (p && (!report.min_pearson || *p < *report.min_pearson)) report.min_pearson = p;
                if (s && (!report.min_spearman || *s < *report.min_spearman)) report.min_spearman = s;
            }
            report.pearson[i][j] = report.pearson[j][i] = p;
            report.spearman[i][j] = report.spearman[j][i] = s;
        }
    }
    return report;
}

} // namespace rwr
