#pragma once

#include "rwrobust/types.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace rwr {

/// Black-box hard-label model f. predict() must be deterministic and must
/// return exactly one label per row of the batch, in order.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual std::vector<Label> predict(const SampleMatrix& batch) const = 0;
    virtual std::size_t feature_count() const = 0;

    /// An independent handle for a concurrent worker, or nullptr when this
    /// object may be shared across threads as-is.
    virtual std::unique_ptr<Classifier> spawn() const { return nullptr; }

    Label predict_one(const FeatureVector& x) const;
};

/// Predicts "1" iff w·x + b > 1/2, else "0".
class LinearClassifier final : public Classifier {
public:
    LinearClassifier(Eigen::VectorXd w, double b);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return static_cast<std::size_t>(w_.size()); }

    const Eigen::VectorXd& weights() const noexcept { return w_; }
    double offset() const noexcept { return b_; }

private:
    Eigen::VectorXd w_;
    double b_;
};

/// Predicts "1" iff x[i] > a1 and x[j] > a2, else "0".
class CornerClassifier final : public Classifier {
public:
    CornerClassifier(double a1, double a2, std::size_t feature_count = 2, std::size_t i = 0, std::size_t j = 1);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return features_; }

    double a1() const noexcept { return a1_; }
    double a2() const noexcept { return a2_; }

private:
    double a1_, a2_;
    std::size_t features_, i_, j_;
};

class ConstantClassifier final : public Classifier {
public:
    ConstantClassifier(std::size_t feature_count, std::string token);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return features_; }

private:
    std::size_t features_;
    std::string token_;
};

/// Regression model y = w·x + b.
class LinearRegressor final : public Classifier {
public:
    LinearRegressor(Eigen::VectorXd w, double b);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return static_cast<std::size_t>(w_.size()); }

private:
    Eigen::VectorXd w_;
    double b_;
};

/// Adapts a per-row function. The function must be thread-safe.
class FunctionClassifier final : public Classifier {
public:
    using Fn = std::function<Label(const Eigen::Ref<const Eigen::RowVectorXd>&)>;
    FunctionClassifier(std::size_t feature_count, Fn fn);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return features_; }

private:
    std::size_t features_;
    Fn fn_;
};

/// k-nearest-neighbour majority vote with Euclidean distance. Distance ties
/// go to the lower reference index; vote ties to the lexicographically
/// smaller token.
class KnnClassifier final : public Classifier {
public:
    KnnClassifier(std::size_t k, SampleMatrix reference, std::vector<std::string> labels);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return static_cast<std::size_t>(reference_.cols()); }

private:
    std::size_t k_;
    SampleMatrix reference_;
    std::vector<std::string> labels_;
};

/// Mirrors the process-wide determinism contract: queries the batch twice
/// and returns the first row index whose labels differ, or -1.
long double_query_self_test(const Classifier& f, const SampleMatrix& batch);

} // namespace rwr
