#include "rwrobust/classifier.hpp"

#include "rwrobust/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace rwr {

namespace {

void require_width(const SampleMatrix& batch, std::size_t expected) {
    if (static_cast<std::size_t>(batch.cols()) != expected)
        throw LayoutError("batch has " + std::to_string(batch.cols()) + " features, model expects " +
                          std::to_string(expected));
}

const Label kOne = Label::classification("1");
const Label kZero = Label::classification("0");

} // namespace

Label Classifier::predict_one(const FeatureVector& x) const {
    SampleMatrix row = x.transpose();
    auto labels = predict(row);
    if (labels.size() != 1) throw Error("classifier returned " + std::to_string(labels.size()) + " labels for one row");
    return std::move(labels.front());
}

LinearClassifier::LinearClassifier(Eigen::VectorXd w, double b) : w_(std::move(w)), b_(b) {
    if (w_.size() == 0 || !(w_.norm() > 0.0)) throw UsageError("linear classifier needs a nonzero weight vector");
}

std::vector<Label> LinearClassifier::predict(const SampleMatrix& batch) const {
    require_width(batch, feature_count());
    const Eigen::VectorXd y = batch * w_;
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    for (Eigen::Index r = 0; r < batch.rows(); ++r) out.push_back(y(r) + b_ > 0.5 ? kOne : kZero);
    return out;
}

CornerClassifier::CornerClassifier(double a1, double a2, std::size_t feature_count, std::size_t i, std::size_t j)
    : a1_(a1), a2_(a2), features_(feature_count), i_(i), j_(j) {
    if (i_ == j_) throw UsageError("corner classifier needs two distinct feature indices");
    if (i_ >= features_ || j_ >= features_) throw UsageError("corner classifier feature index out of range");
}

std::vector<Label> CornerClassifier::predict(const SampleMatrix& batch) const {
    require_width(batch, features_);
    const auto i = static_cast<Eigen::Index>(i_);
    const auto j = static_cast<Eigen::Index>(j_);
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    for (Eigen::Index r = 0; r < batch.rows(); ++r)
        out.push_back(batch(r, i) > a1_ && batch(r, j) > a2_ ? kOne : kZero);
    return out;
}

ConstantClassifier::ConstantClassifier(std::size_t feature_count, std::string token)
    : features_(feature_count), token_(std::move(token)) {
    if (!is_valid_token(token_)) throw UsageError("invalid label token '" + token_ + "'");
}

std::vector<Label> ConstantClassifier::predict(const SampleMatrix& batch) const {
    require_width(batch, features_);
    return std::vector<Label>(static_cast<std::size_t>(batch.rows()), Label::classification(token_));
}

LinearRegressor::LinearRegressor(Eigen::VectorXd w, double b) : w_(std::move(w)), b_(b) {
    if (w_.size() == 0) throw UsageError("linear regressor needs at least one weight");
}

std::vector<Label> LinearRegressor::predict(const SampleMatrix& batch) const {
    require_width(batch, feature_count());
    const Eigen::VectorXd y = batch * w_;
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    for (Eigen::Index r = 0; r < batch.rows(); ++r) out.push_back(Label::regression(y(r) + b_));
    return out;
}

FunctionClassifier::FunctionClassifier(std::size_t feature_count, Fn fn) : features_(feature_count), fn_(std::move(fn)) {}

std::vector<Label> FunctionClassifier::predict(const SampleMatrix& batch) const {
    require_width(batch, features_);
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    for (Eigen::Index r = 0; r < batch.rows(); ++r) out.push_back(fn_(batch.row(r)));
    return out;
}

KnnClassifier::KnnClassifier(std::size_t k, SampleMatrix reference, std::vector<std::string> labels)
    : k_(k), reference_(std::move(reference)), labels_(std::move(labels)) {
    if (k_ == 0 || k_ % 2 == 0) throw UsageError("k-NN needs an odd positive k");
    if (static_cast<std::size_t>(reference_.rows()) != labels_.size())
        throw UsageError("k-NN reference points and labels differ in count");
    if (k_ > labels_.size()) throw UsageError("k-NN k exceeds the number of reference points");
    for (const auto& l : labels_)
        if (!is_valid_token(l)) throw UsageError("invalid label token '" + l + "'");
}

std::vector<Label> KnnClassifier::predict(const SampleMatrix& batch) const {
    require_width(batch, feature_count());
    const std::size_t n = labels_.size();
    std::vector<std::size_t> order(n);
    std::vector<double> dist(n);
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
        for (std::size_t i = 0; i < n; ++i)
            dist[i] = (reference_.row(static_cast<Eigen::Index>(i)) - batch.row(r)).squaredNorm();
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k_);
        std::partial_sort(order.begin(), kth, order.end(), [&](std::size_t a, std::size_t b) {
            return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
        });
        std::map<std::string, std::size_t> votes;
        for (auto it = order.begin(); it != kth; ++it) ++votes[labels_[*it]];
        // std::map iterates in token order, so max_element keeps the smaller token on ties.
        auto best = std::max_element(votes.begin(), votes.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
        out.push_back(Label::classification(best->first));
    }
    return out;
}

long double_query_self_test(const Classifier& f, const SampleMatrix& batch) {
    const auto first = f.predict(batch);
    const auto second = f.predict(batch);
    for (std::size_t i = 0; i < first.size() && i < second.size(); ++i)
        if (!(first[i] == second[i])) return static_cast<long>(i);
    if (first.size() != second.size()) return static_cast<long>(std::min(first.size(), second.size()));
    return -1;
}

} // namespace rwr
