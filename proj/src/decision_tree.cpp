#include "rwrobust/decision_tree.hpp"

#include "rwrobust/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace rwr {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0; // weighted child impurity (sum of n_child * gini_child)
    std::size_t imbalance = 0;
};

double gini_sum(const std::vector<std::size_t>& counts, std::size_t total) {
    // n * gini = n - sum(c^2) / n
    if (total == 0) return 0.0;
    double sq = 0.0;
    for (std::size_t c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
    return static_cast<double>(total) - sq / static_cast<double>(total);
}

bool better(const Split& a, const Split& b) {
    constexpr double eps = 1e-12;
    if (b.feature < 0) return true;
    if (a.impurity < b.impurity - eps) return true;
    if (a.impurity > b.impurity + eps) return false;
    if (a.imbalance != b.imbalance) return a.imbalance < b.imbalance;
    if (a.feature != b.feature) return a.feature < b.feature;
    return a.threshold < b.threshold;
}

class Builder {
public:
    Builder(const SampleMatrix& x, const std::vector<std::size_t>& y, std::size_t n_classes, std::size_t max_depth)
        : x_(x), y_(y), n_classes_(n_classes), max_depth_(max_depth) {}

    std::vector<DecisionTreeClassifier::Node> nodes;
    std::vector<std::string> class_names;

    int grow(std::vector<std::size_t> rows, std::size_t depth) {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        std::vector<std::size_t> counts(n_classes_, 0);
        for (std::size_t r : rows) ++counts[y_[r]];
        // class_names is sorted, so the first maximum is the smaller token.
        const auto majority = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        nodes[id].label = class_names[majority];
        nodes[id].samples = rows.size();

        const bool pure = counts[majority] == rows.size();
        if (pure || depth >= max_depth_ || rows.size() < 2) return id;

        const Split split = best_split(rows, counts);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows) {
            (x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right).push_back(r);
        }
        nodes[id].feature = split.feature;
        nodes[id].threshold = split.threshold;
        const int l = grow(std::move(left), depth + 1);
        const int rr = grow(std::move(right), depth + 1);
        nodes[id].left = l;
        nodes[id].right = rr;
        return id;
    }

private:
    Split best_split(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& total_counts) const {
        Split best;
        const std::size_t n = rows.size();
        std::vector<std::size_t> order(rows);
        for (Eigen::Index f = 0; f < x_.cols(); ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = x_(static_cast<Eigen::Index>(a), f), vb = x_(static_cast<Eigen::Index>(b), f);
                return va < vb || (va == vb && a < b);
            });
            std::vector<std::size_t> left(n_classes_, 0), right(total_counts);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const std::size_t r = order[i];
                ++left[y_[r]];
                --right[y_[r]];
                const double v = x_(static_cast<Eigen::Index>(r), f);
                const double next = x_(static_cast<Eigen::Index>(order[i + 1]), f);
                if (v == next) continue;
                const std::size_t nl = i + 1, nr = n - nl;
                Split cand;
                cand.feature = static_cast<int>(f);
                cand.threshold = v + (next - v) / 2.0;
                cand.impurity = gini_sum(left, nl) + gini_sum(right, nr);
                cand.imbalance = nl > nr ? nl - nr : nr - nl;
                if (better(cand, best)) best = cand;
            }
        }
        return best;
    }

    const SampleMatrix& x_;
    const std::vector<std::size_t>& y_;
    std::size_t n_classes_;
    std::size_t max_depth_;
};

} // namespace

DecisionTreeClassifier::DecisionTreeClassifier(std::size_t feature_count, std::vector<Node> nodes, bool constant)
    : features_(feature_count), nodes_(std::move(nodes)), constant_(constant) {
    if (nodes_.empty()) throw UsageError("decision tree needs at least one node");
    for (const auto& node : nodes_) {
        if (node.feature >= 0) {
            if (static_cast<std::size_t>(node.feature) >= features_ || node.left < 0 || node.right < 0 ||
                static_cast<std::size_t>(node.left) >= nodes_.size() || static_cast<std::size_t>(node.right) >= nodes_.size())
                throw UsageError("malformed decision tree node");
        } else if (!is_valid_token(node.label)) {
            throw UsageError("invalid leaf label '" + node.label + "'");
        }
    }
}

const DecisionTreeClassifier::Node& DecisionTreeClassifier::leaf_for(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    const Node* node = &nodes_.front();
    while (node->feature >= 0) node = &nodes_[static_cast<std::size_t>(x(node->feature) <= node->threshold ? node->left : node->right)];
    return *node;
}

std::vector<Label> DecisionTreeClassifier::predict(const SampleMatrix& batch) const {
    if (static_cast<std::size_t>(batch.cols()) != features_)
        throw LayoutError("batch has " + std::to_string(batch.cols()) + " features, tree expects " + std::to_string(features_));
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    for (Eigen::Index r = 0; r < batch.rows(); ++r) out.push_back(Label::classification(leaf_for(batch.row(r)).label));
    return out;
}

std::size_t DecisionTreeClassifier::depth() const {
    std::function<std::size_t(int)> walk = [&](int id) -> std::size_t {
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.feature < 0) return 0;
        return 1 + std::max(walk(n.left), walk(n.right));
    };
    return walk(0);
}

std::string DecisionTreeClassifier::to_json() const {
    nlohmann::json j;
    j["feature_count"] = features_;
    j["constant"] = constant_;
    auto& arr = j["nodes"] = nlohmann::json::array();
    for (const auto& n : nodes_) {
        arr.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
                       {"label", n.label}, {"samples", n.samples}});
    }
    return j.dump(2);
}

DecisionTreeClassifier fit_tree(const SampleMatrix& features, const std::vector<std::string>& labels, std::size_t max_depth) {
    if (static_cast<std::size_t>(features.rows()) != labels.size())
        throw UsageError("fit_tree: feature rows and labels differ in count");
    if (labels.size() < 2) throw UsageError("fit_tree: need at least 2 samples");
    if (max_depth < 1) throw UsageError("fit_tree: max_depth must be >= 1");

    std::map<std::string, std::size_t> index;
    for (const auto& l : labels) index.emplace(l, 0);
    std::vector<std::string> names;
    for (auto& [name, id] : index) {
        id = names.size();
        names.push_back(name);
    }
    std::vector<std::size_t> y;
    y.reserve(labels.size());
    for (const auto& l : labels) y.push_back(index.at(l));

    Builder builder(features, y, names.size(), max_depth);
    builder.class_names = names;
    std::vector<std::size_t> rows(labels.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    builder.grow(std::move(rows), 0);
    return DecisionTreeClassifier(static_cast<std::size_t>(features.cols()), std::move(builder.nodes), names.size() == 1);
}

} // namespace rwr
