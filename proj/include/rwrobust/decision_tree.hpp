#pragma once

#include "rwrobust/classifier.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rwr {

/// Axis-aligned CART tree grown greedily on Gini impurity.
class DecisionTreeClassifier final : public Classifier {
public:
    struct Node {
        // Leaf when feature < 0.
        int feature = -1;
        double threshold = 0.0;
        int left = -1;  // x[feature] <= threshold
        int right = -1; // x[feature] >  threshold
        std::string label;
        std::size_t samples = 0;
    };

    DecisionTreeClassifier(std::size_t feature_count, std::vector<Node> nodes, bool constant);

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return features_; }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;
    /// Set when training data had a single class; the tree is then one leaf.
    bool is_constant() const noexcept { return constant_; }

    /// {"feature_count": n, "nodes": [{"feature":..,"threshold":..,"left":..,"right":..,"label":..,"samples":..}]}
    std::string to_json() const;

private:
    const Node& leaf_for(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

    std::size_t features_;
    std::vector<Node> nodes_;
    bool constant_;
};

/// Greedy CART fit. Candidate thresholds are midpoints between adjacent
/// distinct values. Splits are chosen by largest impurity decrease; equal
/// decreases prefer the more balanced split, then the lower feature index,
/// then the lower threshold. An impure node is split even at zero decrease
/// so XOR-like layouts remain learnable. Leaves predict the majority label,
/// ties going to the lexicographically smaller token.
///
/// Throws UsageError for fewer than 2 samples or max_depth < 1.
DecisionTreeClassifier fit_tree(const SampleMatrix& features, const std::vector<std::string>& labels,
                                std::size_t max_depth);

} // namespace rwr
