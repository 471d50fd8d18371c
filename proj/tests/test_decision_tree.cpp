#include "rwrobust/decision_tree.hpp"
#include "rwrobust/errors.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <random>

using namespace rwr;

namespace {

double accuracy(const Classifier& f, const SampleMatrix& x, const std::vector<std::string>& y) {
    const auto pred = f.predict(x);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < y.size(); ++i) ok += pred[i].token == y[i];
    return double(ok) / double(y.size());
}

} // namespace

TEST_CASE("separable 1-D data gives one split near zero") {
    SampleMatrix x(20, 1);
    std::vector<std::string> y;
    for (int i = 0; i < 20; ++i) {
        const double v = i < 10 ? -1.0 - i * 0.1 : 1.0 + (i - 10) * 0.1;
        x(i, 0) = v;
        y.push_back(v < 0 ? "a" : "b");
    }
    const auto tree = fit_tree(x, y, 3);
    CHECK(tree.depth() == 1);
    CHECK(tree.nodes()[0].feature == 0);
    CHECK(std::abs(tree.nodes()[0].threshold) < 1.0);
    CHECK(tree.nodes()[0].threshold == 0.0); // midpoint of -1 and 1
    CHECK(accuracy(tree, x, y) == 1.0);
}

TEST_CASE("XOR is learnable at depth 2") {
    SampleMatrix x(4, 2);
    x << 0, 0, 0, 1, 1, 0, 1, 1;
    const std::vector<std::string> y{"0", "1", "1", "0"};
    const auto tree = fit_tree(x, y, 2);
    CHECK(tree.depth() == 2);
    CHECK(accuracy(tree, x, y) == 1.0);

    // Exhaustive oracle: no single axis split separates XOR, so depth 1 cannot.
    const auto stump = fit_tree(x, y, 1);
    CHECK(accuracy(stump, x, y) < 1.0);
}

TEST_CASE("single-class data gives a constant tree") {
    const SampleMatrix x = SampleMatrix::Random(6, 3);
    const auto tree = fit_tree(x, std::vector<std::string>(6, "only"), 4);
    CHECK(tree.is_constant());
    CHECK(tree.depth() == 0);
    CHECK(tree.predict_one(FeatureVector::Constant(3, 100.0)).token == "only");
}

TEST_CASE("depth limit is respected and leaves take the majority") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    SampleMatrix x(300, 3);
    std::vector<std::string> y;
    for (int i = 0; i < 300; ++i) {
        for (int c = 0; c < 3; ++c) x(i, c) = u(rng);
        y.push_back(x(i, 0) * x(i, 1) + 0.3 * x(i, 2) > 0 ? "p" : "n");
    }
    for (std::size_t d : {1u, 2u, 3u, 5u}) {
        const auto tree = fit_tree(x, y, d);
        CHECK(tree.depth() <= d);
        std::size_t total = 0;
        for (const auto& n : tree.nodes())
            if (n.feature < 0) total += n.samples;
        CHECK(total == 300);
    }
}

TEST_CASE("fitting is deterministic and serializes") {
    SampleMatrix x(4, 2);
    x << 0, 0, 0, 1, 1, 0, 1, 1;
    const std::vector<std::string> y{"0", "1", "1", "0"};
    const auto a = fit_tree(x, y, 2).to_json();
    CHECK(a == fit_tree(x, y, 2).to_json());
    CHECK_NOTHROW(nlohmann::json::parse(a));
}

TEST_CASE("invalid training input") {
    CHECK_THROWS_AS(fit_tree(SampleMatrix::Zero(1, 1), {"a"}, 1), UsageError);
    CHECK_THROWS_AS(fit_tree(SampleMatrix::Zero(2, 1), {"a", "b"}, 0), UsageError);
    CHECK_THROWS_AS(fit_tree(SampleMatrix::Zero(2, 1), {"a"}, 1), UsageError);
}
