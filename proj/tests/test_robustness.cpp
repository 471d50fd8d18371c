#include "rwrobust/decision_tree.hpp"
#include "rwrobust/errors.hpp"
#include "rwrobust/robustness.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

using namespace rwr;
using Catch::Matchers::WithinAbs;

namespace {

FeatureVector v2(double a, double b) {
    FeatureVector x(2);
    x << a, b;
    return x;
}

const LinearClassifier& horizontal() {
    static const LinearClassifier f((Eigen::VectorXd(2) << 0, 1).finished(), 0.0);
    return f;
}

} // namespace

TEST_CASE("flip indicator") {
    const auto cls = FlipConfig::classification();
    const Label base = horizontal().predict_one(v2(0, 1.0));
    CHECK(flip_indicator(horizontal(), base, v2(0, 1.0), cls) == 0);
    CHECK(flip_indicator(horizontal(), base, v2(0, 0.2), cls) == 1);

    const LinearRegressor identity((Eigen::VectorXd(1) << 1).finished(), 0.0);
    const auto reg = FlipConfig::regression(1.0);
    const Label y0 = identity.predict_one(FeatureVector::Zero(1));
    CHECK(flip_indicator(identity, y0, FeatureVector::Constant(1, 0.5), reg) == 0);
    CHECK(flip_indicator(identity, y0, FeatureVector::Constant(1, 1.0), reg) == 0); // exactly gamma
    CHECK(flip_indicator(identity, y0, FeatureVector::Constant(1, -1.5), reg) == 1);
    CHECK_THROWS_AS(FlipConfig::regression(0.0), UsageError);
    CHECK_THROWS(flip_indicator(Label::classification("a"), Label::classification("b"), reg));
}

TEST_CASE("estimate examples") {
    const auto iso = PerturbationModel::isotropic(2, 1.0);
    const auto cls = FlipConfig::classification();

    SECTION("zero scale never flips") {
        const PerturbationModel still(2, {}, CovarianceSpec::identity(2, 0.0));
        const auto e = estimate(horizontal(), v2(0, 0.5), still, 1000, SampleStream{1, 0, 0}, cls);
        CHECK(e.p_r == 1.0);
        CHECK(e.flips == 0);
        REQUIRE(e.rule_of_three);
        CHECK(*e.rule_of_three == 3.0 / 1000.0);
    }
    SECTION("point on the boundary") {
        const auto e = estimate(horizontal(), v2(0, 0.5), iso, 10000, SampleStream{2, 0, 0}, cls);
        CHECK_THAT(e.p_r, WithinAbs(0.5, 0.015));
    }
    SECTION("signed distance one from a linear boundary") {
        const auto e = estimate(horizontal(), v2(0, 1.5), iso, 10000, SampleStream{3, 0, 0}, cls);
        CHECK_THAT(e.p_r, WithinAbs(0.8413447460685429, 0.015));
    }
    SECTION("inside the corner") {
        const CornerClassifier corner(1, 2);
        const auto e = estimate(corner, v2(2, 3), iso, 10000, SampleStream{4, 0, 0}, cls);
        CHECK_THAT(e.p_r, WithinAbs(0.707860981737141, 0.015));
    }
}

TEST_CASE("estimate invariants") {
    const auto iso = PerturbationModel::isotropic(2, 0.7);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = std::size_t(1 + trial * 397);
        const auto e = estimate(horizontal(), v2(u(rng), u(rng)), iso, n, SampleStream{5, std::uint64_t(trial), 0},
                                FlipConfig::classification());
        CHECK(e.p_r + e.p_flip == 1.0);
        CHECK(e.p_r >= 0.0);
        CHECK(e.p_r <= 1.0);
        CHECK(e.stderr_ >= 0.0);
        CHECK(e.n_samples == n);
        CHECK(e.p_flip == double(e.flips) / double(n));
        CHECK_THAT(e.stderr_, WithinAbs(std::sqrt(e.p_flip * (1 - e.p_flip) / double(n)), 1e-15));
        CHECK(e.rule_of_three.has_value() == (e.flips == 0 || e.flips == n));
    }
    CHECK_THROWS_AS(estimate(horizontal(), v2(0, 0), iso, 0, SampleStream{}, FlipConfig::classification()), UsageError);
    CHECK_THROWS(estimate(horizontal(), FeatureVector::Zero(3), iso, 10, SampleStream{}, FlipConfig::classification()));
}

TEST_CASE("dataset estimation") {
    const auto iso = PerturbationModel::isotropic(2, 1.0);
    const auto cls = FlipConfig::classification();
    SampleMatrix pts(6, 2);
    pts << 0, 0.5, 0, 1.5, 2, -1, -1, 0.4, 3, 0.6, 0, 2.5;

    SECTION("constant classifier never flips") {
        const ConstantClassifier f(2, "c");
        const auto r = estimate_dataset(f, pts.topRows(3), {}, iso, 500, 1, cls);
        REQUIRE(r.estimates.size() == 3);
        for (const auto& e : r.estimates) CHECK(e.p_r == 1.0);
    }
    SECTION("worker count does not change results") {
        const auto a = estimate_dataset(horizontal(), pts, {}, iso, 5000, 99, cls, 1);
        const auto b = estimate_dataset(horizontal(), pts, {}, iso, 5000, 99, cls, 8);
        REQUIRE(a.estimates.size() == b.estimates.size());
        for (std::size_t i = 0; i < a.estimates.size(); ++i) {
            CHECK(a.estimates[i].flips == b.estimates[i].flips);
            CHECK(a.estimates[i].p_r == b.estimates[i].p_r);
        }
    }
    SECTION("shuffled order with preserved indices") {
        const std::vector<std::size_t> order{4, 1, 5, 0, 3, 2};
        SampleMatrix shuffled(6, 2);
        for (std::size_t r = 0; r < 6; ++r) shuffled.row(Eigen::Index(r)) = pts.row(Eigen::Index(order[r]));
        const auto a = estimate_dataset(horizontal(), pts, {}, iso, 3000, 5, cls, 3);
        const auto b = estimate_dataset(horizontal(), shuffled, order, iso, 3000, 5, cls, 2);
        for (std::size_t r = 0; r < 6; ++r) {
            CHECK(b.estimates[r].point_index == order[r]);
            CHECK(b.estimates[r].flips == a.estimates[order[r]].flips);
        }
    }
    SECTION("sample blocks do not repeat") {
        // N spans several blocks; a block reused by mistake would show up as
        // far too little spread across seeds.
        const std::size_t n = 5 * kSampleBlock + 17;
        const auto e = estimate_dataset(horizontal(), pts.topRows(1), {}, iso, n, 3, cls).estimates[0];
        CHECK_THAT(e.p_r, WithinAbs(0.5, 4 * std::sqrt(0.25 / double(n))));
    }
    SECTION("failing points are reported, the rest still estimated") {
        const FunctionClassifier f(2, [](const Eigen::Ref<const Eigen::RowVectorXd>& x) {
            if (x(0) > 2.5) throw Error("refused");
            return Label::classification("a");
        });
        const auto r = estimate_dataset(f, pts, {}, iso, 100, 1, cls);
        CHECK(r.failures.size() >= 1);
        CHECK(r.estimates.size() + r.failures.size() == 6);
        for (const auto& fail : r.failures) CHECK(fail.message.find("refused") != std::string::npos);
    }
    SECTION("every point failing throws") {
        const FunctionClassifier f(2, [](const Eigen::Ref<const Eigen::RowVectorXd>&) -> Label { throw Error("no"); });
        CHECK_THROWS(estimate_dataset(f, pts, {}, iso, 100, 1, cls));
    }
}

TEST_CASE("convergence check") {
    const auto iso = PerturbationModel::isotropic(2, 1.0);
    SampleMatrix pts(5, 2);
    pts << 0, 0.5, 0, 1.0, 0, 1.5, 0, 2.0, 0, 3.0;

    SECTION("identical seeds correlate exactly") {
        const auto r = convergence_check(horizontal(), pts, {}, iso, 2000, {7, 7}, FlipConfig::classification());
        REQUIRE(r.pearson[0][1]);
        CHECK(*r.pearson[0][1] == 1.0);
        CHECK(*r.spearman[0][1] == 1.0);
        CHECK(*r.min_pearson == 1.0);
    }
    SECTION("constant classifier is degenerate") {
        const ConstantClassifier f(2, "c");
        const auto r = convergence_check(f, pts, {}, iso, 100, {1, 2, 3}, FlipConfig::classification());
        CHECK(r.degenerate_runs.size() == 3);
        CHECK_FALSE(r.min_pearson);
    }
    SECTION("derived seeds are distinct") {
        const auto s = derive_seeds(42);
        CHECK(s.size() == 20);
        CHECK(std::set<std::uint64_t>(s.begin(), s.end()).size() == 20);
        CHECK(derive_seeds(42) == s);
    }
    CHECK_THROWS_AS(convergence_check(horizontal(), pts.topRows(2), {}, iso, 10, {1, 2}, FlipConfig::classification()),
                    UsageError);
    CHECK_THROWS_AS(convergence_check(horizontal(), pts, {}, iso, 10, {1}, FlipConfig::classification()), UsageError);
}
