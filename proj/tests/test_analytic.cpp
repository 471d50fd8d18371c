#include "rwrobust/analytic.hpp"
#include "rwrobust/stats.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace rwr;
using namespace rwr::analytic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Values from scipy.stats.norm.
constexpr double kPhi1 = 0.8413447460685429;
constexpr double kPhi1Squared = 0.707860981737141;

const GaussianUncertainty2D unit(1.0, 1.0);

} // namespace

TEST_CASE("normal cdf and quantile") {
    CHECK_THAT(normal_cdf(1.0), WithinAbs(kPhi1, 1e-15));
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK_THAT(normal_cdf(-8.0), WithinRel(6.22096057427174e-16, 1e-10));
    CHECK_THAT(normal_quantile(kPhi1), WithinAbs(1.0, 1e-12));
    CHECK_THAT(normal_quantile(0.025), WithinAbs(-1.959963984540054, 1e-12));
}

TEST_CASE("linear closed form") {
    CHECK(exact_pr_linear(0, 1, 0, 123.0, 0.5, unit) == 0.5);
    CHECK_THAT(exact_pr_linear(0, 1, 0, 0, 1.5, unit), WithinAbs(kPhi1, 1e-12));
    CHECK_THAT(exact_pr_linear(0, 1, 0, 0, -0.5, unit), WithinAbs(kPhi1, 1e-12));
    CHECK_THAT(exact_pr_linear(0, 1, 0, 0, 1.5, GaussianUncertainty2D(1, 1e12)), WithinAbs(0.5, 1e-9));
    CHECK(exact_pr_linear(0, 1, 0, 0, 1.5, GaussianUncertainty2D(1, 1e-300)) == 1.0);

    // Oblique weights and unequal sigmas against the general form.
    const Eigen::Vector2d w(0.6, -1.3), x(0.2, 0.9);
    Eigen::Matrix2d cov;
    cov << 0.25, 0, 0, 4.0;
    CHECK_THAT(exact_pr_linear(0.6, -1.3, 0.1, 0.2, 0.9, GaussianUncertainty2D(0.5, 2.0)),
               WithinAbs(exact_pr_linear(w, 0.1, x, cov), 1e-15));
}

TEST_CASE("general linear form handles correlated covariance") {
    // P_r = Φ(|w·x + b - 1/2| / sqrt(wᵀΣw)); here wᵀΣw = 1 + 1 + 2*0.5 = 3.
    Eigen::Vector2d w(1, 1), x(1, 0.5);
    Eigen::Matrix2d cov;
    cov << 1, 0.5, 0.5, 1;
    CHECK_THAT(exact_pr_linear(w, 0.0, x, cov), WithinAbs(normal_cdf(1.0 / std::sqrt(3.0)), 1e-15));
}

TEST_CASE("corner closed form") {
    CHECK_THAT(exact_pr_corner(1, 2, 1, 2, unit), WithinAbs(0.75, 1e-15));
    CHECK_THAT(exact_pr_corner(1, 2, 2, 3, unit), WithinAbs(kPhi1Squared, 1e-12));
    CHECK_THAT(exact_pr_corner(1, 2, 1 - 10, 2 - 10, unit), WithinAbs(1.0, 1e-12));
    // Side region: x1 > a1, x2 < a2.
    CHECK_THAT(exact_pr_corner(0, 0, 1, -1, unit), WithinAbs(1 - kPhi1 * (1 - kPhi1), 1e-12));
}

TEST_CASE("boundary distance") {
    CHECK(exact_dcf(LinearCase{0, 1, 0}, 5, 0.5) == 0.0);
    CHECK_THAT(exact_dcf(LinearCase{0, 1, 0}, 5, 1.5), WithinAbs(1.0, 1e-15));
    CHECK_THAT(exact_dcf(LinearCase{3, 4, 0}, 0, 0), WithinAbs(0.1, 1e-15));
    CHECK_THAT(exact_dcf(CornerCase{1, 2}, 3, 2.4), WithinAbs(0.4, 1e-12));
    CHECK_THAT(exact_dcf(CornerCase{1, 2}, 0, 0), WithinAbs(std::sqrt(5.0), 1e-15));
    CHECK_THAT(exact_dcf(CornerCase{1, 2}, 1, 5), WithinAbs(0.0, 1e-15));
    CHECK_THAT(exact_dcf(CornerCase{1, 2}, 3, -1), WithinAbs(3.0, 1e-15));
    CHECK_THAT(exact_dcf(CornerCase{1, 2}, -4, 7), WithinAbs(5.0, 1e-15));
}

TEST_CASE("grid layout and symmetry") {
    const auto g = grid_eval(LinearCase{0, 1, 0}, unit, -1, 2, -1, 2, 2);
    REQUIRE(g.size() == 4);
    CHECK(g[0].x1 == -1);
    CHECK(g[1].x1 == 2);
    CHECK(g[0].x2 == -1);
    CHECK(g[2].x2 == 2);
    // -1 and 2 sit 1.5 on either side of x2 = 0.5: equal P_r, which is the
    // reflection symmetry of the Gaussian about the boundary.
    CHECK_THAT(g[0].p_r, WithinAbs(g[2].p_r, 1e-15));

    const auto rows = grid_eval(LinearCase{0, 1, 0}, unit, -3, 3, -3, 3, 7);
    for (std::size_t r = 0; r < 7; ++r)
        for (std::size_t c = 1; c < 7; ++c) CHECK(rows[r * 7 + c].p_r == rows[r * 7].p_r);
    CHECK(grid_eval(CornerCase{1, 2}, unit, -3, 3, -3, 3, 50).size() == 2500);
}

TEST_CASE("corner is less robust than a flat boundary at equal distance") {
    for (double t : {0.1, 0.5, 1.0, 2.0, 3.0})
        CHECK(exact_pr_corner(0, 0, t, t, unit) < exact_pr_linear(0, 1, 0.5, 0, t, unit));
}

TEST_CASE("scenario points") {
    const auto p1 = scenario_points(1.0);
    CHECK_THAT(p1.b(0), WithinAbs(0.5471465751136482, 1e-9));
    CHECK(p1.b(1) == 8.0);
    CHECK_THAT(p1.p_r_a, WithinAbs(kPhi1Squared, 1e-12));
    CHECK_THAT(p1.p_r_b, WithinAbs(p1.p_r_a, 1e-14));
    CHECK_THAT(p1.d_cf_a / p1.d_cf_b, WithinAbs(1.8276638207820077, 1e-8));

    const auto p2 = scenario_points(2.0);
    CHECK_THAT(p2.p_r_a, WithinAbs(0.9550173046073012, 1e-12));
    CHECK_THAT(p2.d_cf_a, WithinAbs(2.0, 1e-15));
    CHECK_THAT(p2.d_cf_b, WithinAbs(1.6955803020245541, 1e-9));

    double prev = 10;
    for (double t : {1.0, 2.0, 3.0, 4.0, 5.0}) {
        const auto p = scenario_points(t);
        const double ratio = p.d_cf_a / p.d_cf_b;
        CHECK(ratio < prev);
        CHECK(ratio > 1.0);
        prev = ratio;
    }
    // Far from the corner the two distances agree, though only slowly.
    CHECK(prev < 1.03);
}

TEST_CASE("analytic corner agrees with independent quadrature") {
    // P(x + s z > 0) as a Simpson integral of the standard normal density
    // from -x/s to 12, multiplied across axes.
    const auto tail = [](double cut) {
        const int n = 20000;
        const double hi = 12.0, h = (hi - cut) / n;
        const auto dens = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI); };
        double sum = dens(cut) + dens(hi);
        for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * dens(cut + i * h);
        return sum * h / 3;
    };
    const auto quad = [&](double x1, double x2, double s1, double s2) {
        const double p1 = tail(-x1 / s1) * tail(-x2 / s2);
        return (x1 > 0 && x2 > 0) ? p1 : 1 - p1;
    };
    for (auto [x1, x2, s1, s2] : std::vector<std::array<double, 4>>{{1, 1, 1, 1}, {-0.5, 2, 0.5, 2}, {0.3, -0.2, 1, 3}})
        CHECK_THAT(exact_pr_corner(0, 0, x1, x2, GaussianUncertainty2D(s1, s2)), WithinAbs(quad(x1, x2, s1, s2), 1e-10));
}
