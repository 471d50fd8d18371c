#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <variant>
#include <vector>

namespace rwr::analytic {

/// Axis-aligned Gaussian uncertainty in two dimensions.
struct GaussianUncertainty2D {
    double sigma1 = 1.0;
    double sigma2 = 1.0;

    GaussianUncertainty2D(double s1, double s2);
};

/// Label 1 iff w1*x1 + w2*x2 + b > 1/2.
struct LinearCase {
    double w1, w2, b;
};

/// Label 1 iff x1 > a1 and x2 > a2.
struct CornerCase {
    double a1, a2;
};

using AnalyticCase = std::variant<LinearCase, CornerCase>;

/// P_r = Φ(|w·x + b - 1/2| / σ_proj), σ_proj² = w1²σ1² + w2²σ2².
/// With σ_proj = 0 the result is 1 off the boundary and 1/2 on it.
double exact_pr_linear(double w1, double w2, double b, double x1, double x2, const GaussianUncertainty2D& u);

/// General covariance form: σ_proj² = wᵀΣw. Any dimension.
double exact_pr_linear(const Eigen::VectorXd& w, double b, const Eigen::VectorXd& x, const Eigen::MatrixXd& cov);

/// Corner classifier: Φ(d1)Φ(d2) inside the 1-region, 1 - Φ(d1)Φ(d2)
/// elsewhere, with d_i = (x_i - a_i)/σ_i. Points on the boundary are in the
/// 0-region.
double exact_pr_corner(double a1, double a2, double x1, double x2, const GaussianUncertainty2D& u);

/// Euclidean distance from (x1, x2) to the decision boundary.
double exact_dcf(const AnalyticCase& c, double x1, double x2);

double exact_pr(const AnalyticCase& c, double x1, double x2, const GaussianUncertainty2D& u);

struct GridCell {
    double x1, x2, p_r, d_cf;
};

/// Row-major grid: x2 varies slowest (one row per x2 value), x1 fastest.
/// Both axes are inclusive linspaces with `resolution` points.
std::vector<GridCell> grid_eval(const AnalyticCase& c, const GaussianUncertainty2D& u, double lo1, double hi1, double lo2,
                                double hi2, std::size_t resolution);

/// Two points around the corner classifier at the origin (σ = 1) with equal
/// real-world robustness but different counterfactual distances.
struct ScenarioPoints {
    Eigen::Vector2d a; // (t, t)
    Eigen::Vector2d b; // (s, far)
    double p_r_a, p_r_b;
    double d_cf_a, d_cf_b;
};

/// B = (s, far) with s chosen so that Φ(s)Φ(far) = Φ(t)², i.e. both points
/// have the same analytic P_r. far must be >= 6.
ScenarioPoints scenario_points(double t, double far = 8.0);

} // namespace rwr::analytic
