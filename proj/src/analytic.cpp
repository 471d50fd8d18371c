#include "rwrobust/analytic.hpp"

#include "rwrobust/errors.hpp"
#include "rwrobust/stats.hpp"

#include <cmath>

namespace rwr::analytic {

GaussianUncertainty2D::GaussianUncertainty2D(double s1, double s2) : sigma1(s1), sigma2(s2) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) throw UsageError("Gaussian uncertainty needs positive standard deviations");
}

namespace {

double pr_from_margin(double margin, double sigma_proj) {
    if (margin == 0.0) return 0.5;
    if (sigma_proj == 0.0) return 1.0;
    if (std::isinf(sigma_proj)) return 0.5;
    return normal_cdf(std::abs(margin) / sigma_proj);
}

} // namespace

double exact_pr_linear(double w1, double w2, double b, double x1, double x2, const GaussianUncertainty2D& u) {
    if (w1 == 0.0 && w2 == 0.0) throw UsageError("linear case needs (w1, w2) != (0, 0)");
    const double margin = w1 * x1 + w2 * x2 + b - 0.5;
    const double sigma_proj = std::hypot(w1 * u.sigma1, w2 * u.sigma2);
    return pr_from_margin(margin, sigma_proj);
}

double exact_pr_linear(const Eigen::VectorXd& w, double b, const Eigen::VectorXd& x, const Eigen::MatrixXd& cov) {
    if (w.size() != x.size() || cov.rows() != w.size() || cov.cols() != w.size())
        throw LayoutError("exact_pr_linear: dimension mismatch");
    if (!(w.norm() > 0.0)) throw UsageError("linear case needs a nonzero weight vector");
    const double margin = w.dot(x) + b - 0.5;
    const double var = w.dot(cov * w);
    return pr_from_margin(margin, std::sqrt(std::max(var, 0.0)));
}

double exact_pr_corner(double a1, double a2, double x1, double x2, const GaussianUncertainty2D& u) {
    const double stay_in_one = normal_cdf((x1 - a1) / u.sigma1) * normal_cdf((x2 - a2) / u.sigma2);
    const bool label_one = x1 > a1 && x2 > a2;
    return label_one ? stay_in_one : 1.0 - stay_in_one;
}

double exact_dcf(const AnalyticCase& c, double x1, double x2) {
    if (const auto* lin = std::get_if<LinearCase>(&c)) {
        if (lin->w1 == 0.0 && lin->w2 == 0.0) throw UsageError("linear case needs (w1, w2) != (0, 0)");
        return std::abs(lin->w1 * x1 + lin->w2 * x2 + lin->b - 0.5) / std::hypot(lin->w1, lin->w2);
    }
    const auto& corner = std::get<CornerCase>(c);
    const double d1 = x1 - corner.a1, d2 = x2 - corner.a2;
    if (d1 >= 0.0 && d2 >= 0.0) return std::min(d1, d2);
    if (d1 >= 0.0) return -d2; // below the horizontal edge
    if (d2 >= 0.0) return -d1; // left of the vertical edge
    return std::hypot(d1, d2); // diagonal quadrant: nearest is the corner
}

double exact_pr(const AnalyticCase& c, double x1, double x2, const GaussianUncertainty2D& u) {
    if (const auto* lin = std::get_if<LinearCase>(&c)) return exact_pr_linear(lin->w1, lin->w2, lin->b, x1, x2, u);
    const auto& corner = std::get<CornerCase>(c);
    return exact_pr_corner(corner.a1, corner.a2, x1, x2, u);
}

std::vector<GridCell> grid_eval(const AnalyticCase& c, const GaussianUncertainty2D& u, double lo1, double hi1, double lo2,
                                double hi2, std::size_t resolution) {
    if (resolution < 2) throw UsageError("grid resolution must be >= 2");
    if (!(hi1 > lo1) || !(hi2 > lo2)) throw UsageError("grid ranges must be increasing");
    const auto at = [resolution](double lo, double hi, std::size_t i) {
        return i + 1 == resolution ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
    };
    std::vector<GridCell> out;
    out.reserve(resolution * resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        const double x2 = at(lo2, hi2, j);
        for (std::size_t i = 0; i < resolution; ++i) {
            const double x1 = at(lo1, hi1, i);
            out.push_back({x1, x2, exact_pr(c, x1, x2, u), exact_dcf(c, x1, x2)});
        }
    }
    return out;
}

ScenarioPoints scenario_points(double t, double far) {
    if (!(t > 0.0)) throw UsageError("scenario_points: t must be positive");
    if (!(far >= 6.0)) throw UsageError("scenario_points: the far coordinate must be >= 6 sigma");
    const GaussianUncertainty2D unit(1.0, 1.0);
    const double target = normal_cdf(t) * normal_cdf(t);
    const double s = normal_quantile(target / normal_cdf(far));
    ScenarioPoints sp;
    sp.a = {t, t};
    sp.b = {s, far};
    const CornerCase corner{0.0, 0.0};
    sp.p_r_a = exact_pr_corner(0.0, 0.0, t, t, unit);
    sp.p_r_b = exact_pr_corner(0.0, 0.0, s, far, unit);
    sp.d_cf_a = exact_dcf(corner, t, t);
    sp.d_cf_b = exact_dcf(corner, s, far);
    return sp;
}

} // namespace rwr::analytic
