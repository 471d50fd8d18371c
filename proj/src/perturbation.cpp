#include "rwrobust/perturbation.hpp"

#include "rwrobust/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace rwr {

namespace {

void require_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw InvariantViolation("covariance matrix is not square");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            if (m(i, j) != m(j, i)) {
                throw InvariantViolation("covariance matrix is not symmetric at (" + std::to_string(i) + "," +
                                         std::to_string(j) + ")");
            }
        }
    }
}

} // namespace

CovarianceSpec::CovarianceSpec(Eigen::MatrixXd matrix, double scale)
    : matrix_(std::move(matrix)), scale_(scale) {
    if (matrix_.rows() == 0) throw InvariantViolation("covariance matrix is empty");
    require_symmetric(matrix_);
    if (!matrix_.allFinite()) throw InvariantViolation("covariance matrix has non-finite entries");
    if (!std::isfinite(scale_) || scale_ < 0.0) throw InvariantViolation("covariance scale must be finite and >= 0");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix_, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    const double largest = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
    if (ev.minCoeff() < -kPsdTolerance * largest) {
        throw InvariantViolation("covariance matrix is not positive semi-definite (min eigenvalue " +
                                 std::to_string(ev.minCoeff()) + ")");
    }
}

CovarianceSpec CovarianceSpec::identity(std::size_t n, double scale) {
    const auto dim = static_cast<Eigen::Index>(n);
    return CovarianceSpec(Eigen::MatrixXd::Identity(dim, dim), scale);
}

CovarianceSpec make_random_covariance(std::size_t n, const SampleStream& stream) {
    if (n == 0) throw UsageError("make_random_covariance: dimension must be >= 1");
    auto engine = stream.engine();
    std::normal_distribution<double> normal;
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = normal(engine);
    Eigen::MatrixXd c = a.transpose() * a;
    // Summation order inside the product may differ between (i,j) and (j,i).
    Eigen::MatrixXd sym = 0.5 * (c + c.transpose());
    return trace_normalize(CovarianceSpec(std::move(sym)));
}

CovarianceSpec trace_normalize(const CovarianceSpec& c) {
    const double tr = c.trace();
    if (!(tr > 0.0)) throw DegenerateCovarianceError("cannot trace-normalize a covariance with trace " + std::to_string(tr));
    return CovarianceSpec(c.matrix() / tr, c.scale());
}

Eigen::MatrixXd factorize(const CovarianceSpec& c) {
    const Eigen::MatrixXd& m = c.matrix();
    require_symmetric(m);
    const Eigen::Index n = m.rows();
    const Eigen::MatrixXd target = c.scale() * m;
    const double tr = target.trace();
    if (tr == 0.0) return Eigen::MatrixXd::Zero(n, n);

    Eigen::LLT<Eigen::MatrixXd> llt(target);
    if (llt.info() == Eigen::Success) return llt.matrixL();

    const double jitter = 1e-12 * tr;
    Eigen::LLT<Eigen::MatrixXd> jittered(target + jitter * Eigen::MatrixXd::Identity(n, n));
    if (jittered.info() == Eigen::Success) return jittered.matrixL();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(target);
    Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * roots.asDiagonal();
}

CategoricalTransition::CategoricalTransition(std::size_t feature, Eigen::MatrixXd matrix)
    : feature_(feature), matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
        throw InvariantViolation("transition matrix for feature " + std::to_string(feature) + " must be square and non-empty");
    cumulative_ = matrix_;
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
        double sum = 0.0;
        for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
            const double p = matrix_(r, c);
            if (!(p >= 0.0 && p <= 1.0))
                throw InvariantViolation("transition matrix for feature " + std::to_string(feature) + " has entry outside [0,1]");
            sum += p;
            cumulative_(r, c) = sum;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw InvariantViolation("transition matrix row " + std::to_string(r) + " for feature " + std::to_string(feature) +
                                     " does not sum to 1");
    }
}

std::size_t CategoricalTransition::draw(std::size_t from, double u) const {
    const auto row = static_cast<Eigen::Index>(from);
    if (row >= cumulative_.rows())
        throw LayoutError("categorical value " + std::to_string(from) + " out of range for feature " + std::to_string(feature_));
    const Eigen::Index m = cumulative_.cols();
    // Row sums may fall a hair short of 1; the last nonzero column absorbs it.
    Eigen::Index last = m - 1;
    while (last > 0 && matrix_(row, last) == 0.0) --last;
    for (Eigen::Index c = 0; c < last; ++c) {
        if (u < cumulative_(row, c)) return static_cast<std::size_t>(c);
    }
    return static_cast<std::size_t>(last);
}

PerturbationModel::PerturbationModel(std::size_t feature_count, std::vector<std::size_t> categorical_features,
                                     std::optional<CovarianceSpec> gaussian,
                                     std::vector<CategoricalTransition> transitions,
                                     std::vector<CovarianceSpec> per_point)
    : feature_count_(feature_count), categorical_(std::move(categorical_features)), gaussian_(std::move(gaussian)),
      transitions_(std::move(transitions)), per_point_(std::move(per_point)) {
    std::sort(categorical_.begin(), categorical_.end());
    if (std::adjacent_find(categorical_.begin(), categorical_.end()) != categorical_.end())
        throw LayoutError("categorical feature listed twice");
    for (std::size_t idx : categorical_) {
        if (idx >= feature_count_) throw LayoutError("categorical feature index " + std::to_string(idx) + " out of range");
    }
    for (std::size_t i = 0; i < feature_count_; ++i) {
        if (!std::binary_search(categorical_.begin(), categorical_.end(), i)) continuous_.push_back(i);
    }
    for (const auto& t : transitions_) {
        if (!std::binary_search(categorical_.begin(), categorical_.end(), t.feature()))
            throw LayoutError("transition matrix given for non-categorical feature " + std::to_string(t.feature()));
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i)
        for (std::size_t j = i + 1; j < transitions_.size(); ++j)
            if (transitions_[i].feature() == transitions_[j].feature())
                throw LayoutError("two transition matrices for feature " + std::to_string(transitions_[i].feature()));

    if (gaussian_ && !per_point_.empty()) throw LayoutError("a model is either global or per-point, not both");
    const auto check_dim = [&](const CovarianceSpec& c) {
        if (c.dimension() != continuous_.size())
            throw LayoutError("covariance is " + std::to_string(c.dimension()) + "x" + std::to_string(c.dimension()) +
                              " but there are " + std::to_string(continuous_.size()) + " continuous features");
    };
    if (gaussian_) {
        check_dim(*gaussian_);
        global_factor_ = factorize(*gaussian_);
    }
    point_factors_.reserve(per_point_.size());
    for (const auto& c : per_point_) {
        check_dim(c);
        point_factors_.push_back(factorize(c));
    }
}

PerturbationModel PerturbationModel::isotropic(std::size_t feature_count, double sigma) {
    return PerturbationModel(feature_count, {}, CovarianceSpec::identity(feature_count, sigma * sigma));
}

const CovarianceSpec* PerturbationModel::covariance_for(std::size_t point_index) const {
    if (gaussian_) return &*gaussian_;
    if (per_point_.empty()) return nullptr;
    if (point_index >= per_point_.size())
        throw LayoutError("no per-point covariance for point " + std::to_string(point_index) + " (have " +
                          std::to_string(per_point_.size()) + ")");
    return &per_point_[point_index];
}

const Eigen::MatrixXd* PerturbationModel::factor_for(std::size_t point_index) const {
    if (global_factor_) return &*global_factor_;
    if (point_factors_.empty()) return nullptr;
    if (point_index >= point_factors_.size())
        throw LayoutError("no per-point covariance for point " + std::to_string(point_index) + " (have " +
                          std::to_string(point_factors_.size()) + ")");
    return &point_factors_[point_index];
}

PerturbationModel PerturbationModel::rescaled(double factor) const {
    std::optional<CovarianceSpec> g;
    if (gaussian_) g = gaussian_->with_scale(gaussian_->scale() * factor);
    std::vector<CovarianceSpec> pp;
    pp.reserve(per_point_.size());
    for (const auto& c : per_point_) pp.push_back(c.with_scale(c.scale() * factor));
    return PerturbationModel(feature_count_, categorical_, std::move(g), transitions_, std::move(pp));
}

SampleMatrix PerturbationModel::sample(const FeatureVector& x_t, const SampleStream& stream, std::size_t k) const {
    if (static_cast<std::size_t>(x_t.size()) != feature_count_)
        throw LayoutError("point has " + std::to_string(x_t.size()) + " features, perturbation model expects " +
                          std::to_string(feature_count_));
    if (k == 0) throw UsageError("sample: k must be >= 1");

    const Eigen::MatrixXd* factor = factor_for(stream.point_index);
    const auto rows = static_cast<Eigen::Index>(k);
    SampleMatrix out = x_t.transpose().replicate(rows, 1);

    auto engine = stream.engine();
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const auto n_cont = static_cast<Eigen::Index>(continuous_.size());
    Eigen::VectorXd z(n_cont);

    for (Eigen::Index r = 0; r < rows; ++r) {
        if (factor) {
            for (Eigen::Index i = 0; i < n_cont; ++i) z(i) = normal(engine);
            const Eigen::VectorXd delta = (*factor) * z;
            for (Eigen::Index i = 0; i < n_cont; ++i) out(r, static_cast<Eigen::Index>(continuous_[i])) += delta(i);
        }
        for (const auto& t : transitions_) {
            const auto col = static_cast<Eigen::Index>(t.feature());
            const double current = x_t(col);
            if (current < 0.0 || current != std::floor(current))
                throw LayoutError("categorical feature " + std::to_string(t.feature()) + " has non-integer value");
            out(r, col) = static_cast<double>(t.draw(static_cast<std::size_t>(current), uniform(engine)));
        }
    }
    return out;
}

} // namespace rwr
