#include "rwrobust/perturbation_config.hpp"

#include "rwrobust/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rwr {

namespace {

Eigen::MatrixXd to_matrix(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ParseError(what + " must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError(what + " has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) throw ParseError(what + " has a non-numeric entry");
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::vector<CovarianceSpec> parse_per_point_covariances(const std::string& text, std::size_t n, double scale) {
    std::vector<CovarianceSpec> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    const auto dim = static_cast<Eigen::Index>(n);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> values;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            double v = 0.0;
            const auto b = cell.find_first_not_of(' '), e = cell.find_last_not_of(' ');
            const std::string t = b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
                throw ParseError("non-numeric covariance entry '" + cell + "'", line_no);
            values.push_back(v);
        }
        if (values.size() != n * n)
            throw ParseError("expected " + std::to_string(n * n) + " covariance entries, got " + std::to_string(values.size()), line_no);
        Eigen::MatrixXd m(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = values[static_cast<std::size_t>(r * dim + c)];
        try {
            out.emplace_back(std::move(m), scale);
        } catch (const InvariantViolation& e) {
            throw ParseError(std::string("invalid covariance: ") + e.what(), line_no);
        }
    }
    if (out.empty()) throw ParseError("per-point covariance file has no rows");
    return out;
}

PerturbationModel perturbation_from_json(const std::string& text, std::size_t feature_count,
                                         const std::vector<std::size_t>& categorical_features,
                                         const std::filesystem::path& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("perturbation config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("perturbation config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (key != "continuous" && key != "categorical" && key != "per_point_covariances")
            throw ParseError("unknown perturbation config key '" + key + "'");

    if (categorical_features.size() > feature_count) throw LayoutError("more categorical features than features");
    const std::size_t n_cont = feature_count - categorical_features.size();
    std::optional<CovarianceSpec> gaussian;
    std::vector<CovarianceSpec> per_point;
    std::vector<CategoricalTransition> transitions;

    try {
        double scale = 1.0;
        if (j.contains("continuous")) {
            const auto& c = j.at("continuous");
            for (const auto& [key, value] : c.items())
                if (key != "covariance" && key != "scale" && key != "random" && key != "normalize_trace")
                    throw ParseError("unknown key 'continuous." + key + "'");
            if (c.contains("scale")) scale = c.at("scale").get<double>();
            const bool normalize = c.value("normalize_trace", false);
            if (c.contains("random") && c.contains("covariance"))
                throw ParseError("'continuous' takes either 'covariance' or 'random', not both");
            if (c.contains("random")) {
                const auto seed = c.at("random").at("seed").get<std::uint64_t>();
                gaussian = make_random_covariance(n_cont, SampleStream{seed, 0, 0}).with_scale(scale);
            } else if (c.contains("covariance")) {
                const auto& cov = c.at("covariance");
                Eigen::MatrixXd m = cov.is_string() && cov.get<std::string>() == "identity"
                                        ? Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_cont), static_cast<Eigen::Index>(n_cont))
                                        : to_matrix(cov, "continuous.covariance");
                CovarianceSpec spec(std::move(m), scale);
                gaussian = normalize ? trace_normalize(spec) : spec;
            }
        }
        if (j.contains("per_point_covariances")) {
            if (gaussian) throw ParseError("'per_point_covariances' replaces the global covariance; give only one");
            std::filesystem::path p = j.at("per_point_covariances").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            per_point = parse_per_point_covariances(read_text(p), n_cont, scale);
        }
        if (j.contains("categorical")) {
            for (const auto& entry : j.at("categorical")) {
                const auto feature = entry.at("feature").get<std::size_t>();
                transitions.emplace_back(feature, to_matrix(entry.at("matrix"), "categorical.matrix"));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("perturbation config has a missing or mistyped field: ") + e.what());
    }

    for (const auto& t : transitions) {
        std::size_t pos = 0;
        for (; pos < categorical_features.size(); ++pos)
            if (categorical_features[pos] == t.feature()) break;
        if (pos == categorical_features.size())
            throw LayoutError("transition matrix given for feature " + std::to_string(t.feature()) + ", which is not categorical");
    }
    return PerturbationModel(feature_count, categorical_features, std::move(gaussian), std::move(transitions),
                             std::move(per_point));
}

PerturbationModel load_perturbation(const std::filesystem::path& path, std::size_t feature_count,
                                    const std::vector<std::size_t>& categorical_features) {
    return perturbation_from_json(read_text(path), feature_count, categorical_features, path.parent_path());
}

} // namespace rwr
