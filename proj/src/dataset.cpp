#include "rwrobust/dataset.hpp"

#include "rwrobust/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace rwr {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::vector<std::size_t> Dataset::categorical_features() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        if (kinds[i].is_categorical()) out.push_back(i);
    return out;
}

std::vector<std::size_t> Dataset::continuous_features() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        if (!kinds[i].is_categorical()) out.push_back(i);
    return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.kinds = kinds;
    out.names = names;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= this->rows()) throw UsageError("subset row out of range");
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
        if (has_labels()) out.labels.push_back(labels[rows[i]]);
        out.index.push_back(index[rows[i]]);
    }
    return out;
}

void Dataset::validate() const {
    if (has_labels() && labels.size() != rows()) throw InvariantViolation("dataset label count differs from row count");
    if (index.size() != rows()) throw InvariantViolation("dataset index count differs from row count");
    if (kinds.size() != cols() || names.size() != cols()) throw InvariantViolation("dataset feature metadata size mismatch");
    for (std::size_t c = 0; c < cols(); ++c) {
        if (!kinds[c].is_categorical()) continue;
        for (std::size_t r = 0; r < rows(); ++r) {
            const double v = features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            if (v < 0.0 || v != std::floor(v) || v >= static_cast<double>(kinds[c].categories))
                throw InvariantViolation("categorical column '" + names[c] + "' has value outside [0, m)");
        }
    }
}

Schema Schema::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("schema must be a JSON object");
    Schema s;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "label") {
                if (!value.is_null()) s.label = value.get<std::string>();
            } else if (key == "categorical") {
                for (const auto& [col, m] : value.items()) {
                    const auto count = m.get<long long>();
                    if (count < 1) throw ParseError("categorical column '" + col + "' needs at least one category");
                    s.categorical[col] = static_cast<std::size_t>(count);
                }
            } else if (key == "ignore") {
                s.ignore = value.get<std::vector<std::string>>();
            } else {
                throw ParseError("unknown schema key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schema has a field of the wrong type: ") + e.what());
    }
    return s;
}

Schema Schema::load(const std::filesystem::path& path) {
    return from_json_text(read_file(path));
}

Dataset parse_csv(const std::string& text, const Schema& schema) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_fields(line);
            break;
        }
    }
    if (header.empty()) throw ParseError("CSV has no header row");
    if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) header.front().erase(0, 3);

    const std::set<std::string> ignored(schema.ignore.begin(), schema.ignore.end());
    std::optional<std::size_t> label_col;
    std::vector<std::size_t> feature_cols;
    Dataset data;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (std::count(header.begin(), header.end(), header[c]) > 1) throw ParseError("duplicate column '" + header[c] + "'", line_no);
        if (schema.label && header[c] == *schema.label) {
            label_col = c;
        } else if (!ignored.count(header[c])) {
            feature_cols.push_back(c);
            data.names.push_back(header[c]);
            const auto it = schema.categorical.find(header[c]);
            data.kinds.push_back({it == schema.categorical.end() ? 0 : it->second});
        }
    }
    if (schema.label && !label_col) throw ParseError("label column '" + *schema.label + "' not found in header");
    for (const auto& [col, m] : schema.categorical)
        if (std::find(data.names.begin(), data.names.end(), col) == data.names.end())
            throw ParseError("categorical column '" + col + "' not found in header");
    if (feature_cols.empty()) throw ParseError("CSV has no feature columns");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()), line_no);
        std::vector<double> row;
        row.reserve(feature_cols.size());
        for (std::size_t f = 0; f < feature_cols.size(); ++f) {
            double v = 0.0;
            if (!parse_double(fields[feature_cols[f]], v))
                throw ParseError("non-numeric value '" + fields[feature_cols[f]] + "'", line_no, data.names[f]);
            if (data.kinds[f].is_categorical() &&
                (v < 0.0 || v != std::floor(v) || v >= static_cast<double>(data.kinds[f].categories)))
                throw ParseError("categorical value '" + fields[feature_cols[f]] + "' outside [0, " +
                                     std::to_string(data.kinds[f].categories) + ")",
                                 line_no, data.names[f]);
            row.push_back(v);
        }
        if (label_col) {
            const std::string& token = fields[*label_col];
            if (!is_valid_token(token)) throw ParseError("invalid label '" + token + "'", line_no, header[*label_col]);
            data.labels.push_back(token);
        }
        rows.push_back(std::move(row));
    }

    data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(feature_cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < feature_cols.size(); ++c)
            data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    data.index.resize(rows.size());
    std::iota(data.index.begin(), data.index.end(), std::size_t{0});
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    try {
        return parse_csv(read_file(path), schema);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Dataset keep_labels(const Dataset& data, const std::vector<std::string>& keep) {
    if (!data.has_labels()) throw UsageError("keep_labels: dataset has no labels");
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < data.rows(); ++r)
        if (std::find(keep.begin(), keep.end(), data.labels[r]) != keep.end()) rows.push_back(r);
    return data.subset(rows);
}

Split split(const Dataset& data, double train_fraction, const SampleStream& stream) {
    if (data.rows() < 2) throw UsageError("split: need at least 2 rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw UsageError("split: train fraction must lie in (0,1)");
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with an explicit draw so the permutation does not depend
    // on the standard library's shuffle implementation.
    auto engine = stream.engine();
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(engine() % (i + 1));
        std::swap(order[i], order[j]);
    }
    auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.rows()) + 1e-9));
    n_train = std::clamp<std::size_t>(n_train, 1, data.rows() - 1);
    const std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return {data.subset(train), data.subset(test)};
}

NormalizationParams fit_normalizer(const Dataset& train) {
    if (train.rows() < 2) throw UsageError("fit_normalizer: need at least 2 rows");
    NormalizationParams p;
    p.mean.assign(train.cols(), 0.0);
    p.stddev.assign(train.cols(), 1.0);
    const double n = static_cast<double>(train.rows());
    for (std::size_t c = 0; c < train.cols(); ++c) {
        if (train.kinds[c].is_categorical()) continue;
        const auto col = train.features.col(static_cast<Eigen::Index>(c));
        const double mean = col.sum() / n;
        const double var = (col.array() - mean).square().sum() / (n - 1.0);
        if (!(var > 0.0)) {
            p.constant_columns.push_back(c);
            continue;
        }
        p.mean[c] = mean;
        p.stddev[c] = std::sqrt(var);
    }
    return p;
}

Dataset apply_normalizer(const NormalizationParams& params, const Dataset& data) {
    if (params.mean.size() != data.cols()) throw LayoutError("normalizer was fitted on a different number of columns");
    Dataset out = data;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        auto col = out.features.col(static_cast<Eigen::Index>(c));
        col = (col.array() - params.mean[c]) / params.stddev[c];
    }
    return out;
}

} // namespace rwr
