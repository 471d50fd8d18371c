#pragma once

#include "rwrobust/rng.hpp"
#include "rwrobust/types.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rwr {

struct FeatureKind {
    /// 0 for continuous features, otherwise the number of categories m.
    std::size_t categories = 0;
    bool is_categorical() const noexcept { return categories > 0; }
};

struct Dataset {
    SampleMatrix features;
    /// Empty when the data has no label column.
    std::vector<std::string> labels;
    std::vector<FeatureKind> kinds;
    std::vector<std::string> names;
    /// Row index in the original file for every row; survives shuffling and splitting.
    std::vector<std::size_t> index;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(features.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(features.cols()); }
    bool has_labels() const noexcept { return !labels.empty(); }
    std::vector<std::size_t> categorical_features() const;
    std::vector<std::size_t> continuous_features() const;

    /// Rows in the given order (indices into this dataset).
    Dataset subset(const std::vector<std::size_t>& rows) const;
    /// Checks row/label/index counts and categorical value ranges.
    void validate() const;
};

/// {"label": "col", "categorical": {"col": m}, "ignore": ["col", ...]}.
/// "label" may be omitted for unlabeled point files.
struct Schema {
    std::optional<std::string> label;
    std::map<std::string, std::size_t> categorical;
    std::vector<std::string> ignore;

    static Schema from_json_text(const std::string& text);
    static Schema load(const std::filesystem::path& path);
};

/// Header row required; every non-label, non-ignored column is a feature.
/// Errors name the 1-based file line and column.
Dataset parse_csv(const std::string& text, const Schema& schema);
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);

/// Rows whose label is one of `keep`, e.g. to reduce a multi-class dataset
/// to a binary one.
Dataset keep_labels(const Dataset& data, const std::vector<std::string>& keep);

struct Split {
    Dataset train;
    Dataset test;
};

/// Seeded uniform shuffle, then floor(train_fraction * rows) rows to train and
/// the remainder to test. Both parts are nonempty.
Split split(const Dataset& data, double train_fraction, const SampleStream& stream);

struct NormalizationParams {
    /// Per feature; categorical and constant columns have mean 0, std 1.
    std::vector<double> mean;
    std::vector<double> stddev;
    /// Continuous columns with zero spread, left unscaled.
    std::vector<std::size_t> constant_columns;
};

/// Mean and sample standard deviation (n-1 denominator) of every continuous
/// column. Needs at least 2 rows.
NormalizationParams fit_normalizer(const Dataset& train);
Dataset apply_normalizer(const NormalizationParams& params, const Dataset& data);

} // namespace rwr
