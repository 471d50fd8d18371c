#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

namespace rwr {

using FeatureVector = Eigen::VectorXd;
/// Rows are samples, columns are features.
using SampleMatrix = Eigen::MatrixXd;

/// A hard prediction. Classification compares tokens by exact equality;
/// regression models also carry the parsed numeric value.
struct Label {
    std::string token;
    double value = std::numeric_limits<double>::quiet_NaN();

    static Label classification(std::string token);
    static Label regression(double value);

    bool has_value() const noexcept { return !std::isnan(value); }
    friend bool operator==(const Label& a, const Label& b) { return a.token == b.token; }
};

/// True when the token contains no whitespace, commas, or newlines.
bool is_valid_token(const std::string& token) noexcept;

/// Shortest decimal representation that round-trips a double ("%.17g").
std::string format_exact(double v);
/// Nine significant digits ("%.9g"), the precision of every report CSV.
std::string format_report(double v);

} // namespace rwr
