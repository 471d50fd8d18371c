#pragma once

#include "rwrobust/classifier.hpp"
#include "rwrobust/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rwr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct RunConfig {
    std::string subcommand;
    std::string model;
    std::string data_path;
    std::string schema_path;
    std::string perturb_path;
    std::string train_path;
    std::optional<double> split_fraction;
    bool normalize = false;
    std::vector<std::string> keep_labels;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 0;
    std::string out_path;
    std::size_t workers = 1;
    std::optional<double> gamma;
    double timeout_seconds = 30.0;
    std::size_t batch_size = 4096;

    // compare / sweep
    std::size_t search_dirs = 256;
    double max_radius = 10.0;
    double bisection_tol = 1e-6;
    bool no_axes = false;
    bool no_refine = false;

    // sweep
    std::vector<double> scales;

    // check-convergence
    std::size_t repeats = 20;

    // analytic
    std::string analytic_case;
    std::vector<double> sigma{1.0, 1.0};
    std::string grid = "-3:3:50";
};

/// Builds a classifier from a descriptor:
///   builtin:linear:w=W1,W2,...:b=B      label 1 iff w·x + b > 1/2
///   builtin:corner:a=A1,A2[:features=I,J]
///   builtin:const:label=TOKEN
///   builtin:linreg:w=W1,...:b=B         regression output w·x + b
///   builtin:knn:k=K                     needs training data
///   builtin:tree:depth=D                needs training data
///   external:COMMAND                    line protocol over the child's stdio
std::unique_ptr<Classifier> make_model(const std::string& descriptor, std::size_t feature_count, const Dataset* train,
                                       const RunConfig& cfg);

/// Parses argv, runs the subcommand, and returns the process exit status
/// (0 ok, 1 usage error, 2 runtime error). Diagnostics go to `err`,
/// summaries and stdout reports to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rwr::cli
