#include "rwrobust/cli.hpp"

#include "rwrobust/analytic.hpp"
#include "rwrobust/counterfactual.hpp"
#include "rwrobust/decision_tree.hpp"
#include "rwrobust/errors.hpp"
#include "rwrobust/external_classifier.hpp"
#include "rwrobust/perturbation_config.hpp"
#include "rwrobust/report.hpp"
#include "rwrobust/robustness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace rwr::cli {

namespace {

constexpr const char* kModelHelp =
    "Model descriptor. One of:\n"
    "  builtin:linear:w=W1,W2,...:b=B       label 1 iff w.x + b > 0.5, else 0\n"
    "  builtin:corner:a=A1,A2[:features=I,J] label 1 iff x_I > A1 and x_J > A2\n"
    "  builtin:const:label=TOKEN            always TOKEN\n"
    "  builtin:linreg:w=W1,...:b=B          regression output w.x + b (use --gamma)\n"
    "  builtin:knn:k=K                      k-nearest neighbours (needs --train or --split)\n"
    "  builtin:tree:depth=D                 CART decision tree (needs --train or --split)\n"
    "  external:COMMAND                     child process speaking the line protocol";

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError(what + ": '" + s + "' is not a finite number");
    return v;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError(what + ": '" + s + "' is not a nonnegative integer");
    return v;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& p : split_on(s, ',')) out.push_back(parse_double(p, what));
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

/// "key=value" fields after the descriptor kind; duplicates and unknown keys are errors.
std::map<std::string, std::string> parse_params(const std::vector<std::string>& fields, std::size_t first,
                                                const std::vector<std::string>& allowed, const std::string& kind) {
    std::map<std::string, std::string> params;
    for (std::size_t i = first; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string::npos) throw UsageError(kind + ": expected key=value, got '" + fields[i] + "'");
        const std::string key = fields[i].substr(0, eq);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw UsageError(kind + ": unknown parameter '" + key + "'");
        if (!params.emplace(key, fields[i].substr(eq + 1)).second)
            throw UsageError(kind + ": parameter '" + key + "' given twice");
    }
    return params;
}

const std::string& need(const std::map<std::string, std::string>& params, const std::string& key,
                        const std::string& kind) {
    const auto it = params.find(key);
    if (it == params.end()) throw UsageError(kind + ": missing parameter '" + key + "'");
    return it->second;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

analytic::AnalyticCase parse_case(const std::string& text) {
    const auto fields = split_on(text, ':');
    if (fields.empty()) throw UsageError("--case: empty");
    if (fields[0] == "linear") {
        const auto p = parse_params(fields, 1, {"w", "b"}, "--case linear");
        const auto w = parse_doubles(need(p, "w", "--case linear"), "--case linear w");
        if (w.size() != 2) throw UsageError("--case linear: w needs exactly 2 values");
        return analytic::LinearCase{w[0], w[1], parse_double(need(p, "b", "--case linear"), "--case linear b")};
    }
    if (fields[0] == "corner") {
        const auto p = parse_params(fields, 1, {"a"}, "--case corner");
        const auto a = parse_doubles(need(p, "a", "--case corner"), "--case corner a");
        if (a.size() != 2) throw UsageError("--case corner: a needs exactly 2 values");
        return analytic::CornerCase{a[0], a[1]};
    }
    throw UsageError("--case: unknown case '" + fields[0] + "' (expected linear or corner)");
}

struct GridSpec {
    double lo, hi;
    std::size_t resolution;
};

GridSpec parse_grid(const std::string& text) {
    const auto fields = split_on(text, ':');
    if (fields.size() != 3) throw UsageError("--grid: expected LO:HI:RES");
    GridSpec g{parse_double(fields[0], "--grid"), parse_double(fields[1], "--grid"), parse_size(fields[2], "--grid")};
    if (!(g.lo < g.hi)) throw UsageError("--grid: LO must be below HI");
    if (g.resolution < 2) throw UsageError("--grid: RES must be at least 2");
    return g;
}

std::vector<double> parse_log_scales(const std::string& text) {
    const auto fields = split_on(text, ':');
    if (fields.size() != 3) throw UsageError("--log-scales: expected LO:HI:K");
    const double lo = parse_double(fields[0], "--log-scales");
    const double hi = parse_double(fields[1], "--log-scales");
    const std::size_t k = parse_size(fields[2], "--log-scales");
    if (!(lo > 0.0) || !(hi > lo)) throw UsageError("--log-scales: need 0 < LO < HI");
    if (k < 2) throw UsageError("--log-scales: K must be at least 2");
    std::vector<double> out(k);
    const double step = std::log(hi / lo) / static_cast<double>(k - 1);
    for (std::size_t i = 0; i < k; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

struct Inputs {
    Dataset data;
    std::optional<Dataset> train;
};

Inputs load_inputs(const RunConfig& cfg, std::ostream& err) {
    const Schema schema = cfg.schema_path.empty() ? Schema{} : Schema::load(cfg.schema_path);
    Inputs in;
    in.data = load_csv(cfg.data_path, schema);
    if (!cfg.keep_labels.empty()) in.data = keep_labels(in.data, cfg.keep_labels);
    if (!cfg.train_path.empty()) {
        Dataset train = load_csv(cfg.train_path, schema);
        if (!cfg.keep_labels.empty()) train = keep_labels(train, cfg.keep_labels);
        if (train.names != in.data.names) throw LayoutError("training and evaluation data have different columns");
        in.train = std::move(train);
    } else if (cfg.split_fraction) {
        auto parts = split(in.data, *cfg.split_fraction, SampleStream{cfg.seed, 0, stream_tag::kSplit});
        in.train = std::move(parts.train);
        in.data = std::move(parts.test);
    }
    if (in.data.rows() == 0) throw Error("no points to evaluate");
    if (cfg.normalize) {
        const auto params = fit_normalizer(in.train ? *in.train : in.data);
        for (std::size_t c : params.constant_columns)
            err << "warning: column '" << in.data.names[c] << "' is constant and is left unscaled\n";
        in.data = apply_normalizer(params, in.data);
        if (in.train) in.train = apply_normalizer(params, *in.train);
    }
    return in;
}

PerturbationModel load_model_for(const RunConfig& cfg, const Dataset& data) {
    auto model = load_perturbation(cfg.perturb_path, data.cols(), data.categorical_features());
    for (const auto& t : model.transitions()) {
        const std::size_t m = data.kinds[t.feature()].categories;
        if (t.categories() != m)
            throw LayoutError("transition matrix for column '" + data.names[t.feature()] + "' is " +
                              std::to_string(t.categories()) + "x" + std::to_string(t.categories()) + " but the column has " +
                              std::to_string(m) + " categories");
    }
    return model;
}

FlipConfig flip_config(const RunConfig& cfg) {
    return cfg.gamma ? FlipConfig::regression(*cfg.gamma) : FlipConfig::classification();
}

SearchConfig search_config(const RunConfig& cfg, const Dataset& data) {
    SearchConfig s;
    s.n_directions = cfg.search_dirs;
    s.max_radius = cfg.max_radius;
    s.bisection_tolerance = cfg.bisection_tol;
    s.include_axes = !cfg.no_axes;
    s.refine = !cfg.no_refine;
    s.search_features = data.continuous_features();
    if (s.search_features.empty()) throw UsageError("counterfactual search needs at least one continuous feature");
    return s;
}

void self_test(const Classifier& f, const Dataset& data) {
    if (!dynamic_cast<const ExternalClassifier*>(&f)) return;
    const Eigen::Index rows = std::min<Eigen::Index>(16, data.features.rows());
    long bad = -1;
    try {
        bad = double_query_self_test(f, data.features.topRows(rows));
    } catch (const std::exception& e) {
        throw Error(std::string("external model failed its start-up check on the first ") + std::to_string(rows) +
                    " points: " + e.what());
    }
    if (bad >= 0)
        throw Error("external model answered point " + std::to_string(data.index[static_cast<std::size_t>(bad)]) +
                    " differently on a repeated query; predictions must be deterministic");
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        out.flush();
    } else {
        write_file_atomic(cfg.out_path, text);
    }
}

/// Summaries go to stdout unless the report itself does.
std::ostream& summary_stream(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cfg.out_path.empty() ? err : out;
}

std::vector<RobustnessEstimate> estimate_all(const Classifier& f, const Dataset& data, const PerturbationModel& model,
                                             const RunConfig& cfg, std::uint64_t seed, std::ostream& err) {
    auto result = estimate_dataset(f, data.features, data.index, model, cfg.n_samples, seed, flip_config(cfg), cfg.workers);
    if (!result.failures.empty()) {
        for (const auto& fail : result.failures) err << "error: point " << fail.point_index << ": " << fail.message << "\n";
        throw PointError(result.failures.front().point_index, result.failures.front().message);
    }
    return std::move(result.estimates);
}

std::vector<AdversarialScore> scores_or_undefined(const std::vector<CounterfactualResult>& cfs, std::ostream& err) {
    try {
        return adversarial_scores(cfs);
    } catch (const Error&) {
        err << "warning: no counterfactual found within the search radius for any point; r_adv is undefined\n";
        std::vector<AdversarialScore> out(cfs.size());
        for (std::size_t i = 0; i < cfs.size(); ++i) out[i].distance = cfs[i].distance;
        return out;
    }
}

struct Pipeline {
    Inputs inputs;
    std::unique_ptr<Classifier> model;
    std::optional<PerturbationModel> perturbation;
};

Pipeline prepare(const RunConfig& cfg, std::ostream& err) {
    Pipeline p{load_inputs(cfg, err), nullptr, std::nullopt};
    const Dataset& data = p.inputs.data;
    p.model = make_model(cfg.model, data.cols(), p.inputs.train ? &*p.inputs.train : nullptr, cfg);
    self_test(*p.model, data);
    p.perturbation = load_model_for(cfg, data);
    return p;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto p = prepare(cfg, err);
    const auto estimates = estimate_all(*p.model, p.inputs.data, *p.perturbation, cfg, cfg.seed, err);
    emit(cfg, robustness_csv(estimates), out);
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto p = prepare(cfg, err);
    const Dataset& data = p.inputs.data;
    const auto estimates = estimate_all(*p.model, data, *p.perturbation, cfg, cfg.seed, err);
    const auto cfs =
        find_counterfactuals(*p.model, data.features, data.index, search_config(cfg, data), cfg.seed, cfg.workers);
    const auto report = compare_report(estimates, scores_or_undefined(cfs, err));
    emit(cfg, comparison_csv(estimates, report), out);
    summary_stream(cfg, out, err) << summary_line(report) << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.scales.empty()) throw UsageError("sweep: give --scales and/or --log-scales");
    const auto p = prepare(cfg, err);
    const Dataset& data = p.inputs.data;
    const auto cfs =
        find_counterfactuals(*p.model, data.features, data.index, search_config(cfg, data), cfg.seed, cfg.workers);
    const auto scores = scores_or_undefined(cfs, err);
    const auto curve = scale_sweep(*p.model, data.features, data.index, *p.perturbation, scores, cfg.scales,
                                   cfg.n_samples, cfg.seed, flip_config(cfg), cfg.workers);
    emit(cfg, sweep_csv(curve), out);
    auto& summary = summary_stream(cfg, out, err);
    if (const auto best = argmax_spearman(curve)) {
        summary << "best_scale=" << format_report(curve[*best].scale)
                << ",spearman=" << format_report(*curve[*best].spearman) << "\n";
    } else {
        summary << "best_scale=undefined,spearman=undefined\n";
    }
    return kExitOk;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto p = prepare(cfg, err);
    const Dataset& data = p.inputs.data;
    const auto seeds = derive_seeds(cfg.seed, cfg.repeats);
    const auto report = convergence_check(*p.model, data.features, data.index, *p.perturbation, cfg.n_samples, seeds,
                                          flip_config(cfg), cfg.workers);
    emit(cfg, convergence_csv(report), out);
    const auto show = [](const std::optional<double>& v) { return v ? format_report(*v) : std::string("undefined"); };
    summary_stream(cfg, out, err) << "min_pearson=" << show(report.min_pearson)
                                  << ",min_spearman=" << show(report.min_spearman)
                                  << ",degenerate_runs=" << report.degenerate_runs.size() << "\n";
    if (!report.degenerate_runs.empty())
        err << "warning: " << report.degenerate_runs.size()
            << " run(s) rated every point equally robust; their correlations are undefined\n";
    return kExitOk;
}

int cmd_analytic(const RunConfig& cfg, std::ostream& out) {
    const auto c = parse_case(cfg.analytic_case);
    if (cfg.sigma.size() != 2) throw UsageError("--sigma: expected S1,S2");
    const analytic::GaussianUncertainty2D u(cfg.sigma[0], cfg.sigma[1]);
    const auto g = parse_grid(cfg.grid);
    emit(cfg, grid_csv(analytic::grid_eval(c, u, g.lo, g.hi, g.lo, g.hi, g.resolution)), out);
    return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--model", cfg.model, kModelHelp)->required();
    sub->add_option("--data", cfg.data_path, "CSV of points to evaluate (header row required)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--schema", cfg.schema_path,
                    "JSON schema: {\"label\": col, \"categorical\": {col: m}, \"ignore\": [col]}")
        ->check(CLI::ExistingFile);
    sub->add_option("--perturb", cfg.perturb_path, "JSON perturbation config")->required()->check(CLI::ExistingFile);
    sub->add_option("--samples", cfg.n_samples, "Monte-Carlo samples per point")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Master seed for all randomness")->envname("RWROBUST_SEED")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "Report path (written atomically); standard output if omitted");
    sub->add_option("--workers", cfg.workers, "Worker threads (one external process each)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--gamma", cfg.gamma, "Regression mode: a change larger than GAMMA counts as a flip")
        ->check(CLI::PositiveNumber);
    auto* train = sub->add_option("--train", cfg.train_path, "Training CSV for builtin:knn / builtin:tree")
                      ->check(CLI::ExistingFile);
    sub->add_option("--split", cfg.split_fraction,
                    "Seeded random split of --data: this fraction trains, the rest is evaluated")
        ->check(CLI::Range(0.0, 1.0))
        ->excludes(train);
    sub->add_flag("--normalize", cfg.normalize,
                  "Standardize continuous columns with mean and standard deviation of the training data");
    sub->add_option("--keep-labels", cfg.keep_labels, "Keep only rows with these labels, e.g. a,b")->delimiter(',');
    sub->add_option("--timeout", cfg.timeout_seconds, "External model response timeout in seconds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--batch", cfg.batch_size, "Lines sent to an external model per round trip")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

void add_search(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--search-dirs", cfg.search_dirs, "Search directions per point (axes included)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-radius", cfg.max_radius, "Largest counterfactual distance searched")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.bisection_tol, "Bisection tolerance on the radius")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_flag("--no-axes", cfg.no_axes, "Use random directions only");
    sub->add_flag("--no-refine", cfg.no_refine, "Skip local refinement of the best direction");
}

} // namespace

std::unique_ptr<Classifier> make_model(const std::string& descriptor, std::size_t feature_count, const Dataset* train,
                                       const RunConfig& cfg) {
    static const std::string kExternal = "external:";
    if (descriptor.rfind(kExternal, 0) == 0) {
        ExternalModelSpec spec;
        spec.command = descriptor.substr(kExternal.size());
        if (spec.command.empty()) throw UsageError("external: empty command");
        spec.feature_count = feature_count;
        spec.timeout = std::chrono::milliseconds(static_cast<long long>(std::ceil(cfg.timeout_seconds * 1000.0)));
        spec.batch_size = cfg.batch_size;
        spec.output = cfg.gamma ? OutputKind::Regression : OutputKind::Classification;
        return std::make_unique<ExternalClassifier>(std::move(spec));
    }
    const auto fields = split_on(descriptor, ':');
    if (fields.size() < 2 || fields[0] != "builtin")
        throw UsageError("model descriptor '" + descriptor + "' must start with builtin: or external:");
    const std::string& kind = fields[1];
    const std::string ctx = "builtin:" + kind;
    const auto weights = [&](const std::map<std::string, std::string>& p) {
        const auto w = parse_doubles(need(p, "w", ctx), ctx + " w");
        if (w.size() != feature_count)
            throw UsageError(ctx + ": w has " + std::to_string(w.size()) + " entries but the data has " +
                             std::to_string(feature_count) + " features");
        return to_vector(w);
    };
    const auto training = [&]() -> const Dataset& {
        if (!train) throw UsageError(ctx + " needs training data (--train or --split)");
        if (!train->has_labels()) throw UsageError(ctx + ": training data has no label column (set \"label\" in the schema)");
        return *train;
    };
    if (kind == "linear") {
        const auto p = parse_params(fields, 2, {"w", "b"}, ctx);
        return std::make_unique<LinearClassifier>(weights(p), parse_double(need(p, "b", ctx), ctx + " b"));
    }
    if (kind == "linreg") {
        const auto p = parse_params(fields, 2, {"w", "b"}, ctx);
        return std::make_unique<LinearRegressor>(weights(p), parse_double(need(p, "b", ctx), ctx + " b"));
    }
    if (kind == "corner") {
        const auto p = parse_params(fields, 2, {"a", "features"}, ctx);
        const auto a = parse_doubles(need(p, "a", ctx), ctx + " a");
        if (a.size() != 2) throw UsageError(ctx + ": a needs exactly 2 values");
        std::size_t i = 0, j = 1;
        if (const auto it = p.find("features"); it != p.end()) {
            const auto idx = split_on(it->second, ',');
            if (idx.size() != 2) throw UsageError(ctx + ": features needs exactly 2 indices");
            i = parse_size(idx[0], ctx + " features");
            j = parse_size(idx[1], ctx + " features");
        }
        return std::make_unique<CornerClassifier>(a[0], a[1], feature_count, i, j);
    }
    if (kind == "const") {
        const auto p = parse_params(fields, 2, {"label"}, ctx);
        return std::make_unique<ConstantClassifier>(feature_count, need(p, "label", ctx));
    }
    if (kind == "knn") {
        const auto p = parse_params(fields, 2, {"k"}, ctx);
        const std::size_t k = parse_size(need(p, "k", ctx), ctx + " k");
        const Dataset& t = training();
        return std::make_unique<KnnClassifier>(k, t.features, t.labels);
    }
    if (kind == "tree") {
        const auto p = parse_params(fields, 2, {"depth"}, ctx);
        const std::size_t depth = parse_size(need(p, "depth", ctx), ctx + " depth");
        const Dataset& t = training();
        return std::make_unique<DecisionTreeClassifier>(fit_tree(t.features, t.labels, depth));
    }
    throw UsageError("unknown builtin model '" + kind + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string log_scales;
    CLI::App app{"Real-world robustness of black-box classifiers under input uncertainty", "rwrobust"};
    app.require_subcommand(1, 1);
    app.allow_extras(false);

    auto* est = app.add_subcommand("estimate", "Monte-Carlo real-world robustness per point");
    add_common(est, cfg);

    auto* cmp = app.add_subcommand("compare", "Robustness next to counterfactual distance, with rank correlations");
    add_common(cmp, cfg);
    add_search(cmp, cfg);

    auto* swp = app.add_subcommand("sweep", "Rank correlation against counterfactual distance across covariance scales");
    add_common(swp, cfg);
    add_search(swp, cfg);
    swp->add_option("--scales", cfg.scales, "Ascending covariance multipliers, e.g. 0.1,1,10")->delimiter(',');
    swp->add_option("--log-scales", log_scales, "K log-spaced multipliers from LO to HI, as LO:HI:K");

    auto* conv = app.add_subcommand("check-convergence", "Correlation of robustness rankings across independent seeds");
    add_common(conv, cfg);
    conv->add_option("--repeats", cfg.repeats, "Independent runs")->capture_default_str()->check(CLI::Range(2, 1000000));

    auto* ana = app.add_subcommand("analytic", "Closed-form robustness and counterfactual distance on a grid");
    ana->add_option("--case", cfg.analytic_case, "linear:w=W1,W2:b=B or corner:a=A1,A2")->required();
    ana->add_option("--sigma", cfg.sigma, "Per-axis standard deviations S1,S2")->delimiter(',')->capture_default_str();
    ana->add_option("--grid", cfg.grid, "Square grid LO:HI:RES (inclusive, RES points per axis)")->capture_default_str();
    ana->add_option("--out", cfg.out_path, "Grid CSV path; standard output if omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!log_scales.empty()) {
            const auto extra = parse_log_scales(log_scales);
            cfg.scales.insert(cfg.scales.end(), extra.begin(), extra.end());
        }
        if (!cfg.scales.empty()) {
            std::sort(cfg.scales.begin(), cfg.scales.end());
            const auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
            cfg.scales.erase(std::unique(cfg.scales.begin(), cfg.scales.end(), same), cfg.scales.end());
        }
        if (est->parsed()) return cmd_estimate(cfg, out, err);
        if (cmp->parsed()) return cmd_compare(cfg, out, err);
        if (swp->parsed()) return cmd_sweep(cfg, out, err);
        if (conv->parsed()) return cmd_convergence(cfg, out, err);
        return cmd_analytic(cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace rwr::cli
