#include "rwrobust/report.hpp"

#include "rwrobust/errors.hpp"
#include "rwrobust/stats.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace rwr {

namespace {

std::string opt(const std::optional<double>& v) {
    return v ? format_report(*v) : std::string("undefined");
}

} // namespace

ComparisonReport compare_report(const std::vector<RobustnessEstimate>& robustness,
                                const std::vector<AdversarialScore>& adversarial) {
    if (robustness.size() != adversarial.size())
        throw UsageError("compare_report: robustness and adversarial results differ in length");
    ComparisonReport report;
    std::vector<double> pr, radv;
    for (std::size_t i = 0; i < robustness.size(); ++i) {
        ComparedPoint p;
        p.point_index = robustness[i].point_index;
        p.p_r = robustness[i].p_r;
        p.stderr_ = robustness[i].stderr_;
        p.d_cf = adversarial[i].distance;
        p.r_adv = adversarial[i].r_adv;
        p.cf_converged = adversarial[i].converged;
        if (p.r_adv) {
            pr.push_back(p.p_r);
            radv.push_back(*p.r_adv);
        }
        report.points.push_back(p);
    }
    report.n_defined = pr.size();
    report.pearson = pearson(pr, radv);
    report.spearman = spearman(pr, radv);
    report.inversions = count_inversions(pr, radv);
    return report;
}

std::vector<SweepPoint> scale_sweep(const Classifier& f, const SampleMatrix& points,
                                    const std::vector<std::size_t>& point_indices, const PerturbationModel& base_model,
                                    const std::vector<AdversarialScore>& adversarial, const std::vector<double>& scales,
                                    std::size_t n, std::uint64_t master_seed, const FlipConfig& cfg, std::size_t workers) {
    if (scales.empty()) throw UsageError("scale_sweep: no scales");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) throw UsageError("scale_sweep: scales must be positive");
        if (i > 0 && !(scales[i] >= scales[i - 1])) throw UsageError("scale_sweep: scales must be ascending");
    }
    std::vector<SweepPoint> curve;
    for (double scale : scales) {
        const PerturbationModel model = base_model.rescaled(scale);
        auto result = estimate_dataset(f, points, point_indices, model, n, master_seed, cfg, workers);
        if (!result.failures.empty()) throw PointError(result.failures.front().point_index, result.failures.front().message);
        const auto report = compare_report(result.estimates, adversarial);
        curve.push_back({scale, report.pearson, report.spearman, report.n_defined});
    }
    return curve;
}

std::optional<std::size_t> argmax_spearman(const std::vector<SweepPoint>& curve) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (curve[i].spearman && (!best || *curve[i].spearman > *curve[*best].spearman)) best = i;
    return best;
}

std::string robustness_csv(const std::vector<RobustnessEstimate>& estimates) {
    std::string out = std::string(kRobustnessHeader) + "\n";
    for (const auto& e : estimates) {
        out += std::to_string(e.point_index) + "," + e.base_label + "," + format_report(e.p_r) + "," +
               format_report(e.p_flip) + "," + format_report(e.stderr_) + "," + std::to_string(e.n_samples) + "," +
               std::to_string(e.seed) + "\n";
    }
    return out;
}

std::string comparison_csv(const std::vector<RobustnessEstimate>& estimates, const ComparisonReport& report) {
    if (estimates.size() != report.points.size()) throw UsageError("comparison_csv: size mismatch");
    std::string out = std::string(kRobustnessHeader) + "," + kCompareColumns + "\n";
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto& e = estimates[i];
        const auto& p = report.points[i];
        out += std::to_string(e.point_index) + "," + e.base_label + "," + format_report(e.p_r) + "," +
               format_report(e.p_flip) + "," + format_report(e.stderr_) + "," + std::to_string(e.n_samples) + "," +
               std::to_string(e.seed) + "," + format_report(p.d_cf) + "," + opt(p.r_adv) + "," +
               (p.cf_converged ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& curve) {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const auto& p : curve)
        out += format_report(p.scale) + "," + opt(p.pearson) + "," + opt(p.spearman) + "," + std::to_string(p.n_defined) + "\n";
    return out;
}

std::string grid_csv(const std::vector<analytic::GridCell>& grid) {
    std::string out = std::string(kGridHeader) + "\n";
    for (const auto& c : grid)
        out += format_report(c.x1) + "," + format_report(c.x2) + "," + format_report(c.p_r) + "," + format_report(c.d_cf) + "\n";
    return out;
}

std::string convergence_csv(const ConvergenceReport& report) {
    std::string out = "run_a,run_b,seed_a,seed_b,pearson,spearman\n";
    for (std::size_t i = 0; i < report.n_repeats; ++i)
        for (std::size_t j = i + 1; j < report.n_repeats; ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(report.seeds[i]) + "," +
                   std::to_string(report.seeds[j]) + "," + opt(report.pearson[i][j]) + "," + opt(report.spearman[i][j]) + "\n";
    return out;
}

std::string summary_line(const ComparisonReport& report) {
    return "pearson=" + opt(report.pearson) + ",spearman=" + opt(report.spearman) +
           ",inversions=" + std::to_string(report.inversions);
}

std::vector<RobustnessEstimate> parse_robustness_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kRobustnessHeader) throw ParseError("not a robustness report (bad header)", 1);
    std::vector<RobustnessEstimate> out;
    std::size_t line_no = 1;
    const auto number = [&](const std::string& s, auto& v) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'", line_no);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 7) throw ParseError("expected 7 fields", line_no);
        RobustnessEstimate e;
        number(f[0], e.point_index);
        e.base_label = f[1];
        number(f[2], e.p_r);
        number(f[3], e.p_flip);
        number(f[4], e.stderr_);
        number(f[5], e.n_samples);
        number(f[6], e.seed);
        out.push_back(std::move(e));
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("failed while writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move report into place at " + path.string());
    }
}

} // namespace rwr
