#include "rwrobust/cli.hpp"
#include "rwrobust/report.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

using namespace rwr;
using rwr::testing::read_file;
using rwr::testing::TempDir;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "rwrobust");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct Fixture {
    TempDir dir;
    std::string pts, iso, schema;
    Fixture() {
        pts = dir.write("pts.csv", "x1,x2\n0,1.5\n0,0.5\n2,3\n-1,-1\n0.3,0.9\n").string();
        iso = dir.write("iso1.json", R"({"continuous": {"covariance": "identity", "scale": 1}})").string();
        schema = dir.write("s.json", "{}").string();
    }
    std::string out(const std::string& name) const { return (dir.path() / name).string(); }
};

std::size_t lines(const std::string& s) { return std::size_t(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("estimate writes the report") {
    Fixture fx;
    const auto r = invoke({"estimate", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.pts, "--schema", fx.schema,
                        "--perturb", fx.iso, "--samples", "10000", "--seed", "42", "--out", fx.out("r.csv")});
    REQUIRE(r.code == 0);
    const std::string text = read_file(fx.out("r.csv"));
    CHECK(text.rfind("point_index,base_label,p_r,p_flip,stderr,n_samples,seed\n", 0) == 0);
    CHECK(lines(text) == 6);
    const auto back = parse_robustness_csv(text);
    CHECK(back[0].seed == 42);
    CHECK(back[0].n_samples == 10000);
    CHECK(std::abs(back[0].p_r - 0.8413447460685429) < 0.015);
}

TEST_CASE("same seed gives byte-identical reports across runs and worker counts") {
    Fixture fx;
    std::vector<std::string> base{"estimate", "--model", "builtin:corner:a=0,1", "--data", fx.pts, "--perturb", fx.iso,
                                  "--samples", "7000", "--seed", "5"};
    auto a = base, b = base, c = base;
    a.insert(a.end(), {"--workers", "1", "--out", fx.out("a.csv")});
    b.insert(b.end(), {"--workers", "8", "--out", fx.out("b.csv")});
    c.insert(c.end(), {"--workers", "3", "--out", fx.out("c.csv")});
    REQUIRE(invoke(a).code == 0);
    REQUIRE(invoke(b).code == 0);
    REQUIRE(invoke(c).code == 0);
    CHECK(read_file(fx.out("a.csv")) == read_file(fx.out("b.csv")));
    CHECK(read_file(fx.out("a.csv")) == read_file(fx.out("c.csv")));
}

TEST_CASE("seed falls back to the environment") {
    Fixture fx;
    const std::vector<std::string> args{"estimate", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.pts, "--perturb", fx.iso,
                                        "--samples", "500"};
    ::setenv("RWROBUST_SEED", "77", 1);
    const auto env = invoke(args);
    ::unsetenv("RWROBUST_SEED");
    auto flagged = args;
    flagged.insert(flagged.end(), {"--seed", "77"});
    REQUIRE(env.code == 0);
    CHECK(env.out == invoke(flagged).out);
    CHECK(env.out.find(",500,77\n") != std::string::npos);
}

TEST_CASE("compare appends counterfactual columns and prints a summary") {
    Fixture fx;
    const auto r = invoke({"compare", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.pts, "--schema", fx.schema, "--perturb",
                        fx.iso, "--samples", "10000", "--seed", "42", "--search-dirs", "256", "--out", fx.out("c.csv")});
    REQUIRE(r.code == 0);
    const std::string text = read_file(fx.out("c.csv"));
    CHECK(text.rfind("point_index,base_label,p_r,p_flip,stderr,n_samples,seed,d_cf,r_adv,cf_converged\n", 0) == 0);
    CHECK(r.out.rfind("pearson=", 0) == 0);
    CHECK(r.out.find(",spearman=") != std::string::npos);
    CHECK(r.out.find(",inversions=") != std::string::npos);
}

TEST_CASE("compare with a constant model reports undefined correlations") {
    Fixture fx;
    const auto r = invoke({"compare", "--model", "builtin:const:label=z", "--data", fx.pts, "--perturb", fx.iso, "--samples",
                        "100", "--max-radius", "2", "--search-dirs", "8", "--out", fx.out("c.csv")});
    REQUIRE(r.code == 0);
    CHECK(r.out == "pearson=undefined,spearman=undefined,inversions=0\n");
    CHECK(r.err.find("no counterfactual") != std::string::npos);
    CHECK(read_file(fx.out("c.csv")).find(",2,undefined,0\n") != std::string::npos);
}

TEST_CASE("analytic grid") {
    const auto r = invoke({"analytic", "--case", "corner:a=1,2", "--sigma", "1,1", "--grid", "-3:3:50"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x1,x2,p_r,d_cf\n", 0) == 0);
    CHECK(lines(r.out) == 2501);
    const auto lin = invoke({"analytic", "--case", "linear:w=0,1:b=0", "--grid", "0:1:2"});
    REQUIRE(lin.code == 0);
    CHECK(lin.out == "x1,x2,p_r,d_cf\n0,0,0.691462461,0.5\n1,0,0.691462461,0.5\n0,1,0.691462461,0.5\n1,1,0.691462461,0.5\n");
}

TEST_CASE("sweep and convergence subcommands") {
    Fixture fx;
    const auto s = invoke({"sweep", "--model", "builtin:corner:a=0,0", "--data", fx.pts, "--perturb", fx.iso, "--samples", "2000",
                        "--log-scales", "0.01:100:5", "--scales", "1", "--out", fx.out("s.csv")});
    REQUIRE(s.code == 0);
    const auto text = read_file(fx.out("s.csv"));
    CHECK(text.rfind("scale,pearson,spearman,n_defined\n0.01,", 0) == 0);
    CHECK(lines(text) == 6); // 1 is already on the log grid
    CHECK(s.out.rfind("best_scale=", 0) == 0);

    const auto c = invoke({"check-convergence", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.pts, "--perturb", fx.iso,
                        "--samples", "2000", "--repeats", "4", "--out", fx.out("v.csv")});
    REQUIRE(c.code == 0);
    CHECK(lines(read_file(fx.out("v.csv"))) == 1 + 6);
    CHECK(c.out.rfind("min_pearson=", 0) == 0);
}

TEST_CASE("trained builtin models") {
    const std::string iris = (rwr::testing::data_dir() / "iris.csv").string();
    const std::string schema = (rwr::testing::data_dir() / "iris_schema.json").string();
    TempDir dir;
    const auto iso = dir.write("p.json", R"({"continuous": {"covariance": "identity", "scale": 0.1}})").string();
    for (const std::string model : {"builtin:knn:k=3", "builtin:tree:depth=3"}) {
        const auto r = invoke({"estimate", "--model", model, "--data", iris, "--schema", schema, "--keep-labels",
                            "versicolor,virginica", "--split", "0.6667", "--normalize", "--perturb", iso, "--samples", "200"});
        INFO(r.err);
        REQUIRE(r.code == 0);
        CHECK(lines(r.out) == 1 + 34);
    }
    const auto missing = invoke({"estimate", "--model", "builtin:knn:k=3", "--data", iris, "--schema", schema, "--perturb", iso});
    CHECK(missing.code == 1);
}

TEST_CASE("external model through the CLI matches the builtin") {
    Fixture fx;
    const std::vector<std::string> common{"--data", fx.pts, "--perturb", fx.iso, "--samples", "3000", "--seed", "9", "--workers", "3"};
    auto ext = std::vector<std::string>{"estimate", "--model", "external:" + rwr::testing::python_model("threshold_model.py")};
    auto builtin = std::vector<std::string>{"estimate", "--model", "builtin:linear:w=0,1:b=0"};
    ext.insert(ext.end(), common.begin(), common.end());
    builtin.insert(builtin.end(), common.begin(), common.end());
    const auto a = invoke(ext);
    INFO(a.err);
    REQUIRE(a.code == 0);
    CHECK(a.out == invoke(builtin).out);
}

TEST_CASE("exit codes") {
    Fixture fx;
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"estimate", "--bogus"}).code == 1);
    CHECK(invoke({"estimate", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.pts, "--perturb", fx.iso, "--unknown", "1"}).code ==
          1);
    CHECK(invoke({"estimate", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.out("missing.csv"), "--perturb", fx.iso}).code == 1);
    CHECK(invoke({"estimate", "--model", "builtin:linear:w=0,1,2:b=0", "--data", fx.pts, "--perturb", fx.iso}).code == 1);
    CHECK(invoke({"estimate", "--model", "builtin:nope", "--data", fx.pts, "--perturb", fx.iso}).code == 1);
    CHECK(invoke({"estimate", "--model", "builtin:linear:w=0,1:b=0", "--data", fx.pts, "--perturb", fx.iso, "--samples", "0"}).code ==
          1);
    CHECK(invoke({"analytic", "--case", "circle:r=1"}).code == 1);
    CHECK(invoke({"estimate", "--help"}).code == 0);

    const auto early = invoke({"estimate", "--model", "external:" + rwr::testing::python_model("crash_model.py"), "--data", fx.pts,
                               "--perturb", fx.iso, "--samples", "100", "--out", fx.out("never.csv")});
    CHECK(early.code == 2);
    CHECK(early.err.find("start-up check") != std::string::npos);
    CHECK(early.err.find("response line 4") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(fx.out("never.csv")));

    const auto late = invoke({"estimate", "--model", "external:" + rwr::testing::python_model("crash_model.py") + " 40", "--data",
                              fx.pts, "--perturb", fx.iso, "--samples", "100", "--out", fx.out("never.csv")});
    CHECK(late.code == 2);
    CHECK(late.err.find("error: point ") != std::string::npos);
    CHECK(late.err.find("status 7") != std::string::npos);
    CHECK(late.err.find("response line 41") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(fx.out("never.csv")));

    const auto bad_csv = fx.dir.write("bad.csv", "x1,x2\n1,2\n1,oops\n").string();
    const auto parse = invoke({"estimate", "--model", "builtin:linear:w=0,1:b=0", "--data", bad_csv, "--perturb", fx.iso});
    CHECK(parse.code == 2);
    CHECK(parse.err.find("row 3") != std::string::npos);
    CHECK(parse.err.find("x2") != std::string::npos);

    const auto coin = invoke({"estimate", "--model", "external:" + rwr::testing::python_model("coin_model.py"), "--data", fx.pts,
                           "--perturb", fx.iso});
    CHECK(coin.code == 2);
    CHECK(coin.err.find("deterministic") != std::string::npos);
}

TEST_CASE("help documents every flag and the descriptor syntax") {
    const auto r = invoke({"compare", "--help"});
    REQUIRE(r.code == 0);
    for (const char* flag : {"--model", "--data", "--schema", "--perturb", "--samples", "--seed", "--out", "--workers",
                             "--search-dirs", "--max-radius", "builtin:corner", "external:"})
        CHECK(r.out.find(flag) != std::string::npos);
}

TEST_CASE("the installed binary uses the same exit codes") {
    const std::string bin = RWR_CLI_PATH;
    CHECK(WEXITSTATUS(std::system((bin + " estimate --bogus >/dev/null 2>&1").c_str())) == 1);
    CHECK(WEXITSTATUS(std::system((bin + " analytic --case corner:a=0,0 --grid 0:1:2 >/dev/null").c_str())) == 0);
}
