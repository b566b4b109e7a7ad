#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "z2index/harness.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

using namespace z2;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("z2_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json read_json(const fs::path& p) {
    std::ifstream f(p);
    return json::parse(f);
}

}  // namespace

TEST_CASE("registry: every experiment has an anchor, a description and unique name") {
    const auto& reg = registry();
    CHECK(reg.size() == 17);
    std::set<std::string> names;
    for (const auto& e : reg) {
        CHECK_FALSE(e.anchor.empty());
        CHECK_FALSE(e.description.empty());
        CHECK(bool(e.run));
        CHECK(names.insert(e.name).second);
        // defaults validate against their own schema
        CHECK_NOTHROW(validate_params(e, json::object()));
    }
    for (const char* n : {"line_normalization", "torus_trivial", "torus_flux", "kramers_random", "homotopy_path",
                          "compact_perturbation", "cylinder_model", "callias_t2xR", "phi_negation",
                          "lambda_phi_sweep", "relative_index_1d", "vanishing_compact_circle", "admissibility_audit",
                          "toeplitz_class_invariance", "toeplitz_vs_callias_landau", "gap_certify"})
        CHECK(names.count(n) == 1);
    CHECK_THROWS_AS(find_experiment("no_such_thing"), UnknownExperiment);
}

TEST_CASE("validate_params: defaults, type and range errors") {
    const ExperimentInfo& t = find_experiment("torus_trivial");
    json p = validate_params(t, json::object());
    CHECK(p.at("cutoffs") == json({4, 8, 16}));
    CHECK(validate_params(t, {{"cutoffs", {2, 3}}}).at("cutoffs") == json({2, 3}));
    CHECK_THROWS_AS(validate_params(t, {{"cutoffs", {0}}}), InvalidParameter);
    CHECK_THROWS_AS(validate_params(t, {{"cutoffs", json::array()}}), InvalidParameter);
    CHECK_THROWS_AS(validate_params(t, {{"cutoffs", {1.5}}}), InvalidParameter);
    CHECK_THROWS_AS(validate_params(t, {{"bogus", 1}}), InvalidParameter);
    CHECK_THROWS_AS(validate_params(t, json::array()), InvalidParameter);
    // doubles accept integer literals
    const ExperimentInfo& l = find_experiment("line_normalization");
    CHECK(validate_params(l, {{"halfLength", 10}}).at("halfLength").is_number_float());
}

TEST_CASE("suite exit codes") {
    SuiteSummary empty = run_suite({});
    CHECK(empty.pass == 0);
    CHECK(empty.fail == 0);
    CHECK(empty.exitCode() == 0);

    SuiteSummary s;
    s.pass = 3;
    CHECK(s.exitCode() == 0);
    s.unstable = 1;
    CHECK(s.exitCode() == 2);
    s.fail = 1;
    CHECK(s.exitCode() == 1);

    const fs::path dir = scratch("unknown");
    SuiteSummary u = run_suite({ExperimentConfig{"no_such_thing", json::object(), (dir / "x").string(), false}});
    CHECK(u.fail == 1);
    CHECK(u.exitCode() == 1);
    CHECK(u.reports[0].verdict == Verdict::Fail);
    CHECK_FALSE(u.reports[0].error.empty());

    SuiteSummary bad = run_suite({ExperimentConfig{"torus_trivial", {{"cutoffs", {-3}}}, (dir / "y").string(), false}});
    CHECK(bad.exitCode() == 1);
    fs::remove_all(dir);
}

TEST_CASE("report.json schema and determinism") {
    const fs::path dir = scratch("report");
    ExperimentConfig c{"torus_trivial", {{"cutoffs", {2, 4}}}, (dir / "a").string(), false};
    ExperimentReport r1 = run_experiment(c);
    c.outputDir = (dir / "b").string();
    ExperimentReport r2 = run_experiment(c);
    CHECK(r1.verdict == Verdict::Pass);
    CHECK(r1.quantities == r2.quantities);

    json j = read_json(dir / "a" / "report.json");
    for (const char* k : {"name", "params", "quantities", "verdict", "runtimeSeconds"}) CHECK(j.contains(k));
    CHECK(j.at("name") == "torus_trivial");
    CHECK(j.at("verdict") == "pass");
    CHECK(j.at("params").at("cutoffs") == json({2, 4}));
    CHECK(j.at("runtimeSeconds").get<double>() >= 0.0);
    CHECK(j.at("quantities").contains("audits"));
    fs::remove_all(dir);
}

TEST_CASE("seeded experiments are reproducible") {
    const fs::path dir = scratch("seeded");
    ExperimentConfig c{"kramers_random", {{"count", 5}, {"maxDim", 12}}, (dir / "a").string(), false};
    ExperimentReport a = run_experiment(c);
    c.outputDir = (dir / "b").string();
    ExperimentReport b = run_experiment(c);
    CHECK(a.verdict == Verdict::Pass);
    CHECK(a.quantities == b.quantities);
    fs::remove_all(dir);
}

TEST_CASE("spectrum.csv is written on request in the fixed format") {
    const fs::path dir = scratch("spectrum");
    ExperimentConfig c{"line_normalization", json::object(), (dir / "line").string(), true};
    ExperimentReport r = run_experiment(c);
    CHECK(r.verdict == Verdict::Pass);
    const fs::path csv = dir / "line" / "spectrum.csv";
    REQUIRE(fs::exists(csv));
    std::ifstream f(csv);
    std::string line;
    std::regex fmt(R"(^-?\d\.\d{16}e[+-]\d{2,3}$)");
    int n = 0;
    double prev = -1.0;
    while (std::getline(f, line)) {
        CHECK(std::regex_match(line, fmt));
        const double v = std::stod(line);
        CHECK(v >= 0.0);
        CHECK(v >= prev);  // singular values ascending
        prev = v;
        ++n;
    }
    CHECK(n > 0);
    fs::remove_all(dir);
}

TEST_CASE("Matrix Market round trip") {
    const fs::path dir = scratch("mtx");
    std::mt19937_64 rng(61);
    Mat A = oracle::random_complex(rng, 7, 5);
    A(2, 3) = 0.0;
    A(0, 0) = cplx(1.0 / 3.0, -2.0e-17);
    SpMat S = to_sparse(A);
    const fs::path p = dir / "a.mtx";
    write_matrix_market(p.string(), S);
    std::ifstream f(p);
    std::string header;
    std::getline(f, header);
    CHECK(header == "%%MatrixMarket matrix coordinate complex general");
    SpMat R = read_matrix_market(p.string());
    CHECK(R.rows() == 7);
    CHECK(R.cols() == 5);
    CHECK(R.nonZeros() == S.nonZeros());
    CHECK((to_dense(R) - A).norm() == 0.0);  // 17 digits round trip exactly
    fs::remove_all(dir);
}

TEST_CASE("suite config parsing") {
    SuiteConfig c = parse_suite_config(json::parse(R"({
        "outputDir": "out", "workers": 2,
        "experiments": [{"name": "torus_flux", "params": {"n": 1}, "label": "flux1"},
                        {"name": "torus_flux"}, {"name": "torus_flux", "spectrumCsv": true}]})"));
    CHECK(c.workers == 2);
    REQUIRE(c.experiments.size() == 3);
    CHECK(fs::path(c.experiments[0].outputDir).filename() == "flux1");
    CHECK(c.experiments[1].outputDir != c.experiments[2].outputDir);
    CHECK(c.experiments[2].spectrumCsv);
    CHECK_THROWS_AS(parse_suite_config(json::array()), InvalidParameter);
    CHECK_THROWS_AS(parse_suite_config(json::parse(R"({"experiments": 3})")), InvalidParameter);
    CHECK_THROWS_AS(parse_suite_config(json::parse(R"({"workers": 0, "experiments": []})")), InvalidParameter);
    CHECK_THROWS_AS(parse_suite_config(json::parse(R"({"experiments": [{"params": {}}]})")), InvalidParameter);
    CHECK_THROWS_AS(load_suite_config("/nonexistent/config.json"), InvalidParameter);

    SuiteConfig d = default_suite("acc");
    CHECK(d.experiments.size() == registry().size() + 3);
}
