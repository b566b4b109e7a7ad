#include "z2index/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace z2;

namespace {

const char* runtime_name(RuntimeClass r) {
    switch (r) {
        case RuntimeClass::Fast: return "fast";
        case RuntimeClass::Medium: return "medium";
        case RuntimeClass::Slow: return "slow";
    }
    return "?";
}

void print_registry(bool asJson) {
    if (asJson) {
        json all = json::array();
        for (const auto& e : registry()) {
            json ps = json::array();
            for (const auto& p : e.params) {
                json s{{"name", p.name}, {"type", param_type_name(p.type)}, {"default", p.defaultValue},
                       {"description", p.description}};
                if (p.min) s["min"] = *p.min;
                if (p.max) s["max"] = *p.max;
                ps.push_back(s);
            }
            all.push_back({{"name", e.name}, {"anchor", e.anchor}, {"description", e.description},
                           {"runtime", runtime_name(e.runtime)}, {"params", ps}});
        }
        std::cout << all.dump(2) << '\n';
        return;
    }
    for (const auto& e : registry()) {
        std::cout << e.name << "  [" << runtime_name(e.runtime) << "]\n"
                  << "    verifies: " << e.anchor << "\n"
                  << "    " << e.description << "\n";
        for (const auto& p : e.params) {
            std::cout << "    --" << p.name << " : " << param_type_name(p.type) << " = " << p.defaultValue.dump();
            if (p.min || p.max)
                std::cout << "  range [" << (p.min ? std::to_string(*p.min) : "-inf") << ", "
                          << (p.max ? std::to_string(*p.max) : "inf") << "]";
            std::cout << "  " << p.description << '\n';
        }
        std::cout << '\n';
    }
}

int do_run(const std::string& configPath, int workersOverride, bool quiet) {
    SuiteConfig cfg = load_suite_config(configPath);
    if (workersOverride > 0) cfg.workers = workersOverride;
    SuiteSummary s = run_suite(cfg.experiments, cfg.workers, cfg.outputDir);
    if (!quiet)
        for (const auto& r : s.reports) {
            std::cout << verdict_name(r.verdict) << "  " << r.name << "  (" << r.runtimeSeconds << " s)";
            if (!r.error.empty()) std::cout << "  " << r.error;
            for (const auto& f : r.failedChecks) std::cout << "\n    failed: " << f;
            std::cout << '\n';
        }
    std::cout << "pass " << s.pass << ", fail " << s.fail << ", unstable " << s.unstable << " in " << s.runtimeSeconds
              << " s; reports under " << cfg.outputDir << '\n';
    return s.exitCode();
}

int do_export(const std::string& name, const std::string& dir, const std::string& paramsText) {
    const ExperimentInfo& info = find_experiment(name);
    json given = paramsText.empty() ? json::object() : json::parse(paramsText);
    json params = validate_params(info, given);
    fs::create_directories(dir);
    for (const NamedMatrix& m : info.exportMatrices(params)) {
        const fs::path p = fs::path(dir) / (name + "_" + m.name + ".mtx");
        write_matrix_market(p.string(), m.matrix);
        std::cout << p.string() << "  " << m.matrix.rows() << " x " << m.matrix.cols() << ", " << m.matrix.nonZeros()
                  << " nonzeros\n";
    }
    std::ofstream(fs::path(dir) / (name + "_params.json")) << params.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"z2lab: numerical experiments for Z2-valued indices of odd symmetric operators"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run the experiments listed in a JSON config");
    std::string config;
    int workers = 0;
    bool quiet = false;
    run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("-j,--workers", workers, "override the worker count");
    run->add_flag("-q,--quiet", quiet, "only print the summary line");

    auto* list = app.add_subcommand("list", "print the experiment registry with parameter schemas");
    bool listJson = false;
    list->add_flag("--json", listJson, "machine-readable output");

    auto* exp = app.add_subcommand("export", "write an experiment's operators as Matrix Market files");
    std::string expName, mmDir, paramsText;
    exp->add_option("experiment", expName, "registry name")->required();
    exp->add_option("--matrix-market", mmDir, "output directory")->required();
    exp->add_option("--params", paramsText, "JSON object of parameter overrides");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return do_run(config, workers, quiet);
        if (*list) {
            print_registry(listJson);
            return 0;
        }
        if (*exp) return do_export(expName, mmDir, paramsText);
    } catch (const std::exception& e) {
        std::cerr << "z2lab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
