#pragma once

#include "z2index/common.hpp"
#include "z2index/quaternionic.hpp"

#include <json.hpp>

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace z2 {

using json = nlohmann::json;

enum class ParamType { Int, Double, Bool, IntList, DoubleList };

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::Int;
    json defaultValue;
    std::optional<double> min, max;  // applied to scalars and to every list element
    std::string description;
};

std::string param_type_name(ParamType t);

struct NamedMatrix {
    std::string name;
    SpMat matrix;
};

// Mutable state of one running experiment. `check` records an asserted
// identity; the verdict is pass iff every check holds.
class ExperimentContext {
public:
    explicit ExperimentContext(json params) : params_(std::move(params)) {}

    const json& params() const { return params_; }
    int i(const std::string& k) const { return params_.at(k).get<int>(); }
    double d(const std::string& k) const { return params_.at(k).get<double>(); }
    bool b(const std::string& k) const { return params_.at(k).get<bool>(); }
    std::vector<int> ilist(const std::string& k) const { return params_.at(k).get<std::vector<int>>(); }
    std::vector<double> dlist(const std::string& k) const { return params_.at(k).get<std::vector<double>>(); }

    json& q() { return quantities_; }
    const json& quantities() const { return quantities_; }
    bool check(const std::string& name, bool ok);
    // Odd-symmetry or invariant residual of a builder output against its threshold.
    void audit(const std::string& name, double residual, double threshold);
    void auditTau(const std::string& name, const AntiUnitary& tau);
    void spectrum(const std::string& op, const std::vector<double>& values);

    bool allPassed() const { return failed_.empty(); }
    const std::vector<std::string>& failedChecks() const { return failed_; }
    const std::vector<std::pair<std::string, std::vector<double>>>& spectra() const { return spectra_; }

private:
    json params_;
    json quantities_ = json::object();
    std::vector<std::string> failed_;
    std::vector<std::pair<std::string, std::vector<double>>> spectra_;
};

enum class RuntimeClass { Fast, Medium, Slow };  // < 1 s, < 10 s, < 60 s at defaults

struct ExperimentInfo {
    std::string name;
    std::string anchor;  // identity the experiment verifies
    std::string description;
    RuntimeClass runtime = RuntimeClass::Fast;
    std::vector<ParamSpec> params;
    std::function<void(ExperimentContext&)> run;
    std::function<std::vector<NamedMatrix>(const json& params)> exportMatrices;
};

const std::vector<ExperimentInfo>& registry();
const ExperimentInfo& find_experiment(const std::string& name);  // UnknownExperiment
// Fills defaults and validates types and ranges; InvalidParameter on failure.
json validate_params(const ExperimentInfo& info, const json& given);

struct ExperimentConfig {
    std::string name;
    json params = json::object();
    std::string outputDir;   // report directory for this experiment
    bool spectrumCsv = false;
};

enum class Verdict { Pass, Fail, Unstable };
std::string verdict_name(Verdict v);

struct ExperimentReport {
    std::string name;
    json params;
    json quantities;
    Verdict verdict = Verdict::Fail;
    double runtimeSeconds = 0.0;
    std::string anchor;
    std::string error;  // error kind and message when an exception ended the run
    std::vector<std::string> failedChecks;
    json toJson() const;
};

// Runs one experiment and writes <outputDir>/report.json (and spectra on
// request). Never throws for experiment-level failures: UnknownExperiment and
// parameter errors give verdict fail; AmbiguousKernel, Unstable and NoGap give
// unstable.
ExperimentReport run_experiment(const ExperimentConfig& config, std::mutex* writeLock = nullptr);

struct SuiteSummary {
    int pass = 0, fail = 0, unstable = 0;
    double runtimeSeconds = 0.0;
    std::vector<ExperimentReport> reports;  // in config order
    int exitCode() const { return fail > 0 ? 1 : (unstable > 0 ? 2 : 0); }
    json toJson() const;
};

// Runs configs on up to `workers` threads. Writes <outputDir>/summary.json when
// outputDir is non-empty.
SuiteSummary run_suite(const std::vector<ExperimentConfig>& configs, int workers = 1,
                       const std::string& outputDir = "");

struct SuiteConfig {
    std::string outputDir = "z2lab_out";
    int workers = 1;
    std::vector<ExperimentConfig> experiments;
};
// {"outputDir": ..., "workers": ..., "experiments": [{"name", "params", "label", "spectrumCsv"}]}
SuiteConfig parse_suite_config(const json& j);
SuiteConfig load_suite_config(const std::string& path);
// Every registry entry at default parameters; torus_flux once per n in 0..3.
SuiteConfig default_suite(const std::string& outputDir);

// "%%MatrixMarket matrix coordinate complex general", 1-based, 17 significant digits.
void write_matrix_market(const std::string& path, const SpMat& m);
SpMat read_matrix_market(const std::string& path);

}  // namespace z2
