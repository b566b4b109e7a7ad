#include "experiments.hpp"

#include <cmath>

namespace z2 {

namespace harness {

ParamSpec p_int(const std::string& name, int def, std::optional<double> lo, std::optional<double> hi,
                const std::string& desc) {
    return {name, ParamType::Int, def, lo, hi, desc};
}
ParamSpec p_double(const std::string& name, double def, std::optional<double> lo, std::optional<double> hi,
                   const std::string& desc) {
    return {name, ParamType::Double, def, lo, hi, desc};
}
ParamSpec p_bool(const std::string& name, bool def, const std::string& desc) {
    return {name, ParamType::Bool, def, std::nullopt, std::nullopt, desc};
}
ParamSpec p_ints(const std::string& name, std::vector<int> def, std::optional<double> lo, std::optional<double> hi,
                 const std::string& desc) {
    return {name, ParamType::IntList, def, lo, hi, desc};
}
ParamSpec p_doubles(const std::string& name, std::vector<double> def, std::optional<double> lo,
                    std::optional<double> hi, const std::string& desc) {
    return {name, ParamType::DoubleList, def, lo, hi, desc};
}

json num(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json head(const std::vector<double>& v, size_t n) {
    json a = json::array();
    for (size_t i = 0; i < std::min(n, v.size()); ++i) a.push_back(num(v[i]));
    return a;
}

json spectral_summary(const SpectralReport& r) {
    json j;
    j["kernelDim"] = r.kernelDim;
    j["parity"] = r.kernelDim % 2;
    j["detectionGap"] = num(r.detectionGap);
    j["threshold"] = num(r.threshold);
    j["sigmaMax"] = num(r.sigmaMax);
    j["smallestSingularValues"] = head(r.singularValues);
    if (r.deflation.applied) {
        j["rawKernelDim"] = r.deflation.rawKernelDim;
        j["artifactDim"] = r.deflation.artifactDim;
        j["artifactWeights"] = head(r.deflation.weights, 16);
        j["physicalResiduals"] = head(r.deflation.physicalResiduals, 16);
        j["deflatedValues"] = head(r.deflatedValues());
    } else {
        j["rawKernelDim"] = r.kernelDim;
    }
    return j;
}

SpectralReport record(ExperimentContext& ctx, const std::string& key, const DiscreteOperator& op,
                      const KernelPolicy& policy) {
    SpectralReport r = analyze_kernel(op, policy).report;
    ctx.q()[key] = spectral_summary(r);
    ctx.spectrum(key, r.singularValues);
    return r;
}

Mat random_complex(std::mt19937_64& rng, Index r, Index c) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat m(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i) m(i, j) = cplx(g(rng), g(rng));
    return m;
}


}  // namespace harness

const std::vector<ExperimentInfo>& registry() {
    static const std::vector<ExperimentInfo> all = [] {
        std::vector<ExperimentInfo> v;
        for (auto f : {harness::line_experiments, harness::torus_experiments, harness::core_experiments,
                       harness::callias_experiments, harness::toeplitz_experiments})
            for (auto& e : f()) v.push_back(std::move(e));
        return v;
    }();
    return all;
}

const ExperimentInfo& find_experiment(const std::string& name) {
    for (const auto& e : registry())
        if (e.name == name) return e;
    throw UnknownExperiment("no experiment named '" + name + "'");
}

}  // namespace z2
