#pragma once

#include "z2index/callias.hpp"
#include "z2index/discretize.hpp"
#include "z2index/harness.hpp"
#include "z2index/spectra.hpp"
#include "z2index/toeplitz.hpp"

#include <random>

namespace z2::harness {

ParamSpec p_int(const std::string& name, int def, std::optional<double> lo, std::optional<double> hi,
                const std::string& desc);
ParamSpec p_double(const std::string& name, double def, std::optional<double> lo, std::optional<double> hi,
                   const std::string& desc);
ParamSpec p_bool(const std::string& name, bool def, const std::string& desc);
ParamSpec p_ints(const std::string& name, std::vector<int> def, std::optional<double> lo, std::optional<double> hi,
                 const std::string& desc);
ParamSpec p_doubles(const std::string& name, std::vector<double> def, std::optional<double> lo,
                    std::optional<double> hi, const std::string& desc);

// JSON cannot hold inf; those become the string "inf".
json num(double v);
json head(const std::vector<double>& v, size_t n = 6);
json spectral_summary(const SpectralReport& r);

// Kernel analysis recorded under quantities[key]; the full singular spectrum is
// kept for spectrum.csv.
SpectralReport record(ExperimentContext& ctx, const std::string& key, const DiscreteOperator& op,
                      const KernelPolicy& policy);

Mat random_complex(std::mt19937_64& rng, Index r, Index c);

std::vector<ExperimentInfo> line_experiments();
std::vector<ExperimentInfo> torus_experiments();
std::vector<ExperimentInfo> core_experiments();
std::vector<ExperimentInfo> callias_experiments();
std::vector<ExperimentInfo> toeplitz_experiments();

}  // namespace z2::harness
