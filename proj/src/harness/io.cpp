#include "z2index/harness.hpp"
#include "z2index/spectra.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace z2 {

namespace fs = std::filesystem;

std::string param_type_name(ParamType t) {
    switch (t) {
        case ParamType::Int: return "int";
        case ParamType::Double: return "double";
        case ParamType::Bool: return "bool";
        case ParamType::IntList: return "int[]";
        case ParamType::DoubleList: return "double[]";
    }
    return "?";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Unstable: return "unstable";
    }
    return "?";
}

bool ExperimentContext::check(const std::string& name, bool ok) {
    quantities_["checks"][name] = ok;
    if (!ok) failed_.push_back(name);
    return ok;
}

void ExperimentContext::audit(const std::string& name, double residual, double threshold) {
    quantities_["audits"][name] = {{"residual", residual}, {"threshold", threshold}};
    if (!(residual <= threshold)) failed_.push_back("audit:" + name);
}

void ExperimentContext::auditTau(const std::string& name, const AntiUnitary& tau) {
    audit(name + ".unitarity", tau.unitarityResidual(), 1e-10);
    audit(name + ".antisymmetry", tau.antisymmetryResidual(), 1e-14);
}

void ExperimentContext::spectrum(const std::string& op, const std::vector<double>& values) {
    spectra_.push_back({op, values});
}

json validate_params(const ExperimentInfo& info, const json& given) {
    if (!given.is_null() && !given.is_object()) throw InvalidParameter("params must be an object");
    json out = json::object();
    std::map<std::string, const ParamSpec*> specs;
    for (const ParamSpec& p : info.params) specs[p.name] = &p;
    if (given.is_object())
        for (auto it = given.begin(); it != given.end(); ++it)
            if (!specs.count(it.key()))
                throw InvalidParameter(info.name + ": unknown parameter '" + it.key() + "'");
    auto range = [&](const ParamSpec& p, double v) {
        if ((p.min && v < *p.min) || (p.max && v > *p.max)) {
            std::ostringstream os;
            os << info.name << ": parameter '" << p.name << "' = " << v << " outside [" << (p.min ? *p.min : -INFINITY)
               << ", " << (p.max ? *p.max : INFINITY) << "]";
            throw InvalidParameter(os.str());
        }
    };
    for (const ParamSpec& p : info.params) {
        json v = (given.is_object() && given.contains(p.name)) ? given.at(p.name) : p.defaultValue;
        const std::string where = info.name + ": parameter '" + p.name + "' must be " + param_type_name(p.type);
        switch (p.type) {
            case ParamType::Int:
                if (!v.is_number_integer()) throw InvalidParameter(where);
                range(p, v.get<double>());
                break;
            case ParamType::Double:
                if (!v.is_number()) throw InvalidParameter(where);
                v = v.get<double>();
                range(p, v.get<double>());
                break;
            case ParamType::Bool:
                if (!v.is_boolean()) throw InvalidParameter(where);
                break;
            case ParamType::IntList:
            case ParamType::DoubleList:
                if (!v.is_array() || v.empty()) throw InvalidParameter(where);
                for (auto& e : v) {
                    if (p.type == ParamType::IntList ? !e.is_number_integer() : !e.is_number())
                        throw InvalidParameter(where);
                    if (p.type == ParamType::DoubleList) e = e.get<double>();
                    range(p, e.get<double>());
                }
                break;
        }
        out[p.name] = v;
    }
    return out;
}

json ExperimentReport::toJson() const {
    json j;
    j["name"] = name;
    j["params"] = params;
    j["quantities"] = quantities;
    j["verdict"] = verdict_name(verdict);
    j["runtimeSeconds"] = runtimeSeconds;
    j["anchor"] = anchor;
    if (!error.empty()) j["error"] = error;
    if (!failedChecks.empty()) j["failedChecks"] = failedChecks;
    return j;
}

json SuiteSummary::toJson() const {
    json j;
    j["pass"] = pass;
    j["fail"] = fail;
    j["unstable"] = unstable;
    j["runtimeSeconds"] = runtimeSeconds;
    j["exitCode"] = exitCode();
    json list = json::array();
    for (const auto& r : reports)
        list.push_back({{"name", r.name}, {"verdict", verdict_name(r.verdict)}, {"runtimeSeconds", r.runtimeSeconds}});
    j["experiments"] = list;
    return j;
}

namespace {

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw InvalidParameter("cannot write " + p.string());
    f << text;
}

std::string safe_file_name(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') ? c : '_';
    return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, std::mutex* writeLock) {
    ExperimentReport rep;
    rep.name = config.name;
    rep.params = config.params;
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<ExperimentContext> ctx;
    try {
        const ExperimentInfo& info = find_experiment(config.name);
        rep.anchor = info.anchor;
        rep.params = validate_params(info, config.params);
        ctx.emplace(rep.params);
        info.run(*ctx);
        rep.verdict = ctx->allPassed() ? Verdict::Pass : Verdict::Fail;
        rep.failedChecks = ctx->failedChecks();
    } catch (const Z2Error& e) {
        const std::string& k = e.kind();
        rep.verdict = (k == "AmbiguousKernel" || k == "Unstable" || k == "NoGap") ? Verdict::Unstable : Verdict::Fail;
        rep.error = e.what();
    } catch (const std::exception& e) {
        rep.verdict = Verdict::Fail;
        rep.error = std::string("exception: ") + e.what();
    }
    if (ctx) rep.quantities = ctx->quantities();
    else rep.quantities = json::object();
    rep.runtimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!config.outputDir.empty()) {
        std::unique_lock<std::mutex> lock;
        if (writeLock) lock = std::unique_lock<std::mutex>(*writeLock);
        fs::create_directories(config.outputDir);
        write_text(fs::path(config.outputDir) / "report.json", rep.toJson().dump(2) + "\n");
        if (config.spectrumCsv && ctx) {
            const auto& sp = ctx->spectra();
            for (size_t i = 0; i < sp.size(); ++i) {
                // the first operator's spectrum is spectrum.csv, the rest live per operator
                fs::path p = i == 0 ? fs::path(config.outputDir) / "spectrum.csv"
                                    : fs::path(config.outputDir) / "spectra" / safe_file_name(sp[i].first) / "spectrum.csv";
                fs::create_directories(p.parent_path());
                write_spectrum_csv(p.string(), sp[i].second);
            }
            if (!sp.empty()) {
                json idx = json::object();
                for (size_t i = 0; i < sp.size(); ++i)
                    idx[sp[i].first] = i == 0 ? "spectrum.csv" : "spectra/" + safe_file_name(sp[i].first) + "/spectrum.csv";
                write_text(fs::path(config.outputDir) / "spectra.json", idx.dump(2) + "\n");
            }
        }
    }
    return rep;
}

SuiteSummary run_suite(const std::vector<ExperimentConfig>& configs, int workers, const std::string& outputDir) {
    SuiteSummary s;
    const auto t0 = std::chrono::steady_clock::now();
    s.reports.resize(configs.size());
    std::mutex lock;
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < configs.size(); i = next++) s.reports[i] = run_experiment(configs[i], &lock);
    };
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(configs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& r : s.reports) {
        if (r.verdict == Verdict::Pass) ++s.pass;
        else if (r.verdict == Verdict::Fail) ++s.fail;
        else ++s.unstable;
    }
    s.runtimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!outputDir.empty()) {
        fs::create_directories(outputDir);
        write_text(fs::path(outputDir) / "summary.json", s.toJson().dump(2) + "\n");
    }
    return s;
}

SuiteConfig parse_suite_config(const json& j) {
    if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
    SuiteConfig c;
    if (j.contains("outputDir")) c.outputDir = j.at("outputDir").get<std::string>();
    if (j.contains("workers")) {
        if (!j.at("workers").is_number_integer() || j.at("workers").get<int>() < 1)
            throw InvalidParameter("workers must be a positive integer");
        c.workers = j.at("workers").get<int>();
    }
    if (!j.contains("experiments") || !j.at("experiments").is_array())
        throw InvalidParameter("config needs an 'experiments' array");
    std::map<std::string, int> seen;
    for (const auto& e : j.at("experiments")) {
        if (!e.is_object() || !e.contains("name") || !e.at("name").is_string())
            throw InvalidParameter("each experiment needs a string 'name'");
        ExperimentConfig ec;
        ec.name = e.at("name").get<std::string>();
        if (e.contains("params")) ec.params = e.at("params");
        if (e.contains("spectrumCsv")) ec.spectrumCsv = e.at("spectrumCsv").get<bool>();
        std::string label = e.contains("label") ? e.at("label").get<std::string>() : ec.name;
        const int k = ++seen[label];
        if (k > 1) label += "_" + std::to_string(k);
        ec.outputDir = (fs::path(c.outputDir) / safe_file_name(label)).string();
        c.experiments.push_back(std::move(ec));
    }
    return c;
}

SuiteConfig load_suite_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParameter("cannot read config " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
    }
    SuiteConfig c = parse_suite_config(j);
    // relative output directories are resolved against the config's location
    if (!j.contains("outputDir") || fs::path(c.outputDir).is_relative()) {
        const fs::path base = fs::path(path).parent_path();
        for (auto& e : c.experiments) e.outputDir = (base / e.outputDir).string();
        c.outputDir = (base / c.outputDir).string();
    }
    return c;
}

SuiteConfig default_suite(const std::string& outputDir) {
    json j;
    j["outputDir"] = outputDir;
    json list = json::array();
    for (const auto& info : registry()) {
        if (info.name == "torus_flux") {
            for (int n = 0; n <= 3; ++n)
                list.push_back({{"name", info.name}, {"label", "torus_flux_n" + std::to_string(n)}, {"params", {{"n", n}}}});
        } else {
            list.push_back({{"name", info.name}});
        }
    }
    j["experiments"] = list;
    return parse_suite_config(j);
}

void write_matrix_market(const std::string& path, const SpMat& m) {
    std::ofstream f(path);
    if (!f) throw InvalidParameter("cannot write " + path);
    f << "%%MatrixMarket matrix coordinate complex general\n";
    f << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    char buf[128];
    for (Index j = 0; j < m.outerSize(); ++j)
        for (SpMat::InnerIterator it(m, j); it; ++it) {
            std::snprintf(buf, sizeof buf, "%ld %ld %.16e %.16e\n", long(it.row() + 1), long(j + 1), it.value().real(),
                          it.value().imag());
            f << buf;
        }
}

SpMat read_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParameter("cannot read " + path);
    std::string line;
    std::getline(f, line);
    if (line.rfind("%%MatrixMarket matrix coordinate complex general", 0) != 0)
        throw InvalidParameter(path + ": unsupported Matrix Market header");
    while (std::getline(f, line))
        if (!line.empty() && line[0] != '%') break;
    std::istringstream hs(line);
    long r, c, nnz;
    hs >> r >> c >> nnz;
    std::vector<Triplet> t;
    for (long k = 0; k < nnz; ++k) {
        long i, j;
        double re, im;
        f >> i >> j >> re >> im;
        t.emplace_back(i - 1, j - 1, cplx(re, im));
    }
    SpMat m(r, c);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace z2
