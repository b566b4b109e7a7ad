// Runs the default suite once and judges the twelve acceptance criteria from
// the reports. Exit status 0 iff every criterion passes.
#include "z2index/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace z2;

namespace {

struct Judge {
    std::map<std::string, const ExperimentReport*> byLabel;

    const ExperimentReport* get(const std::string& label) const {
        auto it = byLabel.find(label);
        return it == byLabel.end() ? nullptr : it->second;
    }
    bool passed(const std::string& label, std::string& why) const {
        const ExperimentReport* r = get(label);
        if (!r) {
            why += label + " missing; ";
            return false;
        }
        if (r->verdict == Verdict::Pass) return true;
        why += label + " " + verdict_name(r->verdict);
        if (!r->error.empty()) why += " (" + r->error + ")";
        for (const auto& f : r->failedChecks) why += " [" + f + "]";
        why += "; ";
        return false;
    }
    bool all(const std::vector<std::string>& labels, std::string& why) const {
        bool ok = true;
        for (const auto& l : labels) ok = passed(l, why) && ok;
        return ok;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria over the default experiment suite"};
    std::string out = "acceptance_out";
    int workers = 1;
    app.add_option("-o,--output", out, "report directory");
    app.add_option("-j,--workers", workers, "parallel experiments");
    CLI11_PARSE(app, argc, argv);

    SuiteConfig cfg = default_suite(out);
    SuiteSummary s = run_suite(cfg.experiments, workers, cfg.outputDir);

    Judge j;
    for (size_t i = 0; i < cfg.experiments.size(); ++i)
        j.byLabel[fs::path(cfg.experiments[i].outputDir).filename().string()] = &s.reports[i];

    struct Line {
        int id;
        std::string text;
        bool ok;
        std::string why;
    };
    std::vector<Line> lines;
    auto add = [&](int id, const std::string& text, const std::vector<std::string>& labels) {
        Line l{id, text, false, ""};
        l.ok = j.all(labels, l.why);
        lines.push_back(l);
        return &lines.back();
    };

    {
        Line* l = add(1, "line normalization: parity 1, sigma1 < 1e-6, sigma2/sigma1 >= 1e4, < 30 s",
                      {"line_normalization"});
        if (const auto* r = j.get("line_normalization"); r && r->runtimeSeconds >= 30.0) {
            l->ok = false;
            l->why += "runtime " + std::to_string(r->runtimeSeconds) + " s; ";
        }
    }
    add(2, "trivial torus: dim ker D+ = 1 at cutoffs 4, 8, 16", {"torus_trivial"});
    add(3, "flux torus: ind dbar = n, ind_tau = n mod 2 for n = 0..3",
        {"torus_flux_n0", "torus_flux_n1", "torus_flux_n2", "torus_flux_n3"});
    add(4, "Kramers: even multiplicities for random odd symmetric and tau-commuting matrices", {"kramers_random"});
    add(5, "homotopy and compact perturbation: zero parity flips", {"homotopy_path", "compact_perturbation"});
    add(6, "model operator: dim ker M(+/-) = dim ker d_N(+/-)", {"cylinder_model"});
    add(7, "Callias on T^2 x R: ind_tau B = 1, sign and lambda independence",
        {"callias_t2xR", "phi_negation", "lambda_phi_sweep"});
    add(8, "relative index: four-term parity sum even, counts unambiguous", {"relative_index_1d"});
    add(9, "compact odd-dimensional vanishing: 20 circle operators with even kernel", {"vanishing_compact_circle"});
    add(10, "empty essential support: kernel-free B with sigma_min^2 >= 0.9 margin", {"admissibility_audit"});
    add(11, "Toeplitz: class invariance and ind_tau T_f = ind_tau C on the Landau model",
        {"toeplitz_class_invariance", "toeplitz_vs_callias_landau"});
    {
        Line l{12, "structural invariants: all audits hold, zero fail verdicts, suite < 600 s", true, ""};
        int audits = 0;
        for (const auto& r : s.reports) {
            if (r.quantities.contains("audits"))
                for (auto it = r.quantities["audits"].begin(); it != r.quantities["audits"].end(); ++it) {
                    ++audits;
                    const json& a = it.value();
                    if (!a["residual"].is_number() || a["residual"].get<double>() > a["threshold"].get<double>()) {
                        l.ok = false;
                        l.why += r.name + ":" + it.key() + "; ";
                    }
                }
        }
        if (audits == 0) {
            l.ok = false;
            l.why += "no audits recorded; ";
        }
        if (s.fail > 0) {
            l.ok = false;
            l.why += std::to_string(s.fail) + " fail verdicts; ";
        }
        if (s.runtimeSeconds >= 600.0) {
            l.ok = false;
            l.why += "suite runtime " + std::to_string(s.runtimeSeconds) + " s; ";
        }
        l.text += " (" + std::to_string(audits) + " audits, " + std::to_string(s.runtimeSeconds) + " s)";
        lines.push_back(l);
    }

    bool all = true;
    for (const auto& l : lines) {
        all = all && l.ok;
        std::cout << (l.ok ? "PASS" : "FAIL") << "  criterion " << l.id << ": " << l.text;
        if (!l.ok) std::cout << "  -- " << l.why;
        std::cout << '\n';
    }
    std::cout << "suite: pass " << s.pass << ", fail " << s.fail << ", unstable " << s.unstable << '\n';
    return all ? 0 : 1;
}
