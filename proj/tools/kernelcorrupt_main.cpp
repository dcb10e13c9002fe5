#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "kernelcorrupt/report.hpp"

namespace {

double dpe_tolerance() {
    if (const char* env = std::getenv("KERNELCORRUPT_TOL")) {
        try {
            double v = std::stod(env);
            if (v > 0.0) return v;
        } catch (const std::exception&) {
            throw kc::Error("KERNELCORRUPT_TOL is not a number");
        }
        throw kc::Error("KERNELCORRUPT_TOL must be positive");
    }
    return kc::kEpsDpe;
}

void emit(const std::string& text, const std::string& structured, const std::string& format,
          const std::string& report_path) {
    std::cout << (format == "structured" ? structured : text);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw kc::Error("cannot write report to " + report_path);
        out << structured;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernelcorrupt: corruption taxonomy, Bayes-risk equalities and loss corrections on finite spaces"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string case_name = "all";
    bool rational = false;
    std::uint64_t seed = 20240;
    std::string report_path;
    std::string format = "text";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
        cmd->add_option("--report", report_path, "write the structured report to this path");
        cmd->add_option("--format", format, "stdout format: text or structured")
            ->check(CLI::IsMember({"text", "structured"}));
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify the corruption and check feasibility");
    add_common(classify_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "verify the Bayes-risk equalities");
    add_common(verify_cmd);
    verify_cmd->add_option("--case", case_name, "equality case tag, or 'all' for every applicable case");
    verify_cmd->add_flag("--rational", rational, "compute the corrupted joint in exact arithmetic");

    CLI::App* invert_cmd = app.add_subcommand("invert-correct", "invert the corruption and emit corrected losses");
    add_common(invert_cmd);
    invert_cmd->add_option("--seed", seed, "seed for the randomized expectation checks");

    CLI11_PARSE(app, argc, argv);

    try {
        kc::ProblemFile pf = kc::load_problem_file(problem_path);
        double tol = dpe_tolerance();

        if (classify_cmd->parsed()) {
            auto rep = kc::classify_problem(pf);
            emit(kc::classify_report_text(pf, rep), kc::classify_report_json(pf, rep), format, report_path);
            return 0;
        }
        if (verify_cmd->parsed()) {
            std::vector<kc::DpeCase> cases;
            if (case_name != "all") {
                auto c = kc::dpe_case_from_name(case_name);
                if (!c) throw kc::CaseMismatch("unknown case tag '" + case_name + "'");
                cases.push_back(*c);
            }
            auto rep = kc::run_verify(pf, cases, rational, tol);
            emit(kc::verify_report_text(pf, rep), kc::verify_report_json(pf, rep), format, report_path);
            return rep.overall_pass ? 0 : 1;
        }
        auto rep = kc::run_invert_correct(pf, seed, std::max(tol, 1e-10));
        emit(kc::invert_report_text(pf, rep), kc::invert_report_json(pf, rep), format, report_path);
        return rep.overall_pass ? 0 : 1;
    } catch (const kc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
