#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kernelcorrupt/dpe.hpp"
#include "kernelcorrupt/inversion.hpp"
#include "kernelcorrupt/problem_io.hpp"

namespace kc {

struct ClassifyReport {
    bool factorized = false;
    std::optional<CorruptionType> tau_type;
    std::optional<CorruptionType> lambda_type;
    std::optional<CorruptionType> joint_type; // absent when the pair is infeasible
    bool feasible = false;
    std::string note;
};

ClassifyReport classify_problem(const ProblemFile& pf);

struct GoldenCheck {
    bool present = false;
    bool exact_mode = false;
    double max_gap = 0.0;
    bool pass = true;
};

struct RouteCheck {
    DpeCase dpe_case = DpeCase::SimpleSimple;
    bool available = false;
    double max_gap = 0.0;
    bool pass = true;
};

struct VerifyReport {
    std::vector<double> corrupted;
    std::optional<std::vector<std::string>> corrupted_exact; // rational strings in exact mode
    GoldenCheck golden;
    std::vector<DpeReport> dpe;
    RouteCheck route;
    bool overall_pass = false;
};

// Runs the requested cases (empty = all applicable) plus the decomposition
// route and the optional golden comparison.
VerifyReport run_verify(const ProblemFile& pf, const std::vector<DpeCase>& cases, bool rational_mode,
                        double eps_dpe);

struct CorrectionTable {
    std::size_t hypothesis_id = 0;
    std::vector<double> values; // corrected loss over (x~, y~), X-outer
    double corrected_risk = 0.0;
    double clean_risk = 0.0;
};

struct InvertReport {
    Kernel<double> inverse;
    std::vector<std::size_t> off_support;
    InversePropertyReport properties;
    std::string path; // "cl" or "gcl"
    std::optional<CorrectionConstruction> cl_construction;
    std::vector<CorrectionTable> tables;
    double risk_identity_gap = 0.0;
    bool overall_pass = false;
};

InvertReport run_invert_correct(const ProblemFile& pf, std::uint64_t seed, double tol);

std::string classify_report_text(const ProblemFile& pf, const ClassifyReport& rep);
std::string verify_report_text(const ProblemFile& pf, const VerifyReport& rep);
std::string invert_report_text(const ProblemFile& pf, const InvertReport& rep);

std::string classify_report_json(const ProblemFile& pf, const ClassifyReport& rep);
std::string verify_report_json(const ProblemFile& pf, const VerifyReport& rep);
std::string invert_report_json(const ProblemFile& pf, const InvertReport& rep);

} // namespace kc
