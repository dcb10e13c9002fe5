#pragma once

#include <optional>
#include <string>

#include "kernelcorrupt/decision.hpp"
#include "kernelcorrupt/taxonomy.hpp"

namespace kc {

// A parsed problem file: spaces, clean joint, loss and hypothesis selectors,
// the corruption, and optional golden expectations / cleaning spec. Exact
// rational views are kept alongside the double ones whenever every number in
// the file was written as an integer, "a/b" fraction, or decimal string.
struct ProblemFile {
    FiniteSpace x_space;
    FiniteSpace y_space;

    Distribution<double> joint;
    std::string loss_selector; // "brier", "zero_one" or "table"
    LossFunction loss;
    std::string hypothesis_selector; // "all_deterministic" or "explicit"
    HypothesisClass hypotheses;
    // present when the corruption is non-factorized or a feasible pair
    std::optional<CorruptionSpec<double>> corruption;
    // present instead when a factorized pair fails the pairwise feasibility
    // rule; classification can still report the verdict
    std::optional<std::pair<Kernel<double>, Kernel<double>>> infeasible_factors;
    std::optional<Distribution<double>> expected_corrupted;
    std::optional<CorruptionSpec<double>> cleaning;

    std::optional<Distribution<Rational>> joint_exact;
    std::optional<CorruptionSpec<Rational>> corruption_exact;
    std::optional<Distribution<Rational>> expected_corrupted_exact;

    // loss table echo for serialization when loss_selector == "table"
    std::vector<std::vector<double>> loss_table;
    double loss_table_bound = 0.0;
    std::vector<std::vector<std::size_t>> explicit_labels;

    LearningProblem learning_problem() const { return LearningProblem(loss, hypotheses, joint); }
};

ProblemFile parse_problem_file(const std::string& json_text);
ProblemFile load_problem_file(const std::string& path);
std::string serialize_problem_file(const ProblemFile& pf);

} // namespace kc
