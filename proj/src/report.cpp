#include "kernelcorrupt/report.hpp"

#include <sstream>

#include "json.hpp"

namespace kc {

namespace {

using nlohmann::json;

json input_echo(const ProblemFile& pf) { return json::parse(serialize_problem_file(pf)); }

json kernel_json(const Kernel<double>& k) {
    return json{{"rows", k.rows()}, {"cols", k.cols()}, {"data", k.matrix()}};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string pass_str(bool b) { return b ? "pass" : "FAIL"; }

} // namespace

ClassifyReport classify_problem(const ProblemFile& pf) {
    ClassifyReport rep;
    if (pf.infeasible_factors) {
        rep.factorized = true;
        rep.tau_type = classify(pf.infeasible_factors->first);
        rep.lambda_type = classify(pf.infeasible_factors->second);
        rep.feasible = false;
        rep.note = "factor images must write X and Y and the domains must jointly read X x Y";
        return rep;
    }
    const CorruptionSpec<double>& spec = *pf.corruption;
    rep.factorized = spec.is_factorized();
    if (rep.factorized) {
        rep.tau_type = classify(spec.tau());
        rep.lambda_type = classify(spec.lambda());
        rep.feasible = true;
        rep.note = "factor images write X and Y and the domains jointly read X x Y";
    } else {
        rep.feasible = true;
        rep.note = "non-factorized joint kernel";
    }
    rep.joint_type = classify(build_joint(spec));
    return rep;
}

VerifyReport run_verify(const ProblemFile& pf, const std::vector<DpeCase>& cases, bool rational_mode,
                        double eps_dpe) {
    if (!pf.corruption)
        throw InfeasibleFactorization("the corruption factors are not a feasible pair; only classify applies");
    const CorruptionSpec<double>& spec = *pf.corruption;
    VerifyReport rep;
    rep.overall_pass = true;

    Distribution<double> corrupted = corrupt(pf.joint, spec);
    rep.corrupted = corrupted.weights();

    std::optional<Distribution<Rational>> corrupted_exact;
    if (rational_mode) {
        if (!pf.joint_exact || !pf.corruption_exact)
            throw Error("rational mode needs every weight written as an integer, fraction or decimal string");
        corrupted_exact = corrupt(*pf.joint_exact, *pf.corruption_exact);
        std::vector<std::string> strs;
        for (const auto& r : corrupted_exact->weights()) strs.push_back(r.str());
        rep.corrupted_exact = std::move(strs);
    }

    if (pf.expected_corrupted) {
        rep.golden.present = true;
        if (rational_mode && pf.expected_corrupted_exact) {
            rep.golden.exact_mode = true;
            bool equal = true;
            for (std::size_t i = 0; i < corrupted_exact->size(); ++i)
                equal &= (*corrupted_exact)[i] == (*pf.expected_corrupted_exact)[i];
            rep.golden.max_gap = equal ? 0.0 : max_abs_gap(corrupted, *pf.expected_corrupted);
            rep.golden.pass = equal;
        } else {
            rep.golden.max_gap = max_abs_gap(corrupted, *pf.expected_corrupted);
            rep.golden.pass = rep.golden.max_gap <= 1e-12;
        }
        rep.overall_pass &= rep.golden.pass;
    }

    std::vector<DpeCase> run_cases = cases;
    if (run_cases.empty()) run_cases = applicable_dpe_cases(spec);
    if (run_cases.empty()) throw CaseMismatch("no equality case applies to this corruption");
    LearningProblem problem = pf.learning_problem();
    for (DpeCase c : run_cases) {
        if (!dpe_case_applicable(spec, c))
            throw CaseMismatch(std::string("corruption signatures do not fit case ") + dpe_case_name(c));
        rep.dpe.push_back(verify_dpe(problem, spec, c, eps_dpe));
        rep.overall_pass &= rep.dpe.back().pass;
    }

    auto exact_case = dpe_case_of(spec);
    if (spec.is_factorized() && exact_case && *exact_case != DpeCase::TwoDepXTwoDepY) {
        auto route = factorized_corruption_identities(pf.joint, spec);
        rep.route = RouteCheck{route.dpe_case, true, route.max_gap, route.pass};
        rep.overall_pass &= route.pass;
    } else {
        rep.route = RouteCheck{exact_case.value_or(DpeCase::TwoDepXTwoDepY), false, 0.0, true};
    }
    return rep;
}

InvertReport run_invert_correct(const ProblemFile& pf, std::uint64_t seed, double tol) {
    if (!pf.corruption)
        throw InfeasibleFactorization("the corruption factors are not a feasible pair; only classify applies");
    const CorruptionSpec<double>& spec = *pf.corruption;
    Kernel<double> kappa = build_joint(spec);
    auto inv = bayesian_inverse(kappa, pf.joint);

    InvertReport rep{inv.inverse, inv.off_support, check_inverse_properties(inv, 50, seed, tol),
                     "", std::nullopt, {}, 0.0, false};

    Distribution<double> corrupted = inv.pushed;
    auto label_factor = extract_label_factor(inv.inverse);
    if (label_factor) {
        if (auto simple = reduce_to_simple_label_factor(*label_factor)) label_factor = simple;
    }
    std::size_t ny = pf.y_space.size();

    auto base = compose_loss_class(pf.loss, pf.hypotheses);
    for (std::size_t id = 0; id < pf.hypotheses.size(); ++id) {
        CorrectionTable tab;
        tab.hypothesis_id = id;
        if (label_factor) {
            auto cl = cl_corrected_loss(*label_factor, pf.loss);
            rep.cl_construction = cl.construction();
            for (std::size_t z = 0; z < corrupted.size(); ++z)
                tab.values.push_back(cl(pf.hypotheses[id], z / ny, z % ny));
        } else {
            auto pulled = act_on_fn(inv.inverse, base.functions[id]);
            tab.values = pulled.values;
        }
        double corrected = 0.0;
        for (std::size_t z = 0; z < corrupted.size(); ++z) corrected += corrupted[z] * tab.values[z];
        tab.corrected_risk = corrected;
        tab.clean_risk = risk(base.functions[id], pf.joint);
        rep.risk_identity_gap = std::max(rep.risk_identity_gap, std::abs(corrected - tab.clean_risk));
        rep.tables.push_back(std::move(tab));
    }
    rep.path = label_factor ? "cl" : "gcl";
    rep.overall_pass = rep.properties.pass && rep.risk_identity_gap <= tol;
    return rep;
}

std::string classify_report_text(const ProblemFile& pf, const ClassifyReport& rep) {
    std::ostringstream os;
    os << "classification\n";
    if (rep.factorized) {
        os << "  tau:    " << corruption_type_name(*rep.tau_type) << "\n";
        os << "  lambda: " << corruption_type_name(*rep.lambda_type) << "\n";
    }
    if (rep.joint_type) os << "  joint:  " << corruption_type_name(*rep.joint_type) << "\n";
    os << "  feasible: " << (rep.feasible ? "true" : "false") << " (" << rep.note << ")\n";
    (void)pf;
    return os.str();
}

std::string verify_report_text(const ProblemFile& pf, const VerifyReport& rep) {
    std::ostringstream os;
    os << "corrupted joint:";
    for (std::size_t i = 0; i < rep.corrupted.size(); ++i) {
        os << " ";
        if (rep.corrupted_exact)
            os << (*rep.corrupted_exact)[i];
        else
            os << fmt(rep.corrupted[i]);
    }
    os << "\n";
    if (rep.golden.present) {
        os << "golden check: " << pass_str(rep.golden.pass);
        if (rep.golden.exact_mode)
            os << " (exact)";
        else
            os << " (max gap " << fmt(rep.golden.max_gap) << ")";
        os << "\n";
    }
    for (const auto& d : rep.dpe) {
        os << "case " << dpe_case_name(d.dpe_case) << ": " << pass_str(d.pass) << "  corrupted-side "
           << fmt(d.br_corrupted) << "  clean-side " << fmt(d.br_transformed_clean) << "  gap "
           << fmt(d.abs_gap) << "  minimizers " << (d.argmin_match ? "match" : "DIFFER") << "\n";
    }
    if (rep.route.available)
        os << "decomposition route (" << dpe_case_name(rep.route.dpe_case) << "): " << pass_str(rep.route.pass)
           << "  max gap " << fmt(rep.route.max_gap) << "\n";
    else
        os << "decomposition route: unavailable for " << dpe_case_name(rep.route.dpe_case) << "\n";
    os << "overall: " << pass_str(rep.overall_pass) << "\n";
    (void)pf;
    return os.str();
}

std::string invert_report_text(const ProblemFile& pf, const InvertReport& rep) {
    std::ostringstream os;
    os << "cleaning kernel (" << rep.inverse.rows() << "x" << rep.inverse.cols() << "):\n";
    for (std::size_t i = 0; i < rep.inverse.rows(); ++i) {
        os << " ";
        for (std::size_t j = 0; j < rep.inverse.cols(); ++j) os << " " << fmt(rep.inverse.entry(i, j));
        os << "\n";
    }
    if (!rep.off_support.empty()) {
        os << "off-support columns (uniform-filled):";
        for (auto i : rep.off_support) os << " " << i;
        os << "\n";
    }
    os << "inverse properties: reverse " << fmt(rep.properties.reverse_gap) << ", coupling "
       << fmt(rep.properties.coupling_gap) << ", expectation " << fmt(rep.properties.expectation_gap) << " ["
       << pass_str(rep.properties.pass) << "]\n";
    os << "correction path: " << rep.path;
    if (rep.cl_construction) os << " (" << correction_construction_name(*rep.cl_construction) << ")";
    os << "\n";
    for (const auto& t : rep.tables) {
        os << "  h" << t.hypothesis_id << ": corrected-risk " << fmt(t.corrected_risk) << "  clean-risk "
           << fmt(t.clean_risk) << "  loss";
        for (double v : t.values) os << " " << fmt(v);
        os << "\n";
    }
    os << "risk identity max gap: " << fmt(rep.risk_identity_gap) << "\n";
    os << "overall: " << pass_str(rep.overall_pass) << "\n";
    (void)pf;
    return os.str();
}

std::string classify_report_json(const ProblemFile& pf, const ClassifyReport& rep) {
    json out;
    out["input"] = input_echo(pf);
    json c;
    if (rep.factorized) {
        c["tau"] = corruption_type_name(*rep.tau_type);
        c["lambda"] = corruption_type_name(*rep.lambda_type);
    }
    if (rep.joint_type) c["joint"] = corruption_type_name(*rep.joint_type);
    c["feasible"] = rep.feasible;
    c["note"] = rep.note;
    out["classification"] = c;
    out["pass"] = true;
    return out.dump(2) + "\n";
}

std::string verify_report_json(const ProblemFile& pf, const VerifyReport& rep) {
    json out;
    out["input"] = input_echo(pf);
    out["corrupted"] = rep.corrupted;
    if (rep.corrupted_exact) out["corrupted_exact"] = *rep.corrupted_exact;
    if (rep.golden.present)
        out["golden"] = json{{"pass", rep.golden.pass},
                             {"exact", rep.golden.exact_mode},
                             {"max_gap", rep.golden.max_gap}};
    json cases = json::array();
    for (const auto& d : rep.dpe) {
        cases.push_back(json{{"case", dpe_case_name(d.dpe_case)},
                             {"br_corrupted", d.br_corrupted},
                             {"br_transformed_clean", d.br_transformed_clean},
                             {"abs_gap", d.abs_gap},
                             {"argmin_corrupted", d.argmin_corrupted},
                             {"argmin_transformed", d.argmin_transformed},
                             {"argmin_match", d.argmin_match},
                             {"pass", d.pass}});
    }
    out["dpe"] = cases;
    out["route"] = json{{"case", dpe_case_name(rep.route.dpe_case)},
                        {"available", rep.route.available},
                        {"max_gap", rep.route.max_gap},
                        {"pass", rep.route.pass}};
    out["pass"] = rep.overall_pass;
    return out.dump(2) + "\n";
}

std::string invert_report_json(const ProblemFile& pf, const InvertReport& rep) {
    json out;
    out["input"] = input_echo(pf);
    out["inverse"] = kernel_json(rep.inverse);
    out["off_support"] = rep.off_support;
    out["properties"] = json{{"reverse_gap", rep.properties.reverse_gap},
                             {"coupling_gap", rep.properties.coupling_gap},
                             {"expectation_gap", rep.properties.expectation_gap},
                             {"pass", rep.properties.pass}};
    out["path"] = rep.path;
    if (rep.cl_construction) out["construction"] = correction_construction_name(*rep.cl_construction);
    json tables = json::array();
    for (const auto& t : rep.tables)
        tables.push_back(json{{"hypothesis", t.hypothesis_id},
                              {"corrected_loss", t.values},
                              {"corrected_risk", t.corrected_risk},
                              {"clean_risk", t.clean_risk}});
    out["corrected"] = tables;
    out["risk_identity_gap"] = rep.risk_identity_gap;
    out["pass"] = rep.overall_pass;
    return out.dump(2) + "\n";
}

} // namespace kc
