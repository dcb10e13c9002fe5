#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kernelcorrupt/kernelcorrupt.hpp"

namespace py = pybind11;
using namespace kc;

namespace {

using DistD = Distribution<double>;
using KernelD = Kernel<double>;
using SpecD = CorruptionSpec<double>;

std::vector<std::vector<double>> kernel_rows(const KernelD& k) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < k.rows(); ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < k.cols(); ++j) row.push_back(k.entry(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Markov-kernel corruption of finite supervised learning problems: "
              "kernel algebra, corruption taxonomy, Bayes-risk equalities, "
              "Bayesian inversion and corrected losses.";

    py::register_exception<Error>(m, "KernelCorruptError");

    py::enum_<Role>(m, "Role").value("X", Role::X).value("Y", Role::Y);

    py::class_<FiniteSpace>(m, "FiniteSpace")
        .def(py::init<std::string, std::vector<std::string>>(), py::arg("name"), py::arg("points"))
        .def_property_readonly("name", &FiniteSpace::name)
        .def_property_readonly("points", &FiniteSpace::points)
        .def("__len__", &FiniteSpace::size)
        .def("index_of", &FiniteSpace::index_of)
        .def("__eq__", [](const FiniteSpace& a, const FiniteSpace& b) { return a == b; })
        .def("__repr__", [](const FiniteSpace& s) {
            return "FiniteSpace(" + s.name() + ", " + std::to_string(s.size()) + " points)";
        });

    py::class_<Space>(m, "Space")
        .def_static("unit", &Space::unit)
        .def_static("single", &Space::single, py::arg("role"), py::arg("space"))
        .def_static("pair", &Space::pair, py::arg("role1"), py::arg("space1"), py::arg("role2"),
                    py::arg("space2"))
        .def("__len__", &Space::size)
        .def_property_readonly("roles", &Space::roles)
        .def("point_label", &Space::point_label)
        .def("flat_index",
             [](const Space& s, const std::vector<std::size_t>& coords) {
                 return s.flat_index(std::span<const std::size_t>(coords.data(), coords.size()));
             })
        .def("unflatten", &Space::unflatten)
        .def("__eq__", [](const Space& a, const Space& b) { return a == b; });

    py::class_<DistD>(m, "Distribution")
        .def(py::init<Space, std::vector<double>>(), py::arg("space"), py::arg("weights"))
        .def_property_readonly("space", &DistD::space)
        .def_property_readonly("weights", &DistD::weights)
        .def("__len__", &DistD::size)
        .def("__getitem__", [](const DistD& d, std::size_t i) { return d[i]; })
        .def("total_mass", &DistD::total_mass);

    py::class_<FunctionOnSpace<double>>(m, "FunctionOnSpace")
        .def(py::init<Space, std::vector<double>>(), py::arg("space"), py::arg("values"))
        .def_readonly("space", &FunctionOnSpace<double>::space)
        .def_readonly("values", &FunctionOnSpace<double>::values);

    py::class_<KernelD>(m, "Kernel")
        .def(py::init<Space, Space, std::vector<double>>(), py::arg("domain"), py::arg("image"),
             py::arg("matrix_row_major"))
        .def_property_readonly("domain", &KernelD::domain)
        .def_property_readonly("image", &KernelD::image)
        .def_property_readonly("rows", &KernelD::rows)
        .def_property_readonly("cols", &KernelD::cols)
        .def("entry", &KernelD::entry)
        .def("column", &KernelD::column)
        .def("matrix", &kernel_rows);

    m.def("make_joint", &make_joint<double>, py::arg("x_space"), py::arg("y_space"), py::arg("weights"),
          "Joint over X x Y from a flat weight vector, X-outer / Y-inner.");
    m.def("uniform_distribution", &uniform_distribution<double>, py::arg("space"));
    m.def("marginal", &marginal<double>, py::arg("joint"), py::arg("role"));
    m.def("inner_product", &inner_product<double>, py::arg("distribution"), py::arg("function"));

    m.def("delta", &delta<double>, py::arg("space"), "Dirac identity kernel on a space.");
    m.def("constant_kernel", &constant_kernel<double>, py::arg("target"), py::arg("domain"));
    m.def("as_kernel", &as_kernel<double>, py::arg("distribution"));
    m.def("as_distribution", &as_distribution<double>, py::arg("kernel"));
    m.def("act_on_dist", &act_on_dist<double>, py::arg("kernel"), py::arg("distribution"));
    m.def("act_on_fn", &act_on_fn<double>, py::arg("kernel"), py::arg("function"));
    m.def("chain", &chain<double>, py::arg("kappa"), py::arg("lam"), "Run kappa, then lam.");
    m.def("product", &product<double>, py::arg("kappa"), py::arg("lam"));
    m.def("superpose", &superpose<double>, py::arg("kappa"), py::arg("lam"));
    m.def("partial_chain", &partial_chain<double>, py::arg("kappa"), py::arg("lam"), py::arg("over"));
    m.def("lift_domain", &lift_domain<double>, py::arg("kernel"), py::arg("target"));

    py::enum_<Direction>(m, "Direction")
        .value("Generative", Direction::Generative)
        .value("Discriminative", Direction::Discriminative);

    py::class_<Factorization<double>>(m, "Factorization")
        .def_readonly("direction", &Factorization<double>::direction)
        .def_readonly("prior", &Factorization<double>::prior)
        .def_readonly("conditional", &Factorization<double>::conditional)
        .def_readonly("uniform_filled", &Factorization<double>::uniform_filled);

    m.def("factorize", &factorize<double>, py::arg("joint"), py::arg("direction"));
    m.def("reassemble", &reassemble<double>, py::arg("factorization"));

    py::enum_<CorruptionType>(m, "CorruptionType")
        .value("SimpleX", CorruptionType::SimpleX)
        .value("SimpleY", CorruptionType::SimpleY)
        .value("OneDependentYX", CorruptionType::OneDependentYX)
        .value("OneDependentXY", CorruptionType::OneDependentXY)
        .value("TwoDependentX", CorruptionType::TwoDependentX)
        .value("TwoDependentY", CorruptionType::TwoDependentY)
        .value("OneParamJointFromX", CorruptionType::OneParamJointFromX)
        .value("OneParamJointFromY", CorruptionType::OneParamJointFromY)
        .value("Joint", CorruptionType::Joint)
        .value("Identity", CorruptionType::Identity)
        .value("Constant", CorruptionType::Constant);

    py::class_<Signature>(m, "Signature")
        .def(py::init([](std::vector<Role> domain, std::vector<Role> image) {
                 return Signature{std::move(domain), std::move(image)};
             }),
             py::arg("domain"), py::arg("image"))
        .def_readonly("domain", &Signature::domain)
        .def_readonly("image", &Signature::image);

    m.def("classify", &classify<double>, py::arg("kernel"));
    m.def("signature_of", &signature_of<double>, py::arg("kernel"));
    m.def("check_pairwise_feasible", &check_pairwise_feasible, py::arg("tau"), py::arg("lam"));

    py::class_<SpecD>(m, "CorruptionSpec")
        .def_static("factorized", &SpecD::factorized, py::arg("tau"), py::arg("lam"))
        .def_static("non_factorized", &SpecD::non_factorized, py::arg("joint"))
        .def_property_readonly("is_factorized", &SpecD::is_factorized)
        .def_property_readonly("tau", &SpecD::tau)
        .def_property_readonly("lam", &SpecD::lambda);

    m.def("build_joint", &build_joint<double>, py::arg("spec"));
    m.def("corrupt", &corrupt<double>, py::arg("joint"), py::arg("spec"));
    m.def("find_connecting_kernel", &find_connecting_kernel<double>, py::arg("source"), py::arg("target"));

    py::class_<LossFunction>(m, "LossFunction")
        .def_readonly("name", &LossFunction::name)
        .def_readonly("bound", &LossFunction::bound)
        .def_readonly("declared_proper", &LossFunction::declared_proper)
        .def("__call__", [](const LossFunction& l, const std::vector<double>& p, std::size_t y) {
            return l.eval(p, y);
        });

    m.def("brier_loss", &brier_loss, py::arg("y_space"));
    m.def("zero_one_loss", &zero_one_loss, py::arg("y_space"));
    m.def("validate_properness", &validate_properness, py::arg("loss"), py::arg("step") = 0.01,
          py::arg("tol") = 1e-6);
    m.def("simplex_grid", &simplex_grid, py::arg("dim"), py::arg("step") = 0.01);

    py::enum_<HypothesisOrigin>(m, "HypothesisOrigin")
        .value("AllDeterministic", HypothesisOrigin::AllDeterministic)
        .value("UserProvided", HypothesisOrigin::UserProvided);

    py::class_<HypothesisClass>(m, "HypothesisClass")
        .def_readonly("origin", &HypothesisClass::origin)
        .def("__len__", &HypothesisClass::size)
        .def("__getitem__",
             [](const HypothesisClass& h, std::size_t i) {
                 if (i >= h.size()) throw py::index_error();
                 return h[i];
             });

    m.def("all_deterministic_hypotheses", &all_deterministic_hypotheses, py::arg("x_space"),
          py::arg("y_space"), py::arg("cap") = 4096);
    m.def("make_hypothesis_class", &make_hypothesis_class, py::arg("hypotheses"),
          py::arg("origin") = HypothesisOrigin::UserProvided);

    py::class_<MinimizationSet>(m, "MinimizationSet")
        .def_readonly("space", &MinimizationSet::space)
        .def_readonly("functions", &MinimizationSet::functions)
        .def_readonly("hypothesis_ids", &MinimizationSet::hypothesis_ids)
        .def("__len__", &MinimizationSet::size);

    m.def("compose_loss_class", &compose_loss_class, py::arg("loss"), py::arg("hypotheses"));
    m.def("risk", &risk, py::arg("function"), py::arg("joint"));

    py::class_<BayesRiskResult>(m, "BayesRiskResult")
        .def_readonly("value", &BayesRiskResult::value)
        .def_readonly("argmin", &BayesRiskResult::argmin);

    m.def("bayes_risk", &bayes_risk, py::arg("set"), py::arg("joint"), py::arg("tie_eps") = kEpsTie);

    py::class_<LearningProblem>(m, "LearningProblem")
        .def(py::init<LossFunction, HypothesisClass, DistD>(), py::arg("loss"), py::arg("hypotheses"),
             py::arg("joint"))
        .def_readonly("loss", &LearningProblem::loss)
        .def_readonly("hypotheses", &LearningProblem::hypotheses)
        .def_readonly("joint", &LearningProblem::joint);

    py::enum_<DpeCase>(m, "DpeCase")
        .value("SimpleSimple", DpeCase::SimpleSimple)
        .value("TwoDepXSimpleY", DpeCase::TwoDepXSimpleY)
        .value("SimpleXTwoDepY", DpeCase::SimpleXTwoDepY)
        .value("OneDepYXTwoDepY", DpeCase::OneDepYXTwoDepY)
        .value("TwoDepXOneDepXY", DpeCase::TwoDepXOneDepXY)
        .value("OneDepYXOneDepXY", DpeCase::OneDepYXOneDepXY)
        .value("TwoDepXTwoDepY", DpeCase::TwoDepXTwoDepY);

    m.def("dpe_case_name", &dpe_case_name);
    m.def("applicable_dpe_cases", &applicable_dpe_cases<double>, py::arg("spec"));
    m.def("transformed_set", &transformed_set, py::arg("spec"), py::arg("loss"), py::arg("hypotheses"),
          py::arg("case"));
    m.def("transformed_set_unified", &transformed_set_unified, py::arg("spec"), py::arg("loss"),
          py::arg("hypotheses"));

    py::class_<DpeReport>(m, "DpeReport")
        .def_readonly("case", &DpeReport::dpe_case)
        .def_readonly("br_corrupted", &DpeReport::br_corrupted)
        .def_readonly("br_transformed_clean", &DpeReport::br_transformed_clean)
        .def_readonly("abs_gap", &DpeReport::abs_gap)
        .def_readonly("argmin_corrupted", &DpeReport::argmin_corrupted)
        .def_readonly("argmin_transformed", &DpeReport::argmin_transformed)
        .def_readonly("argmin_match", &DpeReport::argmin_match)
        .def_readonly("passed", &DpeReport::pass);

    m.def("verify_dpe", &verify_dpe, py::arg("problem"), py::arg("spec"), py::arg("case"),
          py::arg("eps_dpe") = kEpsDpe, py::arg("tie_eps") = kEpsTie);

    py::class_<RouteReport>(m, "RouteReport")
        .def_readonly("case", &RouteReport::dpe_case)
        .def_readonly("via_decomposition", &RouteReport::via_decomposition)
        .def_readonly("direct", &RouteReport::direct)
        .def_readonly("max_gap", &RouteReport::max_gap)
        .def_readonly("passed", &RouteReport::pass);

    m.def("factorized_corruption_identities", &factorized_corruption_identities, py::arg("joint"),
          py::arg("spec"), py::arg("tol") = 1e-12);

    py::class_<BayesianInverse>(m, "BayesianInverse")
        .def_readonly("forward", &BayesianInverse::forward)
        .def_readonly("source", &BayesianInverse::source)
        .def_readonly("pushed", &BayesianInverse::pushed)
        .def_readonly("inverse", &BayesianInverse::inverse)
        .def_readonly("off_support", &BayesianInverse::off_support);

    m.def("bayesian_inverse", &bayesian_inverse, py::arg("kernel"), py::arg("source"));

    py::class_<InversePropertyReport>(m, "InversePropertyReport")
        .def_readonly("reverse_gap", &InversePropertyReport::reverse_gap)
        .def_readonly("coupling_gap", &InversePropertyReport::coupling_gap)
        .def_readonly("expectation_gap", &InversePropertyReport::expectation_gap)
        .def_readonly("passed", &InversePropertyReport::pass);

    m.def("check_inverse_properties", &check_inverse_properties, py::arg("inverse"),
          py::arg("n_random_fns") = 50, py::arg("seed") = 20240, py::arg("tol") = 1e-10);

    py::enum_<CorrectionConstruction>(m, "CorrectionConstruction")
        .value("ClSimple", CorrectionConstruction::ClSimple)
        .value("ClDependent", CorrectionConstruction::ClDependent)
        .value("GclCase1", CorrectionConstruction::GclCase1)
        .value("GclCase2", CorrectionConstruction::GclCase2)
        .value("GclCase3", CorrectionConstruction::GclCase3)
        .value("GclCase4", CorrectionConstruction::GclCase4);

    py::class_<CorrectedLoss>(m, "CorrectedLoss")
        .def_property_readonly("construction", &CorrectedLoss::construction)
        .def_property_readonly("bound", &CorrectedLoss::bound)
        .def("__call__", &CorrectedLoss::operator(), py::arg("hypothesis"), py::arg("xt"), py::arg("yt"));

    m.def("cl_corrected_loss", &cl_corrected_loss, py::arg("lambda_clean"), py::arg("loss"));
    m.def("gcl_corrected_loss", &gcl_corrected_loss, py::arg("clean_spec"), py::arg("loss"),
          py::arg("hypothesis"));
    m.def("corrected_risk", &corrected_risk, py::arg("corrected_loss"), py::arg("hypothesis"),
          py::arg("corrupted_joint"));
    m.def("extract_label_factor", &extract_label_factor, py::arg("joint_kernel"), py::arg("eps") = 1e-9);

    py::class_<PushforwardDistribution>(m, "PushforwardDistribution")
        .def_readonly("support", &PushforwardDistribution::support)
        .def_readonly("weights", &PushforwardDistribution::weights)
        .def_readonly("index", &PushforwardDistribution::index);

    m.def("pushforward", &pushforward, py::arg("tau"), py::arg("hypothesis"), py::arg("index"));

    py::class_<McdSpec>(m, "McdSpec")
        .def(py::init<KernelD, std::vector<DistD>, DistD>(), py::arg("mixing"),
             py::arg("clean_conditionals"), py::arg("corrupted_prior"))
        .def_readonly("mixing", &McdSpec::mixing)
        .def_readonly("clean_conditionals", &McdSpec::clean_conditionals)
        .def_readonly("corrupted_prior", &McdSpec::corrupted_prior);

    py::class_<McdResult>(m, "McdResult")
        .def_readonly("corrupted_conditionals", &McdResult::corrupted_conditionals)
        .def_readonly("corrupted_joint", &McdResult::corrupted_joint);

    m.def("mcd_corrupt", &mcd_corrupt, py::arg("spec"));
    m.def("ccn_to_mcd", &ccn_to_mcd, py::arg("lambda_ccn"), py::arg("corrupted_prior"));

    py::class_<SelectionBiasSpec>(m, "SelectionBiasSpec")
        .def(py::init<std::vector<double>, DistD>(), py::arg("alpha"), py::arg("base"))
        .def_readonly("alpha", &SelectionBiasSpec::alpha)
        .def_readonly("base", &SelectionBiasSpec::base)
        .def_readonly("sup_alpha", &SelectionBiasSpec::sup_alpha);

    py::class_<SelectionBiasWitness>(m, "SelectionBiasWitness")
        .def_readonly("diagonal_column_sums", &SelectionBiasWitness::diagonal_column_sums)
        .def_readonly("diagonal_is_markov", &SelectionBiasWitness::diagonal_is_markov)
        .def_readonly("connecting", &SelectionBiasWitness::connecting)
        .def_readonly("connecting_gap", &SelectionBiasWitness::connecting_gap);

    m.def("selection_bias_corrupt", &selection_bias_corrupt, py::arg("spec"));
    m.def("selection_bias_markov_witness", &selection_bias_markov_witness, py::arg("spec"));
    m.def("normalized_selection_bias", &normalized_selection_bias, py::arg("raw_weights"), py::arg("base"));

    m.attr("EPS_MASS") = kEpsMass;
    m.attr("EPS_TIE") = kEpsTie;
    m.attr("EPS_DPE") = kEpsDpe;

#ifdef VERSION_INFO
#define KC_STR(x) #x
#define KC_XSTR(x) KC_STR(x)
    m.attr("__version__") = KC_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "0.1.0";
#endif
}
