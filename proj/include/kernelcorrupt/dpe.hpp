#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kernelcorrupt/decision.hpp"
#include "kernelcorrupt/taxonomy.hpp"

namespace kc {

// Default absolute tolerance on the Bayes-risk equality.
inline constexpr double kEpsDpe = 1e-9;

// The seven feasible (tau, lambda) signature pairs.
enum class DpeCase {
    SimpleSimple,     // tau: X->X,   lambda: Y->Y
    TwoDepXSimpleY,   // tau: XxY->X, lambda: Y->Y
    SimpleXTwoDepY,   // tau: X->X,   lambda: XxY->Y
    OneDepYXTwoDepY,  // tau: Y->X,   lambda: XxY->Y
    TwoDepXOneDepXY,  // tau: XxY->X, lambda: X->Y
    OneDepYXOneDepXY, // tau: Y->X,   lambda: X->Y
    TwoDepXTwoDepY,   // tau: XxY->X, lambda: XxY->Y
};

inline constexpr std::array<DpeCase, 7> kAllDpeCases = {
    DpeCase::SimpleSimple,    DpeCase::TwoDepXSimpleY,   DpeCase::SimpleXTwoDepY,
    DpeCase::OneDepYXTwoDepY, DpeCase::TwoDepXOneDepXY,  DpeCase::OneDepYXOneDepXY,
    DpeCase::TwoDepXTwoDepY,
};

inline const char* dpe_case_name(DpeCase c) {
    switch (c) {
        case DpeCase::SimpleSimple: return "simple-simple";
        case DpeCase::TwoDepXSimpleY: return "twodepx-simpley";
        case DpeCase::SimpleXTwoDepY: return "simplex-twodepy";
        case DpeCase::OneDepYXTwoDepY: return "onedepyx-twodepy";
        case DpeCase::TwoDepXOneDepXY: return "twodepx-onedepxy";
        case DpeCase::OneDepYXOneDepXY: return "onedepyx-onedepxy";
        case DpeCase::TwoDepXTwoDepY: return "twodepx-twodepy";
    }
    return "?";
}

inline std::optional<DpeCase> dpe_case_from_name(const std::string& s) {
    for (DpeCase c : kAllDpeCases)
        if (s == dpe_case_name(c)) return c;
    return std::nullopt;
}

// Required domain roles (tau, lambda) per case; images are fixed (X, Y).
inline std::pair<std::vector<Role>, std::vector<Role>> dpe_case_domains(DpeCase c) {
    using R = std::vector<Role>;
    switch (c) {
        case DpeCase::SimpleSimple: return {R{Role::X}, R{Role::Y}};
        case DpeCase::TwoDepXSimpleY: return {R{Role::X, Role::Y}, R{Role::Y}};
        case DpeCase::SimpleXTwoDepY: return {R{Role::X}, R{Role::X, Role::Y}};
        case DpeCase::OneDepYXTwoDepY: return {R{Role::Y}, R{Role::X, Role::Y}};
        case DpeCase::TwoDepXOneDepXY: return {R{Role::X, Role::Y}, R{Role::X}};
        case DpeCase::OneDepYXOneDepXY: return {R{Role::Y}, R{Role::X}};
        case DpeCase::TwoDepXTwoDepY: return {R{Role::X, Role::Y}, R{Role::X, Role::Y}};
    }
    throw CaseMismatch("unknown case");
}

// The unique case whose required signatures match the corruption exactly.
template <class S>
std::optional<DpeCase> dpe_case_of(const CorruptionSpec<S>& spec) {
    if (!spec.is_factorized()) return DpeCase::TwoDepXTwoDepY;
    for (DpeCase c : kAllDpeCases) {
        auto [td, ld] = dpe_case_domains(c);
        if (spec.tau().domain_roles() == td && spec.lambda().domain_roles() == ld) return c;
    }
    return std::nullopt;
}

namespace detail {

// A one-role domain widens to the two-role domain by constancy; anything else
// must match exactly.
inline bool domain_liftable(const std::vector<Role>& actual, const std::vector<Role>& required) {
    if (actual == required) return true;
    return required.size() == 2 && actual.size() == 1;
}

template <class S>
Kernel<S> lift_to_domain(const Kernel<S>& k, const std::vector<Role>& required, const Space& joint_space) {
    if (k.domain_roles() == required) return k;
    std::vector<SpaceFactor> fs;
    for (Role r : required) fs.push_back(joint_space.factor_with_role(r));
    return lift_domain(k, Space(fs));
}

} // namespace detail

// Whether the corruption factors match the case signatures, possibly widening a
// simple or 1-dependent factor by constancy.
template <class S>
bool dpe_case_applicable(const CorruptionSpec<S>& spec, DpeCase c) {
    if (!spec.is_factorized()) return c == DpeCase::TwoDepXTwoDepY;
    auto [td, ld] = dpe_case_domains(c);
    return detail::domain_liftable(spec.tau().domain_roles(), td) &&
           detail::domain_liftable(spec.lambda().domain_roles(), ld);
}

template <class S>
std::vector<DpeCase> applicable_dpe_cases(const CorruptionSpec<S>& spec) {
    std::vector<DpeCase> out;
    for (DpeCase c : kAllDpeCases)
        if (dpe_case_applicable(spec, c)) out.push_back(c);
    return out;
}

// The transformed minimization set: for each hypothesis h the score function
//   f_h(x, y) = sum_xt tau(xt | sel_tau(x,y)) sum_yt lambda(yt | sel_lambda(x,y)) l(h(xt), yt)
// with the argument selections fixed by the case's signatures.
inline MinimizationSet transformed_set(const CorruptionSpec<double>& spec, const LossFunction& loss,
                                       const HypothesisClass& hyps, DpeCase c) {
    if (!dpe_case_applicable(spec, c))
        throw CaseMismatch(std::string("corruption signatures do not fit case ") + dpe_case_name(c));

    const Kernel<double>& h0 = hyps[0];
    const FiniteSpace& xs = h0.domain().factors()[0].space;
    const FiniteSpace& ys = h0.image().factors()[0].space;
    Space prod = Space::pair(Role::X, xs, Role::Y, ys);
    std::size_t nx = xs.size(), ny = ys.size();

    MinimizationSet set;
    set.space = prod;

    if (!spec.is_factorized()) {
        // Joint kernels act on the composed score function directly.
        const Kernel<double>& joint = spec.joint_kernel();
        if (joint.domain() != prod)
            throw SpaceMismatch("corruption kernel does not act on the problem's X x Y");
        auto base = compose_loss_class(loss, hyps);
        for (std::size_t i = 0; i < base.size(); ++i)
            set.functions.push_back(act_on_fn(joint, base.functions[i]));
        set.hypothesis_ids = base.hypothesis_ids;
        return set;
    }

    auto [td, ld] = dpe_case_domains(c);
    Kernel<double> tau = detail::lift_to_domain(spec.tau(), td, prod);
    Kernel<double> lambda = detail::lift_to_domain(spec.lambda(), ld, prod);
    if (tau.image().factors()[0].space != xs || lambda.image().factors()[0].space != ys)
        throw SpaceMismatch("corruption factors do not write the problem's spaces");

    auto proj_tau = index_projection(prod, tau.domain());
    auto proj_lambda = index_projection(prod, lambda.domain());

    for (std::size_t id = 0; id < hyps.size(); ++id) {
        // loss table on (clean-side prediction point, label)
        std::vector<double> ltab(nx * ny);
        for (std::size_t xt = 0; xt < nx; ++xt) {
            auto p = hyps[id].column(xt);
            for (std::size_t yt = 0; yt < ny; ++yt) ltab[xt * ny + yt] = loss.eval(p, yt);
        }
        std::vector<double> vals(prod.size(), 0.0);
        for (std::size_t z = 0; z < prod.size(); ++z) {
            std::size_t jt = proj_tau[z], jl = proj_lambda[z];
            double acc = 0.0;
            for (std::size_t xt = 0; xt < nx; ++xt) {
                double tw = tau.entry(xt, jt);
                if (tw == 0.0) continue;
                double inner = 0.0;
                for (std::size_t yt = 0; yt < ny; ++yt)
                    inner += lambda.entry(yt, jl) * ltab[xt * ny + yt];
                acc += tw * inner;
            }
            vals[z] = acc;
        }
        set.functions.emplace_back(prod, std::move(vals));
        set.hypothesis_ids.push_back(id);
    }
    return set;
}

// Same set through the joint kernel's action on l∘H; used as the second
// algebraic route in tests.
inline MinimizationSet transformed_set_unified(const CorruptionSpec<double>& spec, const LossFunction& loss,
                                               const HypothesisClass& hyps) {
    Kernel<double> joint = build_joint(spec);
    auto base = compose_loss_class(loss, hyps);
    MinimizationSet set;
    set.space = base.space;
    if (joint.domain() != base.space)
        throw SpaceMismatch("corruption kernel does not act on the problem's X x Y");
    for (std::size_t i = 0; i < base.size(); ++i)
        set.functions.push_back(act_on_fn(joint, base.functions[i]));
    set.hypothesis_ids = base.hypothesis_ids;
    return set;
}

struct DpeReport {
    DpeCase dpe_case = DpeCase::SimpleSimple;
    double br_corrupted = 0.0;
    double br_transformed_clean = 0.0;
    double abs_gap = 0.0;
    std::vector<std::size_t> argmin_corrupted;
    std::vector<std::size_t> argmin_transformed;
    bool argmin_match = false;
    bool pass = false;
};

// Bayes risk of the corrupted problem with the original set against the
// clean problem with the transformed set.
inline DpeReport verify_dpe(const LearningProblem& problem, const CorruptionSpec<double>& spec, DpeCase c,
                            double eps_dpe = kEpsDpe, double tie_eps = kEpsTie) {
    DpeReport rep;
    rep.dpe_case = c;

    Distribution<double> corrupted = corrupt(problem.joint, spec);
    auto base = compose_loss_class(problem.loss, problem.hypotheses);
    auto lhs = bayes_risk(base, corrupted, tie_eps);

    auto transformed = transformed_set(spec, problem.loss, problem.hypotheses, c);
    auto rhs = bayes_risk(transformed, problem.joint, tie_eps);

    rep.br_corrupted = lhs.value;
    rep.br_transformed_clean = rhs.value;
    rep.abs_gap = std::abs(lhs.value - rhs.value);
    rep.argmin_corrupted = lhs.argmin;
    rep.argmin_transformed = rhs.argmin;
    rep.argmin_match = lhs.argmin == rhs.argmin;
    rep.pass = rep.abs_gap <= eps_dpe && rep.argmin_match;
    return rep;
}

struct RouteReport {
    DpeCase dpe_case;
    Distribution<double> via_decomposition;
    Distribution<double> direct;
    double max_gap;
    bool pass;
};

// Rebuilds the corrupted joint through the per-case prior/conditional
// decomposition and compares with the direct kernel action. The
// both-2-dependent case admits no such decomposition.
inline RouteReport factorized_corruption_identities(const Distribution<double>& P,
                                                    const CorruptionSpec<double>& spec,
                                                    double tol = 1e-12) {
    auto c = dpe_case_of(spec);
    if (!spec.is_factorized() || !c)
        throw DecompositionUnavailable("corruption does not carry a decomposable factorization");
    if (*c == DpeCase::TwoDepXTwoDepY)
        throw DecompositionUnavailable("both factors read X x Y; the action does not decompose");

    Distribution<double> via = [&]() -> Distribution<double> {
        const Kernel<double>& tau = spec.tau();
        const Kernel<double>& lambda = spec.lambda();
        switch (*c) {
            case DpeCase::SimpleSimple: {
                auto g = factorize(P, Direction::Generative);
                return act_on_dist(superpose(chain(g.conditional, tau), lambda), g.prior);
            }
            case DpeCase::TwoDepXSimpleY: {
                auto g = factorize(P, Direction::Generative);
                return act_on_dist(superpose(partial_chain(g.conditional, tau, Role::X), lambda), g.prior);
            }
            case DpeCase::SimpleXTwoDepY: {
                auto d = factorize(P, Direction::Discriminative);
                return act_on_dist(superpose(tau, partial_chain(d.conditional, lambda, Role::Y)), d.prior);
            }
            case DpeCase::OneDepYXTwoDepY: {
                auto g = factorize(P, Direction::Generative);
                return act_on_dist(superpose(tau, partial_chain(g.conditional, lambda, Role::X)), g.prior);
            }
            case DpeCase::TwoDepXOneDepXY: {
                auto d = factorize(P, Direction::Discriminative);
                return act_on_dist(superpose(partial_chain(d.conditional, tau, Role::Y), lambda), d.prior);
            }
            case DpeCase::OneDepYXOneDepXY: {
                auto g = factorize(P, Direction::Generative);
                return act_on_dist(superpose(tau, chain(g.conditional, lambda)), g.prior);
            }
            default:
                throw DecompositionUnavailable("unreachable");
        }
    }();

    Distribution<double> direct = corrupt(P, spec);
    double gap = max_abs_gap(via, direct);
    return RouteReport{*c, std::move(via), std::move(direct), gap, gap <= tol};
}

} // namespace kc
