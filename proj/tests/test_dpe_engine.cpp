#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kernelcorrupt/dpe.hpp"
#include "kernelcorrupt/random_gen.hpp"

using namespace kc;

namespace {

FiniteSpace attr_bw() { return FiniteSpace("X", {"b", "w"}); }
FiniteSpace label_pm() { return FiniteSpace("Y", {"+1", "-1"}); }

FiniteSpace sized_space(const std::string& name, std::size_t n) {
    std::vector<std::string> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(name + std::to_string(i));
    return FiniteSpace(name, pts);
}

Kernel<double> recidivism_lambda() {
    Space dom = Space::pair(Role::X, attr_bw(), Role::Y, label_pm());
    Space img = Space::single(Role::Y, label_pm());
    std::vector<double> m = {
        0.9, 0.0, 0.8, 0.0,
        0.1, 1.0, 0.2, 1.0,
    };
    return Kernel<double>(dom, img, m);
}

// Independent oracle for the transformed score functions: explicit per-case
// argument selection and a raw double sum, no shared index machinery.
double oracle_transformed_value(DpeCase c, const Kernel<double>& tau, const Kernel<double>& lambda,
                                const LossFunction& loss, const Kernel<double>& h, std::size_t x,
                                std::size_t y, std::size_t nx, std::size_t ny) {
    std::size_t jt = 0, jl = 0;
    switch (c) {
        case DpeCase::SimpleSimple: jt = x; jl = y; break;
        case DpeCase::TwoDepXSimpleY: jt = x * ny + y; jl = y; break;
        case DpeCase::SimpleXTwoDepY: jt = x; jl = x * ny + y; break;
        case DpeCase::OneDepYXTwoDepY: jt = y; jl = x * ny + y; break;
        case DpeCase::TwoDepXOneDepXY: jt = x * ny + y; jl = x; break;
        case DpeCase::OneDepYXOneDepXY: jt = y; jl = x; break;
        case DpeCase::TwoDepXTwoDepY: jt = x * ny + y; jl = x * ny + y; break;
    }
    double acc = 0.0;
    for (std::size_t xt = 0; xt < nx; ++xt)
        for (std::size_t yt = 0; yt < ny; ++yt) {
            auto p = h.column(xt);
            acc += tau.entry(xt, jt) * lambda.entry(yt, jl) * loss.eval(p, yt);
        }
    return acc;
}

} // namespace

TEST_CASE("the identity corruption leaves the minimization set unchanged") {
    Space xsp = Space::single(Role::X, attr_bw());
    Space ysp = Space::single(Role::Y, label_pm());
    auto spec = CorruptionSpec<double>::factorized(delta<double>(xsp), delta<double>(ysp));
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto brier = brier_loss(label_pm());
    auto base = compose_loss_class(brier, H);
    auto t = transformed_set(spec, brier, H, DpeCase::SimpleSimple);
    REQUIRE(t.size() == base.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t z = 0; z < 4; ++z)
            CHECK(t.functions[i].values[z] == doctest::Approx(base.functions[i].values[z]).epsilon(1e-15));
}

TEST_CASE("label-only specs only rework the loss: scores factor through the corrected loss") {
    std::mt19937_64 rng(1);
    Space xsp = Space::single(Role::X, attr_bw());
    auto lam = recidivism_lambda();
    auto spec = CorruptionSpec<double>::factorized(delta<double>(xsp), lam);
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto brier = brier_loss(label_pm());
    auto t = transformed_set(spec, brier, H, DpeCase::SimpleXTwoDepY);
    for (std::size_t id = 0; id < H.size(); ++id)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) {
                auto p = H[id].column(x);
                double corrected = 0.0; // mix the loss at the untouched input point
                for (std::size_t yt = 0; yt < 2; ++yt)
                    corrected += lam.entry(yt, x * 2 + y) * brier.eval(p, yt);
                CHECK(t.functions[id].values[x * 2 + y] == doctest::Approx(corrected).epsilon(1e-14));
            }
    (void)rng;
}

TEST_CASE("transformed_set matches the per-case double-sum oracle and the unified route") {
    std::mt19937_64 rng(2);
    const std::vector<std::pair<std::size_t, std::size_t>> shapes = {{2, 2}, {3, 2}, {2, 3}, {4, 3}};
    for (auto [nx, ny] : shapes) {
        FiniteSpace xs = sized_space("X", nx);
        FiniteSpace ys = sized_space("Y", ny);
        auto brier = brier_loss(ys);
        auto H = all_deterministic_hypotheses(xs, ys);
        for (DpeCase c : kAllDpeCases) {
            for (int t = 0; t < 10; ++t) {
                auto spec = random_spec_for_case(c, xs, ys, rng);
                auto set = transformed_set(spec, brier, H, c);
                auto unified = transformed_set_unified(spec, brier, H);
                for (std::size_t id = 0; id < H.size(); ++id)
                    for (std::size_t x = 0; x < nx; ++x)
                        for (std::size_t y = 0; y < ny; ++y) {
                            double want = oracle_transformed_value(c, spec.tau(), spec.lambda(), brier,
                                                                   H[id], x, y, nx, ny);
                            CHECK(set.functions[id].values[x * ny + y] ==
                                  doctest::Approx(want).epsilon(1e-12));
                            CHECK(unified.functions[id].values[x * ny + y] ==
                                  doctest::Approx(want).epsilon(1e-12));
                        }
            }
        }
    }
}

TEST_CASE("case compatibility: exact signatures, widening, and mismatches") {
    std::mt19937_64 rng(3);
    auto spec = CorruptionSpec<double>::factorized(delta<double>(Space::single(Role::X, attr_bw())),
                                                   recidivism_lambda());
    auto cases = applicable_dpe_cases(spec);
    CHECK(cases == std::vector<DpeCase>{DpeCase::SimpleXTwoDepY, DpeCase::TwoDepXTwoDepY});

    auto onedep = random_spec_for_case(DpeCase::OneDepYXOneDepXY, attr_bw(), label_pm(), rng);
    CHECK(dpe_case_applicable(onedep, DpeCase::OneDepYXOneDepXY));
    CHECK(dpe_case_applicable(onedep, DpeCase::TwoDepXTwoDepY));
    CHECK_FALSE(dpe_case_applicable(onedep, DpeCase::SimpleSimple));
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    CHECK_THROWS_AS(transformed_set(onedep, brier_loss(label_pm()), H, DpeCase::SimpleSimple), CaseMismatch);
}

TEST_CASE("a widened case computes the same transformed set") {
    std::mt19937_64 rng(4);
    auto brier = brier_loss(label_pm());
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto spec = random_spec_for_case(DpeCase::SimpleSimple, attr_bw(), label_pm(), rng);
    auto exact = transformed_set(spec, brier, H, DpeCase::SimpleSimple);
    auto widened = transformed_set(spec, brier, H, DpeCase::TwoDepXTwoDepY);
    for (std::size_t i = 0; i < exact.size(); ++i)
        for (std::size_t z = 0; z < 4; ++z)
            CHECK(exact.functions[i].values[z] == doctest::Approx(widened.functions[i].values[z]).epsilon(1e-14));
}

TEST_CASE("verify_dpe: identity corruption gives a zero gap") {
    Space xsp = Space::single(Role::X, attr_bw());
    Space ysp = Space::single(Role::Y, label_pm());
    auto spec = CorruptionSpec<double>::factorized(delta<double>(xsp), delta<double>(ysp));
    auto P1 = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    LearningProblem prob(brier_loss(label_pm()), all_deterministic_hypotheses(attr_bw(), label_pm()), P1);
    auto rep = verify_dpe(prob, spec, DpeCase::SimpleSimple);
    CHECK(rep.abs_gap == 0.0);
    CHECK(rep.argmin_match);
    CHECK(rep.pass);
}

TEST_CASE("verify_dpe passes on the recidivism instance") {
    Space xsp = Space::single(Role::X, attr_bw());
    auto spec = CorruptionSpec<double>::factorized(delta<double>(xsp), recidivism_lambda());
    auto P1 = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    LearningProblem prob(brier_loss(label_pm()), all_deterministic_hypotheses(attr_bw(), label_pm()), P1);
    auto rep = verify_dpe(prob, spec, DpeCase::SimpleXTwoDepY);
    CHECK(rep.pass);
    CHECK(rep.abs_gap <= 1e-12);
    CHECK(rep.argmin_corrupted == rep.argmin_transformed);
}

TEST_CASE("verify_dpe passes on random instances for every case") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> nx_d(2, 4), ny_d(2, 3);
    for (DpeCase c : kAllDpeCases) {
        for (int t = 0; t < 50; ++t) {
            FiniteSpace xs = sized_space("X", nx_d(rng));
            FiniteSpace ys = sized_space("Y", ny_d(rng));
            auto spec = random_spec_for_case(c, xs, ys, rng);
            LearningProblem prob(brier_loss(ys), all_deterministic_hypotheses(xs, ys),
                                 random_joint(xs, ys, rng));
            auto rep = verify_dpe(prob, spec, c);
            CHECK(rep.abs_gap <= 1e-9);
            CHECK(rep.argmin_match);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("verify_dpe accepts a non-factorized joint under the most general case") {
    std::mt19937_64 rng(6);
    auto kappa = random_joint_kernel(attr_bw(), label_pm(), rng);
    auto spec = CorruptionSpec<double>::non_factorized(kappa);
    LearningProblem prob(brier_loss(label_pm()), all_deterministic_hypotheses(attr_bw(), label_pm()),
                         random_joint(attr_bw(), label_pm(), rng));
    auto rep = verify_dpe(prob, spec, DpeCase::TwoDepXTwoDepY);
    CHECK(rep.pass);
    CHECK_THROWS_AS(verify_dpe(prob, spec, DpeCase::SimpleSimple), CaseMismatch);
}

TEST_CASE("the decomposition route rebuilds the corrupted joint for six cases") {
    std::mt19937_64 rng(7);
    for (DpeCase c : kAllDpeCases) {
        if (c == DpeCase::TwoDepXTwoDepY) continue;
        for (int t = 0; t < 30; ++t) {
            auto spec = random_spec_for_case(c, attr_bw(), label_pm(), rng);
            auto P = random_joint(attr_bw(), label_pm(), rng);
            auto rep = factorized_corruption_identities(P, spec);
            CHECK(rep.max_gap <= 1e-12);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("the identity corruption decomposes to the original joint on both routes") {
    Space xsp = Space::single(Role::X, attr_bw());
    Space ysp = Space::single(Role::Y, label_pm());
    auto spec = CorruptionSpec<double>::factorized(delta<double>(xsp), delta<double>(ysp));
    auto P = make_joint<double>(attr_bw(), label_pm(), {0.3, 0.2, 0.25, 0.25});
    auto rep = factorized_corruption_identities(P, spec);
    CHECK(max_abs_gap(rep.via_decomposition, P) <= 1e-15);
    CHECK(max_abs_gap(rep.direct, P) <= 1e-15);
}

TEST_CASE("the both-2-dependent case reports no decomposition") {
    std::mt19937_64 rng(8);
    auto spec = random_spec_for_case(DpeCase::TwoDepXTwoDepY, attr_bw(), label_pm(), rng);
    auto P = random_joint(attr_bw(), label_pm(), rng);
    CHECK_THROWS_AS(factorized_corruption_identities(P, spec), DecompositionUnavailable);

    auto nf = CorruptionSpec<double>::non_factorized(random_joint_kernel(attr_bw(), label_pm(), rng));
    CHECK_THROWS_AS(factorized_corruption_identities(P, nf), DecompositionUnavailable);
}

TEST_CASE("dpe case names round-trip") {
    for (DpeCase c : kAllDpeCases) {
        auto back = dpe_case_from_name(dpe_case_name(c));
        REQUIRE(back.has_value());
        CHECK(*back == c);
    }
    CHECK_FALSE(dpe_case_from_name("nope").has_value());
}
