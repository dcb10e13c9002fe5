#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kernelcorrupt/decision.hpp"
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

std::size_t label_of(const Kernel<double>& h, std::size_t x) {
    auto col = h.column(x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < col.size(); ++k)
        if (col[k] > col[best]) best = k;
    return best;
}

} // namespace

TEST_CASE("brier loss values") {
    auto l = brier_loss(label_pm());
    std::vector<double> onehot = {1.0, 0.0};
    CHECK(l.eval(onehot, 0) == 0.0);
    CHECK(l.eval(onehot, 1) == 2.0);
    std::vector<double> half = {0.5, 0.5};
    CHECK(l.eval(half, 0) == doctest::Approx(0.5));
    CHECK(l.eval(half, 1) == doctest::Approx(0.5));
    CHECK(l.bound == 2.0);
    CHECK(l.declared_proper);
    CHECK(validate_loss_bounds(l));
}

TEST_CASE("brier loss grid argmin sits at the true conditional") {
    auto l = brier_loss(label_pm());
    std::vector<double> p = {0.7, 0.3};
    auto grid = simplex_grid(2, 0.01);
    double best = 1e9;
    std::vector<double> best_q;
    for (const auto& q : grid) {
        double e = p[0] * l.eval(q, 0) + p[1] * l.eval(q, 1);
        if (e < best) {
            best = e;
            best_q = q;
        }
    }
    REQUIRE(best_q.size() == 2);
    CHECK(best_q[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(best_q[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(validate_properness(l));
}

TEST_CASE("zero-one loss with the documented tie-break") {
    auto l = zero_one_loss(label_pm());
    std::vector<double> onehot = {0.0, 1.0};
    CHECK(l.eval(onehot, 1) == 0.0);
    CHECK(l.eval(onehot, 0) == 1.0);
    std::vector<double> half = {0.5, 0.5}; // tie goes to index 0
    CHECK(l.eval(half, 1) == 1.0);
    CHECK(l.eval(half, 0) == 0.0);

    auto l3 = zero_one_loss(sized_space("Y", 3));
    std::vector<double> third = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(l3.eval(third, 0) == 0.0);
    CHECK_FALSE(l3.declared_proper);
}

TEST_CASE("all deterministic hypotheses enumerate every labeling") {
    CHECK(all_deterministic_hypotheses(attr_bw(), label_pm()).size() == 4);
    CHECK(all_deterministic_hypotheses(sized_space("X", 3), label_pm()).size() == 8);
    CHECK(all_deterministic_hypotheses(sized_space("X", 4), sized_space("Y", 3)).size() == 81);
    CHECK_THROWS_AS(all_deterministic_hypotheses(sized_space("X", 7), sized_space("Y", 4)), CapExceeded);

    // id encoding: most-significant digit is x = 0
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    CHECK(label_of(H[1], 0) == 0);
    CHECK(label_of(H[1], 1) == 1);
    CHECK(label_of(H[2], 0) == 1);
    CHECK(label_of(H[2], 1) == 0);
}

TEST_CASE("compose_loss_class builds one score function per hypothesis") {
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto brier = brier_loss(label_pm());
    auto set = compose_loss_class(brier, H);
    REQUIRE(set.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(set.hypothesis_ids[i] == i);

    // the always-(+1) classifier scores zero whenever the label is +1
    const auto& always_plus = set.functions[0]; // id 0 maps both x to label 0 = "+1"
    CHECK(always_plus.values[0 * 2 + 0] == 0.0);
    CHECK(always_plus.values[1 * 2 + 0] == 0.0);
    CHECK(always_plus.values[0 * 2 + 1] == 2.0);

    auto zo = compose_loss_class(zero_one_loss(label_pm()), H);
    for (const auto& f : zo.functions)
        for (double v : f.values) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("risk of constants and of the posterior-matching hypothesis") {
    auto P1 = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    Space prod = P1.space();
    FunctionOnSpace<double> zero(prod, std::vector<double>(4, 0.0));
    CHECK(risk(zero, P1) == 0.0);
    FunctionOnSpace<double> c(prod, std::vector<double>(4, 0.37));
    CHECK(risk(c, P1) == doctest::Approx(0.37).epsilon(1e-15));

    // posterior-matching stochastic hypothesis under the uniform joint:
    // direct summation oracle sum_x pi(x) sum_y F(x,y) * brier(F(x), y)
    auto brier = brier_loss(label_pm());
    Kernel<double> matching(Space::single(Role::X, attr_bw()), Space::single(Role::Y, label_pm()),
                            {0.5, 0.5, 0.5, 0.5});
    auto set = compose_loss_class(brier, make_hypothesis_class({matching}));
    double oracle = 0.0;
    for (std::size_t x = 0; x < 2; ++x) {
        std::vector<double> F = {0.5, 0.5};
        for (std::size_t y = 0; y < 2; ++y) oracle += 0.5 * F[y] * brier.eval(F, y);
    }
    CHECK(oracle == doctest::Approx(0.5));
    CHECK(risk(set.functions[0], P1) == doctest::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("risk is linear in the distribution") {
    std::mt19937_64 rng(1);
    auto P = random_joint(attr_bw(), label_pm(), rng);
    auto Q = random_joint(attr_bw(), label_pm(), rng);
    auto f = random_function(P.space(), rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        double a = unif(rng);
        std::vector<double> mix(4);
        for (std::size_t i = 0; i < 4; ++i) mix[i] = a * P[i] + (1 - a) * Q[i];
        Distribution<double> M(P.space(), mix);
        CHECK(risk(f, M) == doctest::Approx(a * risk(f, P) + (1 - a) * risk(f, Q)).epsilon(1e-12));
    }
}

TEST_CASE("bayes risk of a point mass under zero-one loss") {
    Space prod = Space::pair(Role::X, attr_bw(), Role::Y, label_pm());
    Distribution<double> pm(prod, {0.0, 0.0, 1.0, 0.0}); // mass at (w, +1)
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto res = bayes_risk(compose_loss_class(zero_one_loss(label_pm()), H), pm);
    CHECK(res.value == 0.0);
    // winners are exactly the hypotheses mapping w -> +1
    std::vector<std::size_t> want;
    for (std::size_t id = 0; id < 4; ++id)
        if (label_of(H[id], 1) == 0) want.push_back(id);
    CHECK(res.argmin == want);
    CHECK(res.argmin.size() == 2);
}

TEST_CASE("bayes risk under the uniform joint ties across all deterministic rules") {
    auto P1 = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto brier = brier_loss(label_pm());
    auto set = compose_loss_class(brier, H);

    // enumeration oracle: risk of every labeling by raw loops
    double expected = -1.0;
    for (std::size_t id = 0; id < 4; ++id) {
        double r = 0.0;
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) {
                std::vector<double> pred(2, 0.0);
                pred[label_of(H[id], x)] = 1.0;
                r += 0.25 * brier.eval(pred, y);
            }
        if (expected < 0) expected = r;
        CHECK(r == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(expected == doctest::Approx(1.0));

    auto res = bayes_risk(set, P1);
    CHECK(res.value == doctest::Approx(expected).epsilon(1e-15));
    CHECK(res.argmin == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("bayes risk of a singleton set is that member's risk") {
    std::mt19937_64 rng(2);
    auto P = random_joint(attr_bw(), label_pm(), rng);
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    auto set = compose_loss_class(brier_loss(label_pm()), H);
    MinimizationSet single{set.space, {set.functions[2]}, {2}};
    auto res = bayes_risk(single, P);
    CHECK(res.value == doctest::Approx(risk(set.functions[2], P)).epsilon(1e-15));
    CHECK(res.argmin == std::vector<std::size_t>{2});
}

TEST_CASE("bayes risk never increases when the class grows") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto P = random_joint(attr_bw(), label_pm(), rng);
        auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
        auto set = compose_loss_class(brier_loss(label_pm()), H);
        MinimizationSet sub{set.space, {set.functions[0], set.functions[1]}, {0, 1}};
        CHECK(bayes_risk(set, P).value <= bayes_risk(sub, P).value + 1e-15);
    }
}

TEST_CASE("with a proper loss the posterior-matching hypothesis attains the minimum") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 25; ++t) {
        auto P = random_joint(attr_bw(), label_pm(), rng);
        auto f = factorize(P, Direction::Discriminative);
        auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
        std::vector<Kernel<double>> hs = H.hypotheses;
        hs.push_back(f.conditional); // inject the matching hypothesis, id 4
        auto cls = make_hypothesis_class(std::move(hs));
        auto res = bayes_risk(compose_loss_class(brier_loss(label_pm()), cls), P);
        bool contains_matching = false;
        for (auto id : res.argmin) contains_matching |= (id == 4);
        CHECK(contains_matching);
    }
}

TEST_CASE("learning problem validates its pieces") {
    auto P1 = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    auto H = all_deterministic_hypotheses(attr_bw(), label_pm());
    CHECK_NOTHROW(LearningProblem(brier_loss(label_pm()), H, P1));
    CHECK_THROWS_AS(LearningProblem(brier_loss(sized_space("Y", 3)), H, P1), SpaceMismatch);
    auto H_other = all_deterministic_hypotheses(sized_space("X", 3), label_pm());
    CHECK_THROWS_AS(LearningProblem(brier_loss(label_pm()), H_other, P1), SpaceMismatch);
}
