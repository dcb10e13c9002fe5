#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kernelcorrupt/noncore.hpp"
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

} // namespace

TEST_CASE("an identity mixing matrix leaves the conditionals unchanged") {
    std::mt19937_64 rng(1);
    Space xsp = Space::single(Role::X, sized_space("X", 3));
    Space ysp = Space::single(Role::Y, label_pm());
    std::vector<Distribution<double>> conds = {random_distribution(xsp, rng), random_distribution(xsp, rng)};
    McdSpec spec(delta<double>(ysp), conds, random_distribution(ysp, rng));
    auto res = mcd_corrupt(spec);
    for (std::size_t m = 0; m < 2; ++m) CHECK(max_abs_gap(res.corrupted_conditionals[m], conds[m]) == 0.0);
}

TEST_CASE("a mixing matrix with all weight on the first clean class copies it everywhere") {
    std::mt19937_64 rng(2);
    Space xsp = Space::single(Role::X, sized_space("X", 3));
    Space ysp = Space::single(Role::Y, label_pm());
    std::vector<Distribution<double>> conds = {random_distribution(xsp, rng), random_distribution(xsp, rng)};
    // both observed classes draw only from clean class 0
    Kernel<double> mixing(ysp, ysp, {1.0, 1.0, 0.0, 0.0});
    McdSpec spec(mixing, conds, random_distribution(ysp, rng));
    auto res = mcd_corrupt(spec);
    CHECK(max_abs_gap(res.corrupted_conditionals[0], conds[0]) <= 1e-15);
    CHECK(max_abs_gap(res.corrupted_conditionals[1], conds[0]) <= 1e-15);
}

TEST_CASE("mcd conditionals match the direct mixture sum and stay valid distributions") {
    std::mt19937_64 rng(3);
    Space xsp = Space::single(Role::X, sized_space("X", 3));
    Space ysp = Space::single(Role::Y, label_pm());
    for (int t = 0; t < 40; ++t) {
        std::vector<Distribution<double>> conds = {random_distribution(xsp, rng),
                                                   random_distribution(xsp, rng)};
        auto mixing = random_kernel(ysp, ysp, rng);
        auto prior = random_distribution(ysp, rng);
        McdSpec spec(mixing, conds, prior);
        auto res = mcd_corrupt(spec);
        for (std::size_t m = 0; m < 2; ++m) {
            CHECK(res.corrupted_conditionals[m].total_mass() == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t x = 0; x < 3; ++x) {
                double want = mixing.entry(0, m) * conds[0][x] + mixing.entry(1, m) * conds[1][x];
                CHECK(res.corrupted_conditionals[m][x] == doctest::Approx(want).epsilon(1e-14));
            }
        }
        // joint glues prior and conditionals, X-outer
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t m = 0; m < 2; ++m)
                CHECK(res.corrupted_joint[x * 2 + m] ==
                      doctest::Approx(prior[m] * res.corrupted_conditionals[m][x]).epsilon(1e-14));
    }
}

TEST_CASE("ccn_to_mcd: identity noise maps to identity mixing") {
    Space ysp = Space::single(Role::Y, label_pm());
    std::mt19937_64 rng(4);
    auto prior = random_distribution(ysp, rng);
    auto mixing = ccn_to_mcd(delta<double>(ysp), prior);
    CHECK(max_abs_gap(mixing, delta<double>(ysp)) <= 1e-15);
}

TEST_CASE("ccn_to_mcd: uniform prior and symmetric noise cancel the normalization") {
    Space ysp = Space::single(Role::Y, label_pm());
    Kernel<double> sym(ysp, ysp, {0.8, 0.2, 0.2, 0.8});
    Distribution<double> unif(ysp, {0.5, 0.5});
    auto mixing = ccn_to_mcd(sym, unif);
    CHECK(max_abs_gap(mixing, sym) <= 1e-14);
}

TEST_CASE("ccn_to_mcd reproduces the corrupted conditionals on the uniform worked instance") {
    // uniform joint, label flips 1/10 toward -1; the observed marginal is (9/20, 11/20)
    auto P1 = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    Space ysp = Space::single(Role::Y, label_pm());
    Space xsp = Space::single(Role::X, attr_bw());
    Kernel<double> lam_b(ysp, ysp, {0.9, 0.0, 0.1, 1.0});

    auto spec = CorruptionSpec<double>::factorized(delta<double>(xsp), lift_domain(lam_b, P1.space()));
    auto corrupted = corrupt(P1, spec);
    auto corrupted_gen = factorize(corrupted, Direction::Generative);

    auto mixing = ccn_to_mcd(lam_b, corrupted_gen.prior);
    CHECK(mixing.entry(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mixing.entry(1, 0) == doctest::Approx(0.0));
    CHECK(mixing.entry(0, 1) == doctest::Approx(9.0 / 119.0).epsilon(1e-12));
    CHECK(mixing.entry(1, 1) == doctest::Approx(110.0 / 119.0).epsilon(1e-12));

    auto clean_gen = factorize(P1, Direction::Generative);
    std::vector<Distribution<double>> conds;
    for (std::size_t y = 0; y < 2; ++y)
        conds.emplace_back(Space::single(Role::X, attr_bw()), clean_gen.conditional.column(y));
    McdSpec mcd(mixing, conds, corrupted_gen.prior);
    auto res = mcd_corrupt(mcd);
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t x = 0; x < 2; ++x)
            CHECK(res.corrupted_conditionals[m][x] ==
                  doctest::Approx(corrupted_gen.conditional.entry(x, m)).epsilon(1e-12));
    CHECK(max_abs_gap(res.corrupted_joint, corrupted) <= 1e-12);
}

TEST_CASE("ccn_to_mcd rejects unreachable corrupted classes") {
    Space ysp = Space::single(Role::Y, label_pm());
    Kernel<double> never_second(ysp, ysp, {1.0, 1.0, 0.0, 0.0});
    Distribution<double> prior(ysp, {0.5, 0.5});
    CHECK_THROWS_AS(ccn_to_mcd(never_second, prior), ZeroDenominator);
}

TEST_CASE("selection bias with a unit density is the identity") {
    std::mt19937_64 rng(5);
    auto P = random_joint(attr_bw(), label_pm(), rng);
    SelectionBiasSpec spec(std::vector<double>(4, 1.0), P);
    CHECK(max_abs_gap(selection_bias_corrupt(spec), P) == 0.0);
}

TEST_CASE("selection bias conditions on half the support") {
    auto P = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    SelectionBiasSpec spec({2.0, 2.0, 0.0, 0.0}, P);
    auto Q = selection_bias_corrupt(spec);
    CHECK(Q[0] == doctest::Approx(0.5));
    CHECK(Q[1] == doctest::Approx(0.5));
    CHECK(Q[2] == 0.0);
    CHECK(Q[3] == 0.0);
}

TEST_CASE("selection bias rejects densities that do not integrate to one") {
    auto P = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS_AS(SelectionBiasSpec({0.9, 0.9, 0.9, 0.9}, P), NotADensity);
    CHECK_THROWS_AS(SelectionBiasSpec({-1.0, 2.0, 2.0, 1.0}, P), NegativeWeight);
}

TEST_CASE("normalized_selection_bias records the scale it divided out") {
    auto P = make_joint<double>(attr_bw(), label_pm(), {0.25, 0.25, 0.25, 0.25});
    auto [spec, scale] = normalized_selection_bias({1.0, 1.0, 1.0, 5.0}, P);
    CHECK(scale == doctest::Approx(2.0));
    CHECK(spec.alpha[3] == doctest::Approx(2.5));
    CHECK(spec.sup_alpha == doctest::Approx(2.5));
}

TEST_CASE("the diagonal transition form is Markov exactly when alpha is 1") {
    std::mt19937_64 rng(6);
    auto P = random_joint(attr_bw(), label_pm(), rng);

    SelectionBiasSpec flat(std::vector<double>(4, 1.0), P);
    auto w_flat = selection_bias_markov_witness(flat);
    CHECK(w_flat.diagonal_is_markov);
    for (double s : w_flat.diagonal_column_sums) CHECK(s == 1.0);

    for (int t = 0; t < 100; ++t) {
        auto base = random_joint(attr_bw(), label_pm(), rng);
        auto raw = dirichlet_uniform(4, rng);
        auto [spec, scale] = normalized_selection_bias(raw, base);
        auto w = selection_bias_markov_witness(spec);
        // the transition form scales each point by alpha, so its column sums are alpha
        CHECK(w.diagonal_column_sums == spec.alpha);
        bool all_one = true;
        for (double s : w.diagonal_column_sums) all_one &= std::abs(s - 1.0) <= kEpsMass;
        CHECK(w.diagonal_is_markov == all_one);
        CHECK_FALSE(w.diagonal_is_markov); // random alpha is never identically 1
        // a genuine Markov witness still connects base to the reweighted joint
        CHECK(w.connecting_gap <= 1e-12);
        (void)scale;
    }
}

TEST_CASE("an mcd joint with a free observed marginal escapes label-only kernel actions") {
    // clean joint: prior (1/2,1/2), conditionals (0.8,0.2) and (0.3,0.7)
    FiniteSpace xs("X", {"x0", "x1"});
    FiniteSpace ys("Y", {"1", "2"});
    Space xsp = Space::single(Role::X, xs);
    Space ysp = Space::single(Role::Y, ys);
    std::vector<Distribution<double>> conds = {Distribution<double>(xsp, {0.8, 0.2}),
                                               Distribution<double>(xsp, {0.3, 0.7})};
    Distribution<double> clean_prior(ysp, {0.5, 0.5});
    auto P = make_joint<double>(xs, ys, {0.4, 0.15, 0.1, 0.35});

    Kernel<double> mixing(ysp, ysp, {0.9, 0.2, 0.1, 0.8});
    Distribution<double> free_prior(ysp, {0.7, 0.3}); // deliberately not the matching marginal
    McdSpec spec(mixing, conds, free_prior);
    auto J = mcd_corrupt(spec).corrupted_joint;

    // every label-only Markovian action preserves the attribute marginal...
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        auto lam = random_kernel(Space::pair(Role::X, xs, Role::Y, ys), ysp, rng);
        auto corrupted = corrupt(P, CorruptionSpec<double>::factorized(delta<double>(xsp), lam));
        CHECK(max_abs_gap(marginal(corrupted, Role::X), marginal(P, Role::X)) <= 1e-12);
    }
    // ...but the mcd construction moved it, so no such kernel can reach J
    CHECK(max_abs_gap(marginal(J, Role::X), marginal(P, Role::X)) > 0.05);
}
