#pragma once

#include <vector>

#include "kernelcorrupt/factorization.hpp"
#include "kernelcorrupt/taxonomy.hpp"

namespace kc {

// Mutually contaminated distributions: each observed class-conditional is a
// mixture of the clean ones. `mixing` maps a corrupted class to its mixture
// weights over clean classes (column-stochastic, one column per corrupted
// class); the corrupted label marginal is a free input, since nothing in the
// construction determines it.
struct McdSpec {
    Kernel<double> mixing;                            // Y_corrupted -> Y_clean
    std::vector<Distribution<double>> clean_conditionals; // one per clean class, over X
    Distribution<double> corrupted_prior;             // over Y_corrupted

    McdSpec(Kernel<double> mix, std::vector<Distribution<double>> conds, Distribution<double> prior)
        : mixing(std::move(mix)), clean_conditionals(std::move(conds)), corrupted_prior(std::move(prior)) {
        if (clean_conditionals.size() != mixing.rows())
            throw DimensionMismatch("need one clean conditional per clean class");
        for (const auto& c : clean_conditionals)
            if (c.space() != clean_conditionals[0].space())
                throw DimensionMismatch("clean conditionals must share the attribute space");
        if (corrupted_prior.size() != mixing.cols())
            throw DimensionMismatch("corrupted prior size does not match the number of corrupted classes");
    }
};

struct McdResult {
    std::vector<Distribution<double>> corrupted_conditionals;
    Distribution<double> corrupted_joint; // over X x Y_corrupted, X-outer
};

inline McdResult mcd_corrupt(const McdSpec& spec) {
    std::size_t m_classes = spec.mixing.cols();
    std::size_t k_classes = spec.mixing.rows();
    const Space& xspace = spec.clean_conditionals[0].space();
    std::size_t nx = xspace.size();

    McdResult res{{}, Distribution<double>()};
    std::vector<double> joint(nx * m_classes, 0.0);
    for (std::size_t m = 0; m < m_classes; ++m) {
        std::vector<double> mixed(nx, 0.0);
        for (std::size_t k = 0; k < k_classes; ++k) {
            double w = spec.mixing.entry(k, m);
            if (w == 0.0) continue;
            for (std::size_t x = 0; x < nx; ++x) mixed[x] += w * spec.clean_conditionals[k][x];
        }
        for (std::size_t x = 0; x < nx; ++x) joint[x * m_classes + m] = spec.corrupted_prior[m] * mixed[x];
        res.corrupted_conditionals.emplace_back(xspace, std::move(mixed));
    }
    const FiniteSpace& xs = xspace.factors()[0].space;
    const FiniteSpace& ms = spec.corrupted_prior.space().factors()[0].space;
    res.corrupted_joint = Distribution<double>(Space::pair(Role::X, xs, Role::Y, ms), std::move(joint));
    return res;
}

// Class-conditional label noise mapped into the MCD mixing form:
//   weight(clean j | corrupted i) = lambda(i|j) prior~(j) / sum_j lambda(i|j) prior~(j).
// Returned as the corrupted->clean kernel whose columns are the mixture
// weights, directly usable as McdSpec::mixing.
inline Kernel<double> ccn_to_mcd(const Kernel<double>& lambda_c, const Distribution<double>& corrupted_prior) {
    if (lambda_c.rows() != lambda_c.cols())
        throw DimensionMismatch("class-conditional noise kernel must be square");
    if (corrupted_prior.size() != lambda_c.rows())
        throw DimensionMismatch("prior size does not match the label space");
    std::size_t n = lambda_c.rows();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) denom += lambda_c.entry(i, j) * corrupted_prior[j];
        if (denom == 0.0) throw ZeroDenominator("corrupted class has zero reachable mass");
        for (std::size_t j = 0; j < n; ++j)
            m[j * n + i] = lambda_c.entry(i, j) * corrupted_prior[j] / denom;
    }
    return Kernel<double>(corrupted_prior.space(), lambda_c.domain(), std::move(m));
}

// Reweighting of a joint by a density alpha with sum alpha * P = 1. On a
// finite space the sup of alpha is automatically finite; it is recorded at
// construction.
struct SelectionBiasSpec {
    std::vector<double> alpha;
    Distribution<double> base;
    double sup_alpha = 0.0;

    SelectionBiasSpec(std::vector<double> a, Distribution<double> b) : alpha(std::move(a)), base(std::move(b)) {
        if (alpha.size() != base.size())
            throw DimensionMismatch("alpha must assign a weight to every point of the base joint");
        for (double v : alpha) {
            if (v < 0.0) throw NegativeWeight("alpha must be non-negative");
            sup_alpha = std::max(sup_alpha, v);
        }
        double mass = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) mass += alpha[i] * base[i];
        if (std::abs(mass - 1.0) > kEpsMass)
            throw NotADensity("alpha does not integrate to 1 against the base joint");
    }
};

inline Distribution<double> selection_bias_corrupt(const SelectionBiasSpec& spec) {
    std::vector<double> w(spec.base.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = spec.alpha[i] * spec.base[i];
    return Distribution<double>(spec.base.space(), std::move(w));
}

// Convenience: normalize arbitrary non-negative weights into a valid alpha,
// reporting the scale that was divided out.
inline std::pair<SelectionBiasSpec, double> normalized_selection_bias(std::vector<double> raw,
                                                                      const Distribution<double>& base) {
    if (raw.size() != base.size()) throw DimensionMismatch("weight vector length mismatch");
    double mass = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) mass += raw[i] * base[i];
    if (mass <= 0.0) throw NotADensity("weights give the base joint zero total mass");
    for (auto& v : raw) v /= mass;
    return {SelectionBiasSpec(std::move(raw), base), mass};
}

// The natural transition form of selection bias keeps each point in place and
// scales it by alpha, so its column sums are exactly alpha: it is a Markov
// kernel only when alpha is identically 1. A genuine Markov kernel linking
// base to the reweighted joint still exists (the independent coupling), it
// just does not act by pointwise reweighting.
struct SelectionBiasWitness {
    std::vector<double> diagonal_column_sums; // equals alpha
    bool diagonal_is_markov = false;
    Kernel<double> connecting;       // valid Markov witness from find_connecting_kernel
    double connecting_gap = 0.0;     // max | base ∘ connecting - reweighted |
};

inline SelectionBiasWitness selection_bias_markov_witness(const SelectionBiasSpec& spec) {
    SelectionBiasWitness w{{}, true, Kernel<double>(), 0.0};
    w.diagonal_column_sums = spec.alpha;
    for (double v : spec.alpha)
        if (std::abs(v - 1.0) > kEpsMass) w.diagonal_is_markov = false;

    Distribution<double> tilted = selection_bias_corrupt(spec);
    w.connecting = find_connecting_kernel(spec.base, tilted);
    w.connecting_gap = max_abs_gap(act_on_dist(w.connecting, spec.base), tilted);
    return w;
}

} // namespace kc
