#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "kernelcorrupt/dpe.hpp"

namespace kc {

// Uniform (flat Dirichlet) point on the simplex; full support almost surely.
inline std::vector<double> dirichlet_uniform(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(std::nextafter(0.0, 1.0), 1.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& v : w) {
        v = -std::log(unif(rng));
        total += v;
    }
    for (auto& v : w) v /= total;
    return w;
}

inline Distribution<double> random_distribution(const Space& space, std::mt19937_64& rng) {
    return Distribution<double>(space, dirichlet_uniform(space.size(), rng));
}

inline Distribution<double> random_joint(const FiniteSpace& xs, const FiniteSpace& ys, std::mt19937_64& rng) {
    Space prod = Space::pair(Role::X, xs, Role::Y, ys);
    return random_distribution(prod, rng);
}

inline Kernel<double> random_kernel(const Space& domain, const Space& image, std::mt19937_64& rng) {
    std::size_t r = image.size(), c = domain.size();
    std::vector<double> m(r * c);
    for (std::size_t j = 0; j < c; ++j) {
        auto col = dirichlet_uniform(r, rng);
        for (std::size_t i = 0; i < r; ++i) m[i * c + j] = col[i];
    }
    return Kernel<double>(domain, image, std::move(m));
}

inline FunctionOnSpace<double> random_function(const Space& space, std::mt19937_64& rng, double lo = 0.0,
                                               double hi = 1.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<double> v(space.size());
    for (auto& x : v) x = unif(rng);
    return FunctionOnSpace<double>(space, std::move(v));
}

inline Space domain_space_for(const std::vector<Role>& roles, const FiniteSpace& xs, const FiniteSpace& ys) {
    std::vector<SpaceFactor> fs;
    for (Role r : roles) fs.push_back(SpaceFactor{r, r == Role::X ? xs : ys});
    return Space(fs);
}

// A random factorized corruption with the exact signatures of the given case.
inline CorruptionSpec<double> random_spec_for_case(DpeCase c, const FiniteSpace& xs, const FiniteSpace& ys,
                                                   std::mt19937_64& rng) {
    auto [td, ld] = dpe_case_domains(c);
    Kernel<double> tau = random_kernel(domain_space_for(td, xs, ys), Space::single(Role::X, xs), rng);
    Kernel<double> lambda = random_kernel(domain_space_for(ld, xs, ys), Space::single(Role::Y, ys), rng);
    return CorruptionSpec<double>::factorized(std::move(tau), std::move(lambda));
}

inline Kernel<double> random_joint_kernel(const FiniteSpace& xs, const FiniteSpace& ys, std::mt19937_64& rng) {
    Space prod = Space::pair(Role::X, xs, Role::Y, ys);
    return random_kernel(prod, prod, rng);
}

} // namespace kc
