#pragma once

#include <vector>

#include "kernelcorrupt/kernel.hpp"

namespace kc {

enum class Direction {
    Generative,     // prior on Y, conditional Y -> X (the experiment)
    Discriminative, // prior on X, conditional X -> Y (the posterior)
};

// Bayes factorization of a joint into prior x conditional. Conditioning on a
// zero-mass point fills that column with the uniform distribution; the
// affected indices are reported in uniform_filled.
template <class S>
struct Factorization {
    Direction direction;
    Distribution<S> prior;
    Kernel<S> conditional;
    std::vector<std::size_t> uniform_filled;
};

template <class S>
Factorization<S> factorize(const Distribution<S>& joint, Direction direction) {
    using T = scalar_traits<S>;
    const Space& sp = joint.space();
    if (sp.rank() != 2 || !sp.has_role(Role::X) || !sp.has_role(Role::Y))
        throw NotAJoint("factorize requires a joint over X x Y");

    Role cond_role = direction == Direction::Generative ? Role::Y : Role::X;
    Role out_role = direction == Direction::Generative ? Role::X : Role::Y;
    Distribution<S> prior = marginal(joint, cond_role);
    const FiniteSpace& out_space = sp.factor_with_role(out_role).space;
    std::size_t n_out = out_space.size(), n_cond = prior.size();

    Space dom = Space::single(cond_role, sp.factor_with_role(cond_role).space);
    Space img = Space::single(out_role, out_space);

    std::vector<S> m(n_out * n_cond, T::zero());
    std::vector<std::size_t> filled;
    std::vector<std::size_t> coords(2);
    std::size_t cond_pos = sp.factors()[0].role == cond_role ? 0 : 1;
    for (std::size_t j = 0; j < n_cond; ++j) {
        if (T::close(prior[j], T::zero(), 0.0)) {
            filled.push_back(j);
            S u = T::one() / T::from_int(static_cast<long long>(n_out));
            for (std::size_t i = 0; i < n_out; ++i) m[i * n_cond + j] = u;
            continue;
        }
        for (std::size_t i = 0; i < n_out; ++i) {
            coords[cond_pos] = j;
            coords[1 - cond_pos] = i;
            m[i * n_cond + j] = joint[sp.flat_index(coords)] / prior[j];
        }
    }
    return Factorization<S>{direction, std::move(prior), Kernel<S>(dom, img, std::move(m)), std::move(filled)};
}

// prior x conditional back to the joint, always emitted X-outer.
template <class S>
Distribution<S> reassemble(const Factorization<S>& f) {
    const Space& cond_dom = f.conditional.domain();
    const Space& cond_img = f.conditional.image();
    if (cond_dom != f.prior.space())
        throw SpaceMismatch("factorization prior does not live on the conditional's domain");
    Role cond_role = cond_dom.factors()[0].role;

    const FiniteSpace& xs = (cond_role == Role::X ? cond_dom : cond_img).factors()[0].space;
    const FiniteSpace& ys = (cond_role == Role::Y ? cond_dom : cond_img).factors()[0].space;
    Space prod = Space::pair(Role::X, xs, Role::Y, ys);

    std::size_t ny = ys.size();
    std::vector<S> w(prod.size());
    for (std::size_t j = 0; j < cond_dom.size(); ++j)
        for (std::size_t i = 0; i < cond_img.size(); ++i) {
            std::size_t ix = cond_role == Role::X ? j : i;
            std::size_t iy = cond_role == Role::Y ? j : i;
            w[ix * ny + iy] = f.prior[j] * f.conditional.entry(i, j);
        }
    return Distribution<S>(prod, std::move(w));
}

} // namespace kc
