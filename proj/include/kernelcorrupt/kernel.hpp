#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "kernelcorrupt/distribution.hpp"

namespace kc {

// Column-stochastic matrix between role-tagged finite spaces. Storage is
// row-major, |image| x |domain|: entry(i, j) is the probability of image
// point i given domain point j, so acting on a distribution is a plain
// matrix * vector product.
template <class S>
class Kernel {
public:
    using scalar = S;

    Kernel() = default;

    Kernel(Space domain, Space image, std::vector<S> matrix)
        : domain_(std::move(domain)), image_(std::move(image)), m_(std::move(matrix)) {
        validate();
    }

    const Space& domain() const { return domain_; }
    const Space& image() const { return image_; }
    std::size_t rows() const { return image_.size(); }
    std::size_t cols() const { return domain_.size(); }

    const S& entry(std::size_t i, std::size_t j) const { return m_[i * cols() + j]; }
    const std::vector<S>& matrix() const { return m_; }

    std::vector<S> column(std::size_t j) const {
        std::vector<S> c(rows());
        for (std::size_t i = 0; i < rows(); ++i) c[i] = entry(i, j);
        return c;
    }

    std::vector<Role> domain_roles() const { return domain_.roles(); }
    std::vector<Role> image_roles() const { return image_.roles(); }

private:
    void validate() const {
        using T = scalar_traits<S>;
        if (m_.size() != domain_.size() * image_.size())
            throw DimensionMismatch("kernel matrix size does not match |image| x |domain|");
        for (std::size_t j = 0; j < cols(); ++j) {
            S colsum = T::zero();
            for (std::size_t i = 0; i < rows(); ++i) {
                const S& v = entry(i, j);
                if (!T::nonnegative(v)) throw NegativeWeight("kernel has a negative entry");
                colsum = colsum + v;
            }
            if (!T::close(colsum, T::one(), kEpsMass))
                throw NotNormalized("kernel column does not sum to 1");
        }
    }

    Space domain_;
    Space image_;
    std::vector<S> m_;
};

template <class S = double>
Kernel<S> delta(const Space& space) {
    using T = scalar_traits<S>;
    std::size_t n = space.size();
    std::vector<S> m(n * n, T::zero());
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = T::one();
    return Kernel<S>(space, space, std::move(m));
}

template <class S>
Kernel<S> constant_kernel(const Distribution<S>& target, const Space& domain) {
    std::size_t r = target.size(), c = domain.size();
    std::vector<S> m(r * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m[i * c + j] = target[i];
    return Kernel<S>(domain, target.space(), std::move(m));
}

// A distribution is a kernel from the one-point unit space, and back.
template <class S>
Kernel<S> as_kernel(const Distribution<S>& d) {
    return Kernel<S>(Space::unit(), d.space(), d.weights());
}

template <class S>
Distribution<S> as_distribution(const Kernel<S>& k) {
    if (k.domain().rank() != 0)
        throw SpaceMismatch("only a unit-domain kernel converts to a distribution");
    return Distribution<S>(k.image(), k.matrix());
}

template <class S>
Distribution<S> act_on_dist(const Kernel<S>& k, const Distribution<S>& mu) {
    using T = scalar_traits<S>;
    if (mu.space() != k.domain())
        throw SpaceMismatch("distribution space does not match kernel domain");
    std::vector<S> out(k.rows(), T::zero());
    for (std::size_t i = 0; i < k.rows(); ++i)
        for (std::size_t j = 0; j < k.cols(); ++j)
            out[i] = out[i] + k.entry(i, j) * mu[j];
    return Distribution<S>(k.image(), std::move(out));
}

template <class S>
FunctionOnSpace<S> act_on_fn(const Kernel<S>& k, const FunctionOnSpace<S>& f) {
    using T = scalar_traits<S>;
    if (f.space != k.image())
        throw SpaceMismatch("function space does not match kernel image");
    std::vector<S> out(k.cols(), T::zero());
    for (std::size_t j = 0; j < k.cols(); ++j)
        for (std::size_t i = 0; i < k.rows(); ++i)
            out[j] = out[j] + k.entry(i, j) * f.values[i];
    return FunctionOnSpace<S>(k.domain(), std::move(out));
}

// Flat-index projection from a space onto a sub-space selected by roles.
// from must carry every factor of `to` (same role, same space).
inline std::vector<std::size_t> index_projection(const Space& from, const Space& to) {
    for (const auto& tf : to.factors()) {
        if (!from.has_role(tf.role) || !(from.factor_with_role(tf.role).space == tf.space))
            throw SpaceMismatch("projection target is not a sub-space");
    }
    std::vector<std::size_t> map(from.size());
    std::vector<std::size_t> tcoords(to.rank());
    for (std::size_t idx = 0; idx < from.size(); ++idx) {
        auto coords = from.unflatten(idx);
        for (std::size_t t = 0; t < to.rank(); ++t) {
            Role r = to.factors()[t].role;
            for (std::size_t f = 0; f < from.rank(); ++f)
                if (from.factors()[f].role == r) tcoords[t] = coords[f];
        }
        map[idx] = to.flat_index(tcoords);
    }
    return map;
}

// Expands a kernel's domain by constancy over the extra roles of `target`.
template <class S>
Kernel<S> lift_domain(const Kernel<S>& k, const Space& target) {
    auto proj = index_projection(target, k.domain());
    std::size_t r = k.rows(), c = target.size();
    std::vector<S> m(r * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m[i * c + j] = k.entry(i, proj[j]);
    return Kernel<S>(target, k.image(), std::move(m));
}

// P1: run kappa, then lambda.
template <class S>
Kernel<S> chain(const Kernel<S>& kappa, const Kernel<S>& lambda) {
    using T = scalar_traits<S>;
    if (kappa.image() != lambda.domain())
        throw SpaceMismatch("chain: first kernel's image must match second kernel's domain");
    std::size_t r = lambda.rows(), mid = lambda.cols(), c = kappa.cols();
    std::vector<S> m(r * c, T::zero());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            S acc = T::zero();
            for (std::size_t t = 0; t < mid; ++t)
                acc = acc + lambda.entry(i, t) * kappa.entry(t, j);
            m[i * c + j] = acc;
        }
    return Kernel<S>(kappa.domain(), lambda.image(), std::move(m));
}

// P2: joint growth. lambda's domain must be kappa's domain followed by
// kappa's image; the result maps kappa's domain to image(kappa) x image(lambda).
template <class S>
Kernel<S> product(const Kernel<S>& kappa, const Kernel<S>& lambda) {
    std::vector<SpaceFactor> expect = kappa.domain().factors();
    for (const auto& f : kappa.image().factors()) expect.push_back(f);
    if (lambda.domain() != Space(expect))
        throw SpaceMismatch("product: second kernel's domain must be domain(kappa) x image(kappa)");
    std::vector<SpaceFactor> imf = kappa.image().factors();
    for (const auto& f : lambda.image().factors()) imf.push_back(f);
    Space image(imf);

    std::size_t nb = kappa.rows(), nc = lambda.rows(), na = kappa.cols();
    std::vector<S> m(nb * nc * na);
    for (std::size_t ja = 0; ja < na; ++ja)
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t ic = 0; ic < nc; ++ic) {
                std::size_t row = ib * nc + ic;
                m[row * na + ja] = kappa.entry(ib, ja) * lambda.entry(ic, ja * nb + ib);
            }
    return Kernel<S>(kappa.domain(), image, std::move(m));
}

namespace detail {

inline Space merged_domain(const Space& a, const Space& b) {
    // Shared roles align on one coordinate; result is ordered X before Y.
    std::vector<SpaceFactor> factors;
    for (Role r : {Role::X, Role::Y}) {
        const SpaceFactor* fa = a.has_role(r) ? &a.factor_with_role(r) : nullptr;
        const SpaceFactor* fb = b.has_role(r) ? &b.factor_with_role(r) : nullptr;
        if (fa && fb && !(fa->space == fb->space))
            throw SpaceMismatch("superpose: factors disagree on the space for a shared role");
        if (fa) factors.push_back(*fa);
        else if (fb) factors.push_back(*fb);
    }
    return Space(factors);
}

inline void require_distinct_roles(const Space& s, const char* what) {
    if (s.rank() == 2 && s.factors()[0].role == s.factors()[1].role)
        throw UnknownRole(std::string(what) + ": duplicate role in product space");
}

} // namespace detail

// P3 with role alignment: factors reading the same role consume one shared
// input coordinate. Two factors writing the same role would put two measures
// on one output space, which is rejected.
template <class S>
Kernel<S> superpose(const Kernel<S>& a, const Kernel<S>& b) {
    if (a.image().rank() != 1 || b.image().rank() != 1)
        throw IllDefinedSuperposition("superpose: each factor must write a single space");
    if (a.image().factors()[0].role == b.image().factors()[0].role)
        throw IllDefinedSuperposition("superpose: two measures on one output space");
    detail::require_distinct_roles(a.domain(), "superpose");
    detail::require_distinct_roles(b.domain(), "superpose");

    Space dom = detail::merged_domain(a.domain(), b.domain());
    Space img({a.image().factors()[0], b.image().factors()[0]});
    auto pa = index_projection(dom, a.domain());
    auto pb = index_projection(dom, b.domain());

    std::size_t ra = a.rows(), rb = b.rows(), c = dom.size();
    std::vector<S> m(ra * rb * c);
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t ia = 0; ia < ra; ++ia)
            for (std::size_t ib = 0; ib < rb; ++ib)
                m[(ia * rb + ib) * c + j] = a.entry(ia, pa[j]) * b.entry(ib, pb[j]);
    return Kernel<S>(dom, img, std::move(m));
}

// P4: chain over one space while superposing on the shared parameters.
// kappa writes `over`; lambda reads `over` plus parameters shared with
// kappa's domain.
template <class S>
Kernel<S> partial_chain(const Kernel<S>& kappa, const Kernel<S>& lambda, Role over) {
    using T = scalar_traits<S>;
    if (kappa.image().rank() != 1 || kappa.image().factors()[0].role != over)
        throw SpaceMismatch("partial_chain: kappa must write exactly the chained space");
    const Space& ldom = lambda.domain();
    detail::require_distinct_roles(ldom, "partial_chain");
    bool reads_over = false;
    for (const auto& f : ldom.factors()) {
        if (f.role == over) {
            reads_over = true;
            if (!(f.space == kappa.image().factors()[0].space))
                throw SpaceMismatch("partial_chain: chained spaces differ");
        } else {
            if (!kappa.domain().has_role(f.role) ||
                !(kappa.domain().factor_with_role(f.role).space == f.space))
                throw SpaceMismatch("partial_chain: lambda reads a parameter kappa's domain lacks");
        }
    }
    if (!reads_over) throw SpaceMismatch("partial_chain: lambda does not read the chained space");

    std::size_t nc = kappa.rows();
    std::size_t rows = lambda.rows(), cols = kappa.cols();
    std::vector<S> m(rows * cols, T::zero());
    std::vector<std::size_t> lcoords(ldom.rank());
    for (std::size_t j = 0; j < cols; ++j) {
        auto dcoords = kappa.domain().unflatten(j);
        for (std::size_t c = 0; c < nc; ++c) {
            // lambda's input: chained coordinate c plus shared parameters from j
            for (std::size_t t = 0; t < ldom.rank(); ++t) {
                const auto& f = ldom.factors()[t];
                if (f.role == over) {
                    lcoords[t] = c;
                } else {
                    for (std::size_t d = 0; d < kappa.domain().rank(); ++d)
                        if (kappa.domain().factors()[d].role == f.role) lcoords[t] = dcoords[d];
                }
            }
            std::size_t jl = ldom.flat_index(lcoords);
            for (std::size_t i = 0; i < rows; ++i)
                m[i * cols + j] = m[i * cols + j] + kappa.entry(c, j) * lambda.entry(i, jl);
        }
    }
    return Kernel<S>(kappa.domain(), lambda.image(), std::move(m));
}

template <class S>
double max_abs_gap(const Kernel<S>& a, const Kernel<S>& b) {
    if (a.domain() != b.domain() || a.image() != b.image())
        throw SpaceMismatch("kernels have different signatures");
    double m = 0.0;
    for (std::size_t i = 0; i < a.matrix().size(); ++i) {
        double d = std::abs(scalar_traits<S>::to_double(a.matrix()[i]) -
                            scalar_traits<S>::to_double(b.matrix()[i]));
        if (d > m) m = d;
    }
    return m;
}

template <class S>
Kernel<double> to_double_kernel(const Kernel<S>& k) {
    std::vector<double> m;
    m.reserve(k.matrix().size());
    for (const auto& v : k.matrix()) m.push_back(scalar_traits<S>::to_double(v));
    return Kernel<double>(k.domain(), k.image(), std::move(m));
}

} // namespace kc
