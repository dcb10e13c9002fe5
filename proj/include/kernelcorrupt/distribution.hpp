#pragma once

#include <cmath>
#include <vector>

#include "kernelcorrupt/rational.hpp"
#include "kernelcorrupt/space.hpp"

namespace kc {

// Absolute tolerance for mass and stochasticity checks on doubles; rationals
// are checked exactly.
inline constexpr double kEpsMass = 1e-12;

template <class S>
class Distribution {
public:
    using scalar = S;

    Distribution() = default;

    Distribution(Space space, std::vector<S> weights) : space_(std::move(space)), w_(std::move(weights)) {
        validate();
    }

    const Space& space() const { return space_; }
    const std::vector<S>& weights() const { return w_; }
    std::size_t size() const { return w_.size(); }
    const S& operator[](std::size_t i) const { return w_[i]; }

    S total_mass() const {
        S t = scalar_traits<S>::zero();
        for (const auto& v : w_) t = t + v;
        return t;
    }

private:
    void validate() const {
        using T = scalar_traits<S>;
        if (w_.size() != space_.size())
            throw DimensionMismatch("weight vector length does not match space size");
        for (const auto& v : w_)
            if (!T::nonnegative(v)) throw NegativeWeight("distribution has a negative weight");
        S t = scalar_traits<S>::zero();
        for (const auto& v : w_) t = t + v;
        if (!T::close(t, T::one(), kEpsMass))
            throw NotNormalized("distribution mass is not 1");
    }

    Space space_;
    std::vector<S> w_;
};

template <class S>
struct FunctionOnSpace {
    Space space;
    std::vector<S> values;

    FunctionOnSpace() = default;
    FunctionOnSpace(Space s, std::vector<S> v) : space(std::move(s)), values(std::move(v)) {
        if (values.size() != space.size())
            throw DimensionMismatch("function value vector length does not match space size");
    }
};

template <class S = double>
Distribution<S> uniform_distribution(const Space& space) {
    std::size_t n = space.size();
    std::vector<S> w(n, scalar_traits<S>::one() / scalar_traits<S>::from_int(static_cast<long long>(n)));
    return Distribution<S>(space, std::move(w));
}

// Joint over X x Y from a flat weight vector, X-outer / Y-inner.
template <class S>
Distribution<S> make_joint(const FiniteSpace& x_space, const FiniteSpace& y_space, std::vector<S> weights) {
    Space prod = Space::pair(Role::X, x_space, Role::Y, y_space);
    if (weights.size() != prod.size())
        throw DimensionMismatch("joint weight vector must have |X|*|Y| entries");
    return Distribution<S>(prod, std::move(weights));
}

// Marginal of a two-factor joint onto one of its roles.
template <class S>
Distribution<S> marginal(const Distribution<S>& joint, Role role) {
    const Space& sp = joint.space();
    if (sp.rank() != 2) throw NotAJoint("marginal requires a two-factor joint");
    const auto& fs = sp.factors();
    std::size_t keep;
    if (fs[0].role == role) keep = 0;
    else if (fs[1].role == role) keep = 1;
    else throw UnknownRole("role not present in joint");
    std::size_t n0 = fs[0].space.size(), n1 = fs[1].space.size();
    std::vector<S> out(keep == 0 ? n0 : n1, scalar_traits<S>::zero());
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) {
            const S& v = joint.weights()[i * n1 + j];
            out[keep == 0 ? i : j] = out[keep == 0 ? i : j] + v;
        }
    return Distribution<S>(Space::single(role, sp.factors()[keep].space), std::move(out));
}

template <class S>
S inner_product(const Distribution<S>& mu, const FunctionOnSpace<S>& f) {
    if (mu.space() != f.space) throw SpaceMismatch("distribution and function live on different spaces");
    S acc = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < mu.size(); ++i) acc = acc + mu[i] * f.values[i];
    return acc;
}

template <class S>
double max_abs_gap(const Distribution<S>& a, const Distribution<S>& b) {
    if (a.space() != b.space()) throw SpaceMismatch("distributions live on different spaces");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::abs(scalar_traits<S>::to_double(a[i]) - scalar_traits<S>::to_double(b[i]));
        if (d > m) m = d;
    }
    return m;
}

template <class S>
Distribution<double> to_double_distribution(const Distribution<S>& d) {
    std::vector<double> w;
    w.reserve(d.size());
    for (const auto& v : d.weights()) w.push_back(scalar_traits<S>::to_double(v));
    return Distribution<double>(d.space(), std::move(w));
}

} // namespace kc
