#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kernelcorrupt/factorization.hpp"
#include "kernelcorrupt/kernel.hpp"

namespace kc {

enum class CorruptionType {
    SimpleX,            // X -> X
    SimpleY,            // Y -> Y
    OneDependentYX,     // Y -> X
    OneDependentXY,     // X -> Y
    TwoDependentX,      // X x Y -> X
    TwoDependentY,      // X x Y -> Y
    OneParamJointFromX, // X -> X x Y
    OneParamJointFromY, // Y -> X x Y
    Joint,              // X x Y -> X x Y
    Identity,
    Constant,
};

inline const char* corruption_type_name(CorruptionType t) {
    switch (t) {
        case CorruptionType::SimpleX: return "SimpleX";
        case CorruptionType::SimpleY: return "SimpleY";
        case CorruptionType::OneDependentYX: return "OneDependentYX";
        case CorruptionType::OneDependentXY: return "OneDependentXY";
        case CorruptionType::TwoDependentX: return "TwoDependentX";
        case CorruptionType::TwoDependentY: return "TwoDependentY";
        case CorruptionType::OneParamJointFromX: return "OneParamJointFromX";
        case CorruptionType::OneParamJointFromY: return "OneParamJointFromY";
        case CorruptionType::Joint: return "Joint";
        case CorruptionType::Identity: return "Identity";
        case CorruptionType::Constant: return "Constant";
    }
    return "?";
}

// Role-level view of a kernel's typing.
struct Signature {
    std::vector<Role> domain;
    std::vector<Role> image;

    friend bool operator==(const Signature& a, const Signature& b) {
        return a.domain == b.domain && a.image == b.image;
    }
};

template <class S>
Signature signature_of(const Kernel<S>& k) {
    return Signature{k.domain_roles(), k.image_roles()};
}

template <class S>
bool is_identity_kernel(const Kernel<S>& k, double eps = kEpsMass) {
    using T = scalar_traits<S>;
    if (k.domain() != k.image()) return false;
    for (std::size_t i = 0; i < k.rows(); ++i)
        for (std::size_t j = 0; j < k.cols(); ++j) {
            const S target = i == j ? T::one() : T::zero();
            if (!T::close(k.entry(i, j), target, eps)) return false;
        }
    return true;
}

template <class S>
bool all_columns_equal(const Kernel<S>& k, double eps = kEpsMass) {
    using T = scalar_traits<S>;
    for (std::size_t j = 1; j < k.cols(); ++j)
        for (std::size_t i = 0; i < k.rows(); ++i)
            if (!T::close(k.entry(i, j), k.entry(i, 0), eps)) return false;
    return true;
}

template <class S>
CorruptionType classify(const Kernel<S>& k) {
    auto check_roles = [](const Space& s) {
        if (s.rank() == 0)
            throw UnknownRole("classify: kernel with unit space has no corruption type");
        if (s.rank() == 2 && s.factors()[0].role == s.factors()[1].role)
            throw UnknownRole("classify: duplicate role in a product space");
        if (s.rank() > 2) throw UnknownRole("classify: more than two factors");
    };
    check_roles(k.domain());
    check_roles(k.image());

    if (is_identity_kernel(k)) return CorruptionType::Identity;
    if (all_columns_equal(k)) return CorruptionType::Constant;

    auto d = k.domain_roles();
    auto i = k.image_roles();
    if (d.size() == 2 && i.size() == 2) return CorruptionType::Joint;
    if (d.size() == 2 && i.size() == 1)
        return i[0] == Role::X ? CorruptionType::TwoDependentX : CorruptionType::TwoDependentY;
    if (d.size() == 1 && i.size() == 2)
        return d[0] == Role::X ? CorruptionType::OneParamJointFromX : CorruptionType::OneParamJointFromY;
    // single domain, single image
    if (d[0] == Role::X && i[0] == Role::X) return CorruptionType::SimpleX;
    if (d[0] == Role::Y && i[0] == Role::Y) return CorruptionType::SimpleY;
    if (d[0] == Role::Y && i[0] == Role::X) return CorruptionType::OneDependentYX;
    return CorruptionType::OneDependentXY;
}

// A factorized pair (tau, lambda) builds a joint corruption iff tau writes X,
// lambda writes Y, and their domains together read both spaces, so the
// superposition has domain X x Y.
inline bool check_pairwise_feasible(const Signature& tau, const Signature& lambda) {
    if (tau.image.size() != 1 || lambda.image.size() != 1) return false;
    if (tau.image[0] != Role::X || lambda.image[0] != Role::Y) return false;
    auto ok_domain = [](const std::vector<Role>& d) {
        if (d.empty() || d.size() > 2) return false;
        if (d.size() == 2 && d[0] == d[1]) return false;
        return true;
    };
    if (!ok_domain(tau.domain) || !ok_domain(lambda.domain)) return false;
    bool reads_x = false, reads_y = false;
    for (Role r : tau.domain) (r == Role::X ? reads_x : reads_y) = true;
    for (Role r : lambda.domain) (r == Role::X ? reads_x : reads_y) = true;
    return reads_x && reads_y;
}

// A pairwise joint corruption: either an explicit joint kernel or a feasible
// (tau, lambda) pair.
template <class S>
class CorruptionSpec {
public:
    struct Factorized {
        Kernel<S> tau;
        Kernel<S> lambda;
    };

    static CorruptionSpec non_factorized(Kernel<S> joint) {
        if (joint.domain().rank() != 2 || joint.image().rank() != 2)
            throw SpaceMismatch("a joint corruption maps X x Y to X x Y");
        CorruptionSpec s;
        s.form_ = std::move(joint);
        return s;
    }

    static CorruptionSpec factorized(Kernel<S> tau, Kernel<S> lambda) {
        if (!check_pairwise_feasible(signature_of(tau), signature_of(lambda)))
            throw InfeasibleFactorization("(tau, lambda) signatures do not form a feasible joint corruption");
        CorruptionSpec s;
        s.form_ = Factorized{std::move(tau), std::move(lambda)};
        return s;
    }

    bool is_factorized() const { return std::holds_alternative<Factorized>(form_); }
    const Kernel<S>& tau() const { return std::get<Factorized>(form_).tau; }
    const Kernel<S>& lambda() const { return std::get<Factorized>(form_).lambda; }
    const Kernel<S>& joint_kernel() const { return std::get<Kernel<S>>(form_); }

private:
    CorruptionSpec() = default;
    std::variant<Kernel<S>, Factorized> form_;
};

template <class S>
Kernel<S> build_joint(const CorruptionSpec<S>& spec) {
    if (!spec.is_factorized()) return spec.joint_kernel();
    return superpose(spec.tau(), spec.lambda());
}

template <class S>
Distribution<S> corrupt(const Distribution<S>& P, const CorruptionSpec<S>& spec) {
    return act_on_dist(build_joint(spec), P);
}

// Existence witness: the independent coupling always links P to P-tilde.
// The connecting kernel is not unique; this returns the canonical constant one.
template <class S>
Kernel<S> find_connecting_kernel(const Distribution<S>& P, const Distribution<S>& P_tilde) {
    if (P.space() != P_tilde.space())
        throw SpaceMismatch("connecting kernel needs both joints on the same space");
    return constant_kernel(P_tilde, P.space());
}

} // namespace kc
