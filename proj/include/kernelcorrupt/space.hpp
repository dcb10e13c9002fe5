#pragma once

#include <cstddef>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "kernelcorrupt/errors.hpp"

namespace kc {

// Which of the two base spaces of a supervised problem a factor plays.
enum class Role { X, Y };

inline const char* role_name(Role r) { return r == Role::X ? "X" : "Y"; }

// An ordered set of labeled points. Order is fixed at construction and is the
// indexing contract for every matrix and weight vector in the library.
class FiniteSpace {
public:
    FiniteSpace() = default;
    FiniteSpace(std::string name, std::vector<std::string> points)
        : name_(std::move(name)), points_(std::move(points)) {
        if (points_.empty()) throw Error("finite space '" + name_ + "' needs at least one point");
        std::set<std::string> seen(points_.begin(), points_.end());
        if (seen.size() != points_.size())
            throw Error("finite space '" + name_ + "' has duplicate point labels");
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i] == label) return i;
        throw Error("point '" + label + "' not in space '" + name_ + "'");
    }

    friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
        return a.name_ == b.name_ && a.points_ == b.points_;
    }
    friend bool operator!=(const FiniteSpace& a, const FiniteSpace& b) { return !(a == b); }

private:
    std::string name_;
    std::vector<std::string> points_;
};

struct SpaceFactor {
    Role role;
    FiniteSpace space;

    friend bool operator==(const SpaceFactor& a, const SpaceFactor& b) {
        return a.role == b.role && a.space == b.space;
    }
};

// A product of role-tagged finite spaces. Zero factors is the one-point unit
// space (the domain of a distribution seen as a kernel). Enumeration is
// first-factor-outer: index(x, y) = index(x) * |Y| + index(y).
class Space {
public:
    Space() = default;
    explicit Space(std::vector<SpaceFactor> factors) : factors_(std::move(factors)) {}

    static Space unit() { return Space(); }
    static Space single(Role role, FiniteSpace s) {
        return Space({SpaceFactor{role, std::move(s)}});
    }
    static Space pair(Role r1, FiniteSpace s1, Role r2, FiniteSpace s2) {
        return Space({SpaceFactor{r1, std::move(s1)}, SpaceFactor{r2, std::move(s2)}});
    }

    const std::vector<SpaceFactor>& factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& f : factors_) n *= f.space.size();
        return n;
    }

    std::vector<Role> roles() const {
        std::vector<Role> r;
        r.reserve(factors_.size());
        for (const auto& f : factors_) r.push_back(f.role);
        return r;
    }

    bool has_role(Role r) const {
        for (const auto& f : factors_)
            if (f.role == r) return true;
        return false;
    }

    const SpaceFactor& factor_with_role(Role r) const {
        for (const auto& f : factors_)
            if (f.role == r) return f;
        throw UnknownRole(std::string("space has no factor with role ") + role_name(r));
    }

    std::size_t flat_index(std::span<const std::size_t> coords) const {
        if (coords.size() != factors_.size())
            throw DimensionMismatch("coordinate tuple length does not match space rank");
        std::size_t idx = 0;
        for (std::size_t k = 0; k < factors_.size(); ++k) {
            if (coords[k] >= factors_[k].space.size())
                throw DimensionMismatch("coordinate out of range");
            idx = idx * factors_[k].space.size() + coords[k];
        }
        return idx;
    }

    std::vector<std::size_t> unflatten(std::size_t idx) const {
        std::vector<std::size_t> coords(factors_.size(), 0);
        for (std::size_t k = factors_.size(); k-- > 0;) {
            std::size_t n = factors_[k].space.size();
            coords[k] = idx % n;
            idx /= n;
        }
        return coords;
    }

    std::string point_label(std::size_t idx) const {
        if (factors_.empty()) return "*";
        auto coords = unflatten(idx);
        std::string out;
        for (std::size_t k = 0; k < factors_.size(); ++k) {
            if (k) out += ",";
            out += factors_[k].space.points()[coords[k]];
        }
        return factors_.size() > 1 ? "(" + out + ")" : out;
    }

    friend bool operator==(const Space& a, const Space& b) { return a.factors_ == b.factors_; }
    friend bool operator!=(const Space& a, const Space& b) { return !(a == b); }

private:
    std::vector<SpaceFactor> factors_;
};

} // namespace kc
