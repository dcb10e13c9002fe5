#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kernelcorrupt/factorization.hpp"
#include "kernelcorrupt/kernel.hpp"

namespace kc {

// Risks within this absolute gap of the minimum count as tied minimizers.
inline constexpr double kEpsTie = 1e-9;

// Loss on (predicted distribution over Y, observed label index).
struct LossFunction {
    std::string name;
    std::size_t y_size = 0;
    double bound = 0.0;
    bool declared_proper = false;
    std::function<double(std::span<const double>, std::size_t)> eval;

    double operator()(std::span<const double> p, std::size_t y) const { return eval(p, y); }
};

inline LossFunction brier_loss(const FiniteSpace& y_space) {
    if (y_space.size() < 2) throw DimensionMismatch("brier loss needs at least two labels");
    LossFunction l;
    l.name = "brier";
    l.y_size = y_space.size();
    l.bound = 2.0;
    l.declared_proper = true;
    l.eval = [](std::span<const double> p, std::size_t y) {
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            double d = p[k] - (k == y ? 1.0 : 0.0);
            s += d * d;
        }
        return s;
    };
    return l;
}

// Misclassification on the argmax prediction; ties break to the lowest label
// index. Not proper and flagged as such.
inline LossFunction zero_one_loss(const FiniteSpace& y_space) {
    LossFunction l;
    l.name = "zero_one";
    l.y_size = y_space.size();
    l.bound = 1.0;
    l.declared_proper = false;
    l.eval = [](std::span<const double> p, std::size_t y) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < p.size(); ++k)
            if (p[k] > p[best]) best = k;
        return best == y ? 0.0 : 1.0;
    };
    return l;
}

enum class HypothesisOrigin { AllDeterministic, UserProvided };

// Explicit finite list of stochastic decision rules X -> Y.
struct HypothesisClass {
    std::vector<Kernel<double>> hypotheses;
    HypothesisOrigin origin = HypothesisOrigin::UserProvided;

    std::size_t size() const { return hypotheses.size(); }
    const Kernel<double>& operator[](std::size_t i) const { return hypotheses[i]; }
};

inline HypothesisClass make_hypothesis_class(std::vector<Kernel<double>> hs,
                                             HypothesisOrigin origin = HypothesisOrigin::UserProvided) {
    if (hs.empty()) throw DimensionMismatch("hypothesis class must be nonempty");
    for (const auto& h : hs)
        if (h.domain() != hs[0].domain() || h.image() != hs[0].image())
            throw SpaceMismatch("hypotheses must share domain and image spaces");
    return HypothesisClass{std::move(hs), origin};
}

// Every function X -> Y as a delta-valued kernel. Hypothesis id n assigns to
// attribute x the label (n / |Y|^(|X|-1-x)) mod |Y|.
inline HypothesisClass all_deterministic_hypotheses(const FiniteSpace& x_space, const FiniteSpace& y_space,
                                                    std::size_t cap = 4096) {
    std::size_t nx = x_space.size(), ny = y_space.size();
    double count = std::pow(static_cast<double>(ny), static_cast<double>(nx));
    if (count > static_cast<double>(cap))
        throw CapExceeded("|Y|^|X| exceeds the deterministic-hypothesis cap");
    std::size_t n = static_cast<std::size_t>(count + 0.5);

    Space dom = Space::single(Role::X, x_space);
    Space img = Space::single(Role::Y, y_space);
    std::vector<Kernel<double>> hs;
    hs.reserve(n);
    for (std::size_t id = 0; id < n; ++id) {
        std::vector<double> m(nx * ny, 0.0);
        std::size_t rest = id;
        for (std::size_t x = nx; x-- > 0;) {
            std::size_t label = rest % ny;
            rest /= ny;
            m[label * nx + x] = 1.0;
        }
        hs.emplace_back(dom, img, std::move(m));
    }
    return HypothesisClass{std::move(hs), HypothesisOrigin::AllDeterministic};
}

// One score function per hypothesis over X x Y, tagged with its origin id.
struct MinimizationSet {
    Space space;
    std::vector<FunctionOnSpace<double>> functions;
    std::vector<std::size_t> hypothesis_ids;

    std::size_t size() const { return functions.size(); }
};

inline std::vector<double> hypothesis_prediction(const Kernel<double>& h, std::size_t x) {
    return h.column(x);
}

inline MinimizationSet compose_loss_class(const LossFunction& loss, const HypothesisClass& hyps) {
    const Kernel<double>& h0 = hyps[0];
    const FiniteSpace& xs = h0.domain().factors()[0].space;
    const FiniteSpace& ys = h0.image().factors()[0].space;
    if (loss.y_size != ys.size())
        throw SpaceMismatch("loss label count does not match the hypothesis image space");
    Space prod = Space::pair(Role::X, xs, Role::Y, ys);

    MinimizationSet set;
    set.space = prod;
    std::size_t nx = xs.size(), ny = ys.size();
    for (std::size_t id = 0; id < hyps.size(); ++id) {
        std::vector<double> vals(nx * ny);
        for (std::size_t x = 0; x < nx; ++x) {
            auto p = hyps[id].column(x);
            for (std::size_t y = 0; y < ny; ++y) vals[x * ny + y] = loss.eval(p, y);
        }
        set.functions.emplace_back(prod, std::move(vals));
        set.hypothesis_ids.push_back(id);
    }
    return set;
}

inline double risk(const FunctionOnSpace<double>& f, const Distribution<double>& P) {
    return inner_product(P, f);
}

struct BayesRiskResult {
    double value = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> argmin; // hypothesis ids within the tie tolerance
};

inline BayesRiskResult bayes_risk(const MinimizationSet& set, const Distribution<double>& P,
                                  double tie_eps = kEpsTie) {
    if (set.functions.empty()) throw DimensionMismatch("minimization set is empty");
    std::vector<double> risks(set.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        risks[i] = risk(set.functions[i], P);
        if (risks[i] < best) best = risks[i];
    }
    BayesRiskResult res;
    res.value = best;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (risks[i] <= best + tie_eps) res.argmin.push_back(set.hypothesis_ids[i]);
    return res;
}

struct LearningProblem {
    LossFunction loss;
    HypothesisClass hypotheses;
    Distribution<double> joint;

    LearningProblem(LossFunction l, HypothesisClass h, Distribution<double> j)
        : loss(std::move(l)), hypotheses(std::move(h)), joint(std::move(j)) {
        if (hypotheses.size() == 0) throw DimensionMismatch("hypothesis class must be nonempty");
        const Space& sp = joint.space();
        if (sp.rank() != 2) throw NotAJoint("learning problem needs a joint over X x Y");
        const auto& h0 = hypotheses[0];
        if (h0.domain().factors()[0].space != sp.factor_with_role(Role::X).space ||
            h0.image().factors()[0].space != sp.factor_with_role(Role::Y).space)
            throw SpaceMismatch("hypotheses do not map the joint's X space to its Y space");
        if (loss.y_size != sp.factor_with_role(Role::Y).space.size())
            throw SpaceMismatch("loss label count does not match the joint's Y space");
    }
};

// All probability vectors over `dim` labels with entries that are multiples
// of `step` (up to rounding of the final coordinate).
inline std::vector<std::vector<double>> simplex_grid(std::size_t dim, double step = 0.01) {
    std::size_t ticks = static_cast<std::size_t>(std::llround(1.0 / step));
    std::vector<std::vector<double>> grid;
    std::vector<std::size_t> parts(dim, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t left) {
        if (k + 1 == dim) {
            parts[k] = left;
            std::vector<double> p(dim);
            for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<double>(parts[i]) / ticks;
            grid.push_back(std::move(p));
            return;
        }
        for (std::size_t t = 0; t <= left; ++t) {
            parts[k] = t;
            rec(k + 1, left - t);
        }
    };
    rec(0, ticks);
    return grid;
}

// Grid check that reporting the true conditional p is (near-)optimal:
// E_{y~p} l(p, y) <= min_q E_{y~p} l(q, y) + tol for every grid point p.
inline bool validate_properness(const LossFunction& loss, double step = 0.01, double tol = 1e-6) {
    auto grid = simplex_grid(loss.y_size, step);
    auto expected = [&](const std::vector<double>& p, const std::vector<double>& q) {
        double e = 0.0;
        for (std::size_t y = 0; y < p.size(); ++y)
            if (p[y] > 0.0) e += p[y] * loss.eval(q, y);
        return e;
    };
    for (const auto& p : grid) {
        double at_p = expected(p, p);
        for (const auto& q : grid)
            if (expected(p, q) < at_p - tol) return false;
    }
    return true;
}

// Spot check 0 <= loss <= bound over the grid and all labels.
inline bool validate_loss_bounds(const LossFunction& loss, double step = 0.05) {
    auto grid = simplex_grid(loss.y_size, step);
    for (const auto& p : grid)
        for (std::size_t y = 0; y < loss.y_size; ++y) {
            double v = loss.eval(p, y);
            if (v < 0.0 || v > loss.bound + 1e-12) return false;
        }
    return true;
}

} // namespace kc
