#pragma once

#include <optional>
#include <random>
#include <vector>

#include "kernelcorrupt/dpe.hpp"

namespace kc {

// Reversal of a kernel relative to a source distribution: columns are the
// discrete Bayes posteriors. Output points the pushed distribution misses get
// uniform columns, recorded in off_support.
struct BayesianInverse {
    Kernel<double> forward;
    Distribution<double> source;
    Distribution<double> pushed;
    Kernel<double> inverse;
    std::vector<std::size_t> off_support;
};

inline BayesianInverse bayesian_inverse(const Kernel<double>& kappa, const Distribution<double>& P) {
    if (P.space() != kappa.domain())
        throw SpaceMismatch("source distribution does not live on the kernel's domain");
    Distribution<double> pushed = act_on_dist(kappa, P);

    std::size_t n_in = kappa.cols(), n_out = kappa.rows();
    std::vector<double> m(n_in * n_out, 0.0); // inverse is |domain| x |image|
    std::vector<std::size_t> off;
    for (std::size_t zt = 0; zt < n_out; ++zt) {
        if (pushed[zt] == 0.0) {
            off.push_back(zt);
            for (std::size_t z = 0; z < n_in; ++z)
                m[z * n_out + zt] = 1.0 / static_cast<double>(n_in);
            continue;
        }
        for (std::size_t z = 0; z < n_in; ++z)
            m[z * n_out + zt] = P[z] * kappa.entry(zt, z) / pushed[zt];
    }
    Kernel<double> inv(kappa.image(), kappa.domain(), std::move(m));
    return BayesianInverse{kappa, P, std::move(pushed), std::move(inv), std::move(off)};
}

struct InversePropertyReport {
    double reverse_gap = 0.0;     // max | (P~ ∘ k†) - P |
    double coupling_gap = 0.0;    // max | P(z) k(zt|z) - P~(zt) k†(z|zt) |
    double expectation_gap = 0.0; // max over random f of | E_P f - E_P~ k†f |
    bool pass = false;

    bool all_within(double tol) const {
        return reverse_gap <= tol && coupling_gap <= tol && expectation_gap <= tol;
    }
};

inline InversePropertyReport check_inverse_properties(const BayesianInverse& inv, int n_random_fns = 50,
                                                      std::uint64_t seed = 20240, double tol = 1e-10) {
    InversePropertyReport rep;
    Distribution<double> back = act_on_dist(inv.inverse, inv.pushed);
    rep.reverse_gap = max_abs_gap(back, inv.source);

    for (std::size_t z = 0; z < inv.forward.cols(); ++z)
        for (std::size_t zt = 0; zt < inv.forward.rows(); ++zt) {
            double lhs = inv.source[z] * inv.forward.entry(zt, z);
            double rhs = inv.pushed[zt] * inv.inverse.entry(z, zt);
            rep.coupling_gap = std::max(rep.coupling_gap, std::abs(lhs - rhs));
        }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < n_random_fns; ++t) {
        std::vector<double> fv(inv.source.size());
        for (auto& v : fv) v = unif(rng);
        FunctionOnSpace<double> f(inv.source.space(), fv);
        double lhs = inner_product(inv.source, f);
        double rhs = inner_product(inv.pushed, act_on_fn(inv.inverse, f));
        rep.expectation_gap = std::max(rep.expectation_gap, std::abs(lhs - rhs));
    }
    rep.pass = rep.all_within(tol);
    return rep;
}

// If the joint kernel has the structure delta_X (x) lambda (it never moves the
// attribute), extract the label factor X x Y -> Y. The mass a column puts on
// moved attributes must stay within eps.
inline std::optional<Kernel<double>> extract_label_factor(const Kernel<double>& joint, double eps = 1e-9) {
    const Space& dom = joint.domain();
    const Space& img = joint.image();
    if (dom.rank() != 2 || img.rank() != 2 || dom != img) return std::nullopt;
    std::size_t nx = dom.factor_with_role(Role::X).space.size();
    std::size_t ny = dom.factor_with_role(Role::Y).space.size();

    std::vector<double> lm(ny * nx * ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            std::size_t col = x * ny + y;
            double kept = 0.0;
            for (std::size_t xt = 0; xt < nx; ++xt)
                for (std::size_t yt = 0; yt < ny; ++yt) {
                    double v = joint.entry(xt * ny + yt, col);
                    if (xt != x && v > eps) return std::nullopt;
                    if (xt == x) kept += v;
                }
            if (std::abs(kept - 1.0) > std::max(eps, kEpsMass)) return std::nullopt;
            for (std::size_t yt = 0; yt < ny; ++yt)
                lm[yt * (nx * ny) + col] = joint.entry(x * ny + yt, col) / kept;
        }
    return Kernel<double>(dom, Space::single(Role::Y, img.factor_with_role(Role::Y).space), std::move(lm));
}

// Drops the attribute coordinate from a label factor X x Y -> Y whose
// columns do not actually depend on it.
inline std::optional<Kernel<double>> reduce_to_simple_label_factor(const Kernel<double>& lambda,
                                                                   double eps = 1e-12) {
    if (lambda.domain_roles() != std::vector<Role>{Role::X, Role::Y}) return std::nullopt;
    std::size_t nx = lambda.domain().factor_with_role(Role::X).space.size();
    std::size_t ny = lambda.domain().factor_with_role(Role::Y).space.size();
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 1; x < nx; ++x)
            for (std::size_t yt = 0; yt < lambda.rows(); ++yt)
                if (std::abs(lambda.entry(yt, x * ny + y) - lambda.entry(yt, y)) > eps) return std::nullopt;
    std::vector<double> m(lambda.rows() * ny);
    for (std::size_t yt = 0; yt < lambda.rows(); ++yt)
        for (std::size_t y = 0; y < ny; ++y) m[yt * ny + y] = lambda.entry(yt, y);
    Space ysp = Space::single(Role::Y, lambda.domain().factor_with_role(Role::Y).space);
    return Kernel<double>(ysp, lambda.image(), std::move(m));
}

enum class CorrectionConstruction {
    ClSimple,    // label factor Y -> Y
    ClDependent, // label factor X x Y -> Y
    GclCase1,    // attribute factor keyed by xt (and possibly yt through lambda)
    GclCase2,    // 1-dependent pair: tau keyed by yt, lambda keyed by xt
    GclCase3,    // one 1-dependent and one 2-dependent factor
    GclCase4,    // both factors keyed by (xt, yt)
};

inline const char* correction_construction_name(CorrectionConstruction c) {
    switch (c) {
        case CorrectionConstruction::ClSimple: return "cl-simple";
        case CorrectionConstruction::ClDependent: return "cl-dependent";
        case CorrectionConstruction::GclCase1: return "gcl-case-1";
        case CorrectionConstruction::GclCase2: return "gcl-case-2";
        case CorrectionConstruction::GclCase3: return "gcl-case-3";
        case CorrectionConstruction::GclCase4: return "gcl-case-4";
    }
    return "?";
}

// A loss on the corrupted sample space. CL corrections evaluate any
// hypothesis; GCL corrections are built for one hypothesis and refuse others.
class CorrectedLoss {
public:
    CorrectedLoss(CorrectionConstruction construction, double bound,
                  std::function<double(const Kernel<double>&, std::size_t, std::size_t)> eval,
                  std::optional<Kernel<double>> bound_hypothesis = std::nullopt)
        : construction_(construction), bound_(bound), eval_(std::move(eval)),
          bound_hypothesis_(std::move(bound_hypothesis)) {}

    CorrectionConstruction construction() const { return construction_; }
    double bound() const { return bound_; }
    const std::optional<Kernel<double>>& bound_hypothesis() const { return bound_hypothesis_; }

    double operator()(const Kernel<double>& h, std::size_t xt, std::size_t yt) const {
        if (bound_hypothesis_) {
            if (h.domain() != bound_hypothesis_->domain() || h.image() != bound_hypothesis_->image() ||
                h.matrix() != bound_hypothesis_->matrix())
                throw SignatureMismatch("this corrected loss was built for a different hypothesis");
        }
        return eval_(h, xt, yt);
    }

private:
    CorrectionConstruction construction_;
    double bound_;
    std::function<double(const Kernel<double>&, std::size_t, std::size_t)> eval_;
    std::optional<Kernel<double>> bound_hypothesis_;
};

// Label-only correction: mix the loss over the cleaned label. The cleaning
// factor is the Y part of a delta_X (x) lambda cleaning kernel.
inline CorrectedLoss cl_corrected_loss(const Kernel<double>& lambda_clean, const LossFunction& loss) {
    auto dr = lambda_clean.domain_roles();
    auto ir = lambda_clean.image_roles();
    bool simple = dr == std::vector<Role>{Role::Y};
    bool dependent = dr == std::vector<Role>{Role::X, Role::Y};
    if (ir != std::vector<Role>{Role::Y} || (!simple && !dependent))
        throw SignatureMismatch("cl correction needs a label factor Y->Y or XxY->Y");
    if (lambda_clean.rows() != loss.y_size)
        throw SpaceMismatch("cleaning factor's label space does not match the loss");

    std::size_t ny = lambda_clean.rows();
    auto eval = [lambda_clean, loss, simple, ny](const Kernel<double>& h, std::size_t xt, std::size_t yt) {
        auto p = h.column(xt);
        std::size_t col = simple ? yt : xt * ny + yt;
        double acc = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            double w = lambda_clean.entry(y, col);
            if (w != 0.0) acc += w * loss.eval(p, y);
        }
        return acc;
    };
    return CorrectedLoss(simple ? CorrectionConstruction::ClSimple : CorrectionConstruction::ClDependent,
                         loss.bound, eval);
}

// Distribution over the distinct prediction vectors {h(x)} induced by one
// column of the attribute factor.
struct PushforwardDistribution {
    std::vector<std::vector<double>> support;
    std::vector<double> weights;
    std::size_t index = 0;
};

inline PushforwardDistribution pushforward(const Kernel<double>& tau, const Kernel<double>& h,
                                           std::size_t index) {
    if (tau.image_roles() != std::vector<Role>{Role::X} ||
        !(tau.image().factors()[0].space == h.domain().factors()[0].space))
        throw SpaceMismatch("pushforward needs tau writing the hypothesis' input space");
    if (index >= tau.cols()) throw DimensionMismatch("pushforward index out of range");

    PushforwardDistribution out;
    out.index = index;
    std::size_t nx = tau.rows();
    for (std::size_t x = 0; x < nx; ++x) {
        auto p = h.column(x);
        double w = tau.entry(x, index);
        bool merged = false;
        for (std::size_t s = 0; s < out.support.size(); ++s) {
            double gap = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) gap = std::max(gap, std::abs(p[k] - out.support[s][k]));
            if (gap <= 1e-12) {
                out.weights[s] += w;
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.support.push_back(std::move(p));
            out.weights.push_back(w);
        }
    }
    return out;
}

inline CorrectionConstruction gcl_construction_for(DpeCase c) {
    switch (c) {
        case DpeCase::SimpleSimple:
        case DpeCase::TwoDepXSimpleY:
        case DpeCase::SimpleXTwoDepY: return CorrectionConstruction::GclCase1;
        case DpeCase::OneDepYXOneDepXY: return CorrectionConstruction::GclCase2;
        case DpeCase::OneDepYXTwoDepY:
        case DpeCase::TwoDepXOneDepXY: return CorrectionConstruction::GclCase3;
        case DpeCase::TwoDepXTwoDepY: return CorrectionConstruction::GclCase4;
    }
    throw CaseMismatch("unknown case");
}

// Hypothesis-dependent correction for factorized cleaning kernels: average
// the label-corrected loss over the pushforward of the prediction.
//   l~(h, xt, yt) = sum_x tau(x | sel_tau) sum_y lambda(y | sel_lambda) l(h(x), y)
inline CorrectedLoss gcl_corrected_loss(const CorruptionSpec<double>& clean_spec, const LossFunction& loss,
                                        const Kernel<double>& h) {
    if (!clean_spec.is_factorized())
        throw InfeasibleFactorization("gcl correction needs a factorized cleaning kernel");
    auto c = dpe_case_of(clean_spec);
    if (!c) throw InfeasibleFactorization("cleaning kernel signatures are not a feasible pair");

    const Kernel<double> tau = clean_spec.tau();
    const Kernel<double> lambda = clean_spec.lambda();
    const FiniteSpace& xs = tau.image().factors()[0].space;
    const FiniteSpace& ys = lambda.image().factors()[0].space;
    if (!(h.domain().factors()[0].space == xs) || !(h.image().factors()[0].space == ys))
        throw SpaceMismatch("hypothesis does not map the cleaning kernel's spaces");
    if (loss.y_size != ys.size()) throw SpaceMismatch("loss label count mismatch");

    Space prod = Space::pair(Role::X, xs, Role::Y, ys);
    auto proj_tau = index_projection(prod, tau.domain());
    auto proj_lambda = index_projection(prod, lambda.domain());
    std::size_t nx = xs.size(), ny = ys.size();

    auto eval = [tau, lambda, loss, proj_tau, proj_lambda, nx, ny](const Kernel<double>& hyp,
                                                                   std::size_t xt, std::size_t yt) {
        std::size_t z = xt * ny + yt;
        std::size_t jt = proj_tau[z], jl = proj_lambda[z];
        double acc = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            double tw = tau.entry(x, jt);
            if (tw == 0.0) continue;
            auto p = hyp.column(x);
            double inner = 0.0;
            for (std::size_t y = 0; y < ny; ++y) inner += lambda.entry(y, jl) * loss.eval(p, y);
            acc += tw * inner;
        }
        return acc;
    };
    return CorrectedLoss(gcl_construction_for(*c), loss.bound, eval, h);
}

// Risk of a corrected loss composed with its hypothesis on a corrupted joint.
inline double corrected_risk(const CorrectedLoss& cl, const Kernel<double>& h,
                             const Distribution<double>& corrupted) {
    const Space& sp = corrupted.space();
    std::size_t ny = sp.factor_with_role(Role::Y).space.size();
    double acc = 0.0;
    for (std::size_t z = 0; z < corrupted.size(); ++z) {
        double w = corrupted[z];
        if (w == 0.0) continue;
        acc += w * cl(h, z / ny, z % ny);
    }
    return acc;
}

} // namespace kc
