#!/usr/bin/env python3
"""Smoke tests for the python module: the worked example, classification,
one Bayes-risk equality, and an inversion round trip."""

import kernelcorrupt as kc


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    xs = kc.FiniteSpace("X", ["b", "w"])
    ys = kc.FiniteSpace("Y", ["+1", "-1"])
    xsp = kc.Space.single(kc.Role.X, xs)
    prod = kc.Space.pair(kc.Role.X, xs, kc.Role.Y, ys)

    lam = kc.Kernel(prod, kc.Space.single(kc.Role.Y, ys),
                    [0.9, 0.0, 0.8, 0.0,
                     0.1, 1.0, 0.2, 1.0])
    spec = kc.CorruptionSpec.factorized(kc.delta(xsp), lam)

    # worked example: the block-diagonal joint and both corrupted joints
    joint = kc.build_joint(spec)
    assert joint.matrix()[0][0] == 0.9 and joint.matrix()[1][1] == 1.0
    p1 = kc.make_joint(xs, ys, [0.25, 0.25, 0.25, 0.25])
    p2 = kc.make_joint(xs, ys, [0.3, 0.2, 0.25, 0.25])
    q1 = kc.corrupt(p1, spec)
    q2 = kc.corrupt(p2, spec)
    for got, want in zip(q1.weights, [45 / 200, 55 / 200, 40 / 200, 60 / 200]):
        assert approx(got, want, 1e-15), (got, want)
    for got, want in zip(q2.weights, [54 / 200, 46 / 200, 40 / 200, 60 / 200]):
        assert approx(got, want, 1e-15), (got, want)
    print("worked example ok")

    # taxonomy
    assert kc.classify(lam) == kc.CorruptionType.TwoDependentY
    assert kc.classify(kc.delta(xsp)) == kc.CorruptionType.Identity
    assert kc.classify(joint) == kc.CorruptionType.Joint
    sig_tau = kc.Signature([kc.Role.X], [kc.Role.X])
    sig_lam = kc.Signature([kc.Role.X, kc.Role.Y], [kc.Role.Y])
    assert kc.check_pairwise_feasible(sig_tau, sig_lam)
    assert not kc.check_pairwise_feasible(sig_tau, kc.Signature([kc.Role.X], [kc.Role.Y]))
    print("taxonomy ok")

    # Bayes-risk equality on the worked instance
    problem = kc.LearningProblem(kc.brier_loss(ys), kc.all_deterministic_hypotheses(xs, ys), p1)
    rep = kc.verify_dpe(problem, spec, kc.DpeCase.SimpleXTwoDepY)
    assert rep.passed and rep.abs_gap <= 1e-12, (rep.abs_gap, rep.passed)
    assert rep.argmin_corrupted == rep.argmin_transformed
    route = kc.factorized_corruption_identities(p1, spec)
    assert route.passed and route.max_gap <= 1e-12
    print("bayes-risk equality ok")

    # Bayesian inversion and the corrected loss
    inv = kc.bayesian_inverse(joint, p1)
    props = kc.check_inverse_properties(inv)
    assert props.passed, (props.reverse_gap, props.coupling_gap, props.expectation_gap)
    lam_clean = kc.extract_label_factor(inv.inverse)
    assert lam_clean is not None
    cl = kc.cl_corrected_loss(lam_clean, kc.brier_loss(ys))
    assert cl.construction == kc.CorrectionConstruction.ClDependent
    hyps = kc.all_deterministic_hypotheses(xs, ys)
    corrupted = kc.corrupt(p1, spec)
    base = kc.compose_loss_class(kc.brier_loss(ys), hyps)
    for i in range(len(hyps)):
        corrected = kc.corrected_risk(cl, hyps[i], corrupted)
        clean = kc.risk(base.functions[i], p1)
        assert approx(corrected, clean, 1e-10), (corrected, clean)
    print("inversion and correction ok")

    # losses
    assert kc.validate_properness(kc.brier_loss(ys))
    assert not kc.zero_one_loss(ys).declared_proper

    # errors surface as the module exception
    try:
        kc.make_joint(xs, ys, [0.2, 0.2, 0.2, 0.2])
    except kc.KernelCorruptError:
        pass
    else:
        raise AssertionError("expected a normalization error")
    print("losses and errors ok")

    print("smoke: all checks passed")


if __name__ == "__main__":
    main()
