"""Lemma checks: two sums, off-diagonal closed forms, deformation rigidity."""

import pytest

from g2frob import (
    FieldTooLargeForBrute,
    NotTorsion,
    enumerate_p_torsion,
    make_curve,
    make_field,
    recheck,
)
from g2frob.verify import (
    auxiliary_recursion_rows,
    check_offdiag_closed_forms,
    check_two_sums,
    closed_form_rows,
    rigidity_scan,
    two_sums,
)

from conftest import CERTIFIED, make_random_element, rng_for


def _flat_pair(curve):
    a, b = CERTIFIED[curve.p][1]
    F = curve.field
    return (F.from_int(a), F.from_int(b))


def test_two_sums_holds_on_certified_curves(curve3, curve5):
    for cv in (curve3, curve5):
        F = cv.field
        ab_L = _flat_pair(cv)
        for ab in [(F.one(), F.zero()), (F.zero(), F.one())]:
            rep = check_two_sums(cv, ab_L, ab)
            dependent = (
                F.is_zero(F.sub(F.mul(ab_L[0], ab[1]), F.mul(ab_L[1], ab[0])))
            )
            assert rep.status == ("inapplicable" if dependent else "holds")


def test_two_sums_dependent_pair_is_inapplicable(curve3):
    cv, F = curve3, curve3.field
    ab_L = _flat_pair(cv)
    scaled = (F.mul(F.from_int(2), ab_L[0]), F.mul(F.from_int(2), ab_L[1]))
    rep = check_two_sums(cv, ab_L, scaled)
    assert rep.status == "inapplicable"
    assert rep.witness["S1"]["A"] == [] and rep.witness["S2"]["A"] == []


def test_two_sums_p3_binomials(curve3, flat3):
    # at p = 3: S2 = 2 theta(x) + theta^2(x)
    cv = curve3
    omega_L, theta_L = flat3
    x = cv.basis_forms()[0].ratio(omega_L)
    S1, S2 = two_sums(cv, theta_L, x)
    t1 = theta_L.apply(x)
    t2 = theta_L.apply(t1)
    assert S1 == t1 + t2
    assert S2 == cv.constant(cv.field.from_int(2)) * t1 + t2


def test_two_sums_invariant_under_flat_shift(curve3):
    # omega -> omega + c omega_L changes x by a constant, so S1 and S2 are
    # literally unchanged
    cv, F = curve3, curve3.field
    ab_L = _flat_pair(cv)
    base = (F.one(), F.zero())
    rep0 = check_two_sums(cv, ab_L, base)
    for c in range(1, cv.p):
        shifted = (
            F.add(base[0], F.mul(F.from_int(c), ab_L[0])),
            F.add(base[1], F.mul(F.from_int(c), ab_L[1])),
        )
        rep = check_two_sums(cv, ab_L, shifted)
        assert rep.status == rep0.status == "holds"
        assert rep.witness["S1"] == rep0.witness["S1"]
        assert rep.witness["S2"] == rep0.witness["S2"]


def test_two_sums_rejects_non_torsion(curve3):
    F = curve3.field
    with pytest.raises(NotTorsion):
        check_two_sums(curve3, (F.one(), F.zero()), (F.zero(), F.one()))
    with pytest.raises(NotTorsion):
        check_two_sums(curve3, (F.zero(), F.zero()), (F.zero(), F.one()))


def test_offdiag_closed_forms_hold(curve3, curve5):
    for cv in (curve3, curve5):
        F = cv.field
        ab_L = _flat_pair(cv)
        for ab in [(F.one(), F.zero()), (F.zero(), F.one()),
                   (F.one(), F.one()), (F.zero(), F.zero())]:
            rep = check_offdiag_closed_forms(cv, ab_L, ab)
            assert rep.status == "holds"


def test_offdiag_zero_form(curve3):
    # omega = 0: both psi matrices vanish and equality holds trivially
    cv, F = curve3, curve3.field
    rep = check_offdiag_closed_forms(cv, _flat_pair(cv), (F.zero(), F.zero()))
    assert rep.status == "holds"
    assert rep.witness["psiUpperOffdiag"]["A"] == []


def test_auxiliary_recursion_matches_closed_forms(curve3, flat3):
    cv = curve3
    omega_L, theta_L = flat3
    rng = rng_for("verify-recursion")
    for _ in range(10):
        f11 = make_random_element(cv, rng, max_deg=1)
        f12 = make_random_element(cv, rng, max_deg=1)
        f21 = make_random_element(cv, rng, max_deg=1)
        rec = auxiliary_recursion_rows(cv, theta_L, f11, f12, f21, cv.p)
        closed = closed_form_rows(cv, theta_L, f11, f12, f21, cv.p)
        assert rec == closed


def test_rigidity_scan_certified_p3(curve3):
    cv, F = curve3, curve3.field
    ab_L = _flat_pair(cv)
    sols, rep = rigidity_scan(cv, ab_L, mode="brute")
    assert rep.status == "holds"
    assert len(sols) == 9
    assert sols.is_trivial_family
    w = rep.witness["scalarShiftIdentity"]
    assert w["checked"] == 729 and w["held"] == 729
    assert rep.witness["closedFormsSampled"] is True

    # every solution is (0, c1 omega_L, c2 omega_L)
    zero = (F.zero(), F.zero())
    for t11, t12, t21 in sols.solutions:
        assert t11 == zero
        for c in (t12, t21):
            # c is an F_3 multiple of ab_L
            assert any(
                c == (F.mul(F.from_int(s), ab_L[0]), F.mul(F.from_int(s), ab_L[1]))
                for s in range(3)
            )


def test_rigidity_linear_agrees_with_brute(curve3):
    ab_L = _flat_pair(curve3)
    brute, _ = rigidity_scan(curve3, ab_L, mode="brute")
    linear, rep = rigidity_scan(curve3, ab_L, mode="linear")
    assert brute.solutions == linear.solutions
    assert rep.status == "holds"


def test_rigidity_guard_on_large_fields():
    F25 = make_field(5, 2)
    cv = make_curve(F25, [F25.from_int(c) for c in CERTIFIED[5][0]])
    ts = enumerate_p_torsion(cv, "semilinear")
    nz = ts.nonzero(F25)
    assert nz
    with pytest.raises(FieldTooLargeForBrute):
        rigidity_scan(cv, nz[0], mode="brute")  # 625^3 > 2^24


def test_reports_recheck(curve3):
    cv, F = curve3, curve3.field
    ab_L = _flat_pair(cv)
    r1 = check_two_sums(cv, ab_L, (F.one(), F.zero()))
    r2 = check_offdiag_closed_forms(cv, ab_L, (F.one(), F.zero()))
    _, r3 = rigidity_scan(cv, ab_L, mode="linear")
    assert recheck(cv, r1)
    assert recheck(cv, r2)
    assert recheck(cv, r3)


def test_report_jsonable_shape(curve3):
    cv, F = curve3, curve3.field
    rep = check_two_sums(cv, _flat_pair(cv), (F.one(), F.zero()))
    d = rep.to_jsonable()
    assert set(d) == {"curveId", "lemmaId", "status", "witness", "timing"}
    import json

    json.dumps(d)  # round-trippable
