"""Function field arithmetic, differentials, derivations, involution."""

import pytest

from g2frob import (
    Curve,
    DegreeNotFive,
    DegreeOverflow,
    Derivation,
    DivisionByZero,
    EvenCharacteristic,
    ExtField,
    NotSquarefree,
    PrimeField,
    ZeroDifferential,
    canonical_d,
    curve_from_spec,
    curve_id,
    curve_spec,
    dual_derivation,
    hyperelliptic_involution,
    iterate_derivation,
    k_arith,
    make_curve,
    pair,
    random_curve,
)
from g2frob import poly

from conftest import CERTIFIED, make_random_element, rng_for


def test_make_curve_accepts_and_rejects():
    F5 = PrimeField(5)
    cv = make_curve(F5, [1, 1, 0, 0, 0, 1])  # x^5 + x + 1, squarefree over F_5
    assert cv.genus == 2 and cv.p == 5

    F3 = PrimeField(3)
    with pytest.raises(NotSquarefree):
        make_curve(F3, [0, 1, 0, 1, 0, 1])  # x^5 + x^3 + x = x (x+1)^2 (x+2)^2
    with pytest.raises(EvenCharacteristic):
        PrimeField(2)
    with pytest.raises(DegreeNotFive):
        make_curve(F5, [1, 0, 0, 1])
    with pytest.raises(DegreeNotFive):
        make_curve(F5, [1, 0, 0, 0, 0, 2])  # not monic


def test_defining_relation_and_inversion(curve3):
    cv = curve3
    y, x = cv.y(), cv.x()
    fx = cv.from_poly(cv.f)
    assert k_arith(y, y, "mul") == fx
    assert k_arith(cv.one(), y, "div") == y / fx  # 1/y = y/f
    with pytest.raises(DivisionByZero):
        k_arith(cv.one(), cv.zero(), "div")


def test_random_inverses_and_normal_form(curve5):
    cv = curve5
    rng = rng_for("ff-inverse")
    for _ in range(200):
        u = make_random_element(cv, rng)
        assert u * u.inverse() == cv.one()
        # normal form invariants
        F = cv.field
        assert F.eq(u.D[-1], F.one())
        g = poly.gcd(F, poly.gcd(F, u.A, u.B), u.D)
        assert poly.degree(g) == 0


def test_normal_form_uniqueness_via_identities(curve3):
    cv = curve3
    rng = rng_for("ff-uniqueness")
    for _ in range(200):
        u = make_random_element(cv, rng)
        v = make_random_element(cv, rng)
        w = make_random_element(cv, rng)
        assert (u + v) * w == u * w + v * w
        assert u - u == cv.zero()
        assert (u * v) / v == u


def test_canonical_d_basics(curve3):
    cv = curve3
    dx = canonical_d(cv.x())
    assert dx.g == cv.one()
    dy = canonical_d(cv.y())
    fprime = cv.from_poly(cv.fprime)
    two = cv.constant(cv.field.from_int(2))
    assert dy.g == fprime / (two * cv.y())


def test_d_kills_p_powers(curve3, curve5):
    for cv in (curve3, curve5):
        rng = rng_for(f"ff-dpow-{cv.p}")
        for _ in range(100):
            u = make_random_element(cv, rng, max_deg=2)
            assert canonical_d(u ** cv.p).is_zero()


def test_d_leibniz(curve3):
    cv = curve3
    rng = rng_for("ff-dleibniz")
    for _ in range(200):
        u = make_random_element(cv, rng)
        v = make_random_element(cv, rng)
        lhs = canonical_d(u * v).g
        rhs = u * canonical_d(v).g + v * canonical_d(u).g
        assert lhs == rhs


def test_dual_derivation_and_pair(curve3):
    cv = curve3
    omega0, omega1 = cv.basis_forms()
    theta0 = dual_derivation(omega0)
    # theta0(x) = y and theta0(y) = f'/2 for omega0 = dx/y
    assert theta0.value_on_x == cv.y()
    half = cv.constant(cv.field.inv(cv.field.from_int(2)))
    assert theta0.apply(cv.y()) == cv.from_poly(cv.fprime) * half
    # <dx, theta0> = y, <0, theta> = 0, <omega0, theta0> = 1
    from g2frob import Differential

    dx = Differential(cv, cv.one())
    assert pair(dx, theta0) == cv.y()
    assert pair(Differential(cv, cv.zero()), theta0).is_zero()
    assert pair(omega0, theta0) == cv.one()
    with pytest.raises(ZeroDifferential):
        dual_derivation(Differential(cv, cv.zero()))


def test_pair_of_dual_is_one_on_randoms(curve3):
    cv = curve3
    from g2frob import Differential

    rng = rng_for("ff-dualpair")
    for _ in range(100):
        g = make_random_element(cv, rng)
        omega = Differential(cv, g)
        assert pair(omega, dual_derivation(omega)) == cv.one()


def test_pair_is_bilinear(curve3):
    cv = curve3
    from g2frob import Differential

    rng = rng_for("ff-bilinear")
    for _ in range(50):
        g1, g2 = make_random_element(cv, rng), make_random_element(cv, rng)
        s = make_random_element(cv, rng)
        th = Derivation(cv, make_random_element(cv, rng))
        w1, w2 = Differential(cv, g1), Differential(cv, g2)
        assert pair(w1 + w2, th) == pair(w1, th) + pair(w2, th)
        assert pair(w1.scaled(s), th) == s * pair(w1, th)


def test_iterate_derivation(curve3, flat3):
    cv = curve3
    omega_L, theta_L = flat3
    u = cv.x() + cv.y()
    assert iterate_derivation(theta_L, u, 0) == u
    # Jacobson: theta^p is additive and Leibniz
    rng = rng_for("ff-jacobson")
    p = cv.p
    for _ in range(25):
        a = make_random_element(cv, rng, max_deg=2)
        b = make_random_element(cv, rng, max_deg=2)
        tp_ab = iterate_derivation(theta_L, a * b, p)
        assert tp_ab == a * iterate_derivation(theta_L, b, p) + b * iterate_derivation(theta_L, a, p)
        assert iterate_derivation(theta_L, a + b, p) == (
            iterate_derivation(theta_L, a, p) + iterate_derivation(theta_L, b, p)
        )
    # the flatness identity: <omega_L, theta_L^p> = 1
    theta_Lp = Derivation(cv, iterate_derivation(theta_L, cv.x(), p))
    assert pair(omega_L, theta_Lp) == cv.one()


def test_involution(curve3):
    cv = curve3
    assert hyperelliptic_involution(cv.y()) == -cv.y()
    omega0 = cv.basis_forms()[0]
    assert hyperelliptic_involution(omega0).g == -omega0.g
    rng = rng_for("ff-involution")
    for _ in range(100):
        u = make_random_element(cv, rng)
        v = make_random_element(cv, rng)
        iu = hyperelliptic_involution(u)
        assert hyperelliptic_involution(iu) == u
        assert hyperelliptic_involution(u * v) == iu * hyperelliptic_involution(v)
        assert hyperelliptic_involution(u + v) == iu + hyperelliptic_involution(v)
    # fixes the rational subfield pointwise
    w = cv.from_ints([2, 1, 0, 2]) / cv.from_ints([1, 1])
    assert hyperelliptic_involution(w) == w


def test_degree_overflow():
    F = PrimeField(3)
    cv = Curve(F, poly.from_ints(F, CERTIFIED[3][0]), degree_cap=8)
    theta0 = dual_derivation(cv.basis_forms()[0])
    with pytest.raises(DegreeOverflow):
        iterate_derivation(theta0, cv.x(), 12)


def test_curve_spec_roundtrip_and_id(curve3):
    spec = curve_spec(curve3)
    cv2 = curve_from_spec(spec)
    assert cv2 == curve3
    assert curve_id(cv2) == curve_id(curve3)
    f9 = ExtField(3, (1, 0, 1))
    cve = make_curve(f9, [f9.from_int(c) for c in CERTIFIED[3][0]])
    spec_e = curve_spec(cve)
    assert spec_e["ext"] == [1, 0, 1]
    assert curve_from_spec(spec_e) == cve
    assert curve_id(cve) != curve_id(curve3)  # field is part of the identity


def test_random_curve_deterministic():
    F = PrimeField(5)
    a = random_curve(F, rng_for("rc"))
    b = random_curve(F, rng_for("rc"))
    assert a == b
    assert poly.is_squarefree(F, a.f)
