"""The genus-2 hyperelliptic function field K = F_q(x)[y] / (y^2 - f(x)).

The curve model is y^2 = f(x) with f monic, squarefree, of degree exactly 5
over a field of odd characteristic, so there is a single point at infinity
and the global regular differentials are spanned by dx/y and x dx/y.

Elements of K are kept in the normal form (A + B y) / D with A, B, D
polynomials in x, D monic, and gcd(gcd(A, B), D) = 1.  Two elements are
equal iff their normal forms are identical, which makes equality testing
and zero testing trivial.

Differentials are represented on the affine chart as g dx with g in K.
A derivation theta is determined by theta(x) (the chain rule extends it to
all of K, with theta(y) = theta(x) f'(x) / (2y)), and <g dx, theta> =
g * theta(x).

The hyperelliptic involution is y -> -y; it fixes F_q(x) pointwise and acts
on differentials through their dx-coefficients.
"""

from __future__ import annotations

import hashlib
import json

from . import poly
from .errors import (
    DegreeNotFive,
    DegreeOverflow,
    DivisionByZero,
    EvenCharacteristic,
    NotSquarefree,
    RangeError,
    ZeroDifferential,
)
from .exactnum import ExtField, PrimeField, make_field


class Curve:
    """y^2 = f(x), deg f = 5, f monic squarefree, over F_p or F_{p^k}.

    The curve object doubles as the arithmetic context for its function
    field: all FunctionFieldElement operations go through it.  `degree_cap`
    bounds the polynomial degrees appearing in normal forms; derivation
    towers grow degrees steadily and the cap turns a blowup into an explicit
    DegreeOverflow instead of a memory grab.
    """

    __slots__ = ("field", "f", "fprime", "degree_cap", "_half")

    def __init__(self, field, f_coeffs, degree_cap: int | None = None):
        if field.char == 2:
            raise EvenCharacteristic("the curve model needs p odd")
        f = poly.normalize(field, tuple(f_coeffs))
        if poly.degree(f) != 5 or not field.eq(f[-1], field.one()):
            raise DegreeNotFive(
                f"f must be monic of degree 5, got degree {poly.degree(f)}"
            )
        if not poly.is_squarefree(field, f):
            raise NotSquarefree("gcd(f, f') != 1: the model y^2 = f is singular")
        self.field = field
        self.f = f
        self.fprime = poly.derivative(field, f)
        self.degree_cap = degree_cap if degree_cap is not None else 64 * field.char + 400
        self._half = field.inv(field.from_int(2))

    @property
    def p(self) -> int:
        return self.field.char

    @property
    def genus(self) -> int:
        return 2

    # -- element constructors ----------------------------------------------
    def element(self, A, B=(), D=None) -> "FunctionFieldElement":
        if D is None:
            D = poly.one(self.field)
        F = self.field
        return self._make(
            poly.normalize(F, tuple(A)),
            poly.normalize(F, tuple(B)),
            poly.normalize(F, tuple(D)),
        )

    def from_poly(self, coeffs) -> "FunctionFieldElement":
        return self._make(poly.normalize(self.field, tuple(coeffs)), (), poly.one(self.field))

    def from_ints(self, ints) -> "FunctionFieldElement":
        return self.from_poly(poly.from_ints(self.field, ints))

    def constant(self, a) -> "FunctionFieldElement":
        return self.from_poly(poly.constant(self.field, a))

    def zero(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, (), (), poly.one(self.field))

    def one(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, poly.one(self.field), (), poly.one(self.field))

    def x(self) -> "FunctionFieldElement":
        return self.from_poly(poly.x(self.field))

    def y(self) -> "FunctionFieldElement":
        return FunctionFieldElement(self, (), poly.one(self.field), poly.one(self.field))

    def _make(self, A, B, D) -> "FunctionFieldElement":
        F = self.field
        if poly.is_zero(D):
            raise DivisionByZero("zero denominator in function field element")
        if poly.is_zero(A) and poly.is_zero(B):
            return FunctionFieldElement(self, (), (), poly.one(F))
        g = poly.gcd(F, poly.gcd(F, A, B), D)
        if poly.degree(g) > 0:
            A = poly.divmod_(F, A, g)[0]
            B = poly.divmod_(F, B, g)[0]
            D = poly.divmod_(F, D, g)[0]
        if not F.eq(D[-1], F.one()):
            s = F.inv(D[-1])
            A = poly.scale(F, A, s)
            B = poly.scale(F, B, s)
            D = poly.scale(F, D, s)
        top = max(poly.degree(A), poly.degree(B), poly.degree(D))
        if top > self.degree_cap:
            raise DegreeOverflow(
                f"normal form degree {top} exceeds cap {self.degree_cap}"
            )
        return FunctionFieldElement(self, A, B, D)

    # -- arithmetic (operands assumed to be elements of this curve's K) -----
    def add(self, u, v):
        F = self.field
        A = poly.add(F, poly.mul(F, u.A, v.D), poly.mul(F, v.A, u.D))
        B = poly.add(F, poly.mul(F, u.B, v.D), poly.mul(F, v.B, u.D))
        return self._make(A, B, poly.mul(F, u.D, v.D))

    def neg(self, u):
        return FunctionFieldElement(
            self, poly.neg(self.field, u.A), poly.neg(self.field, u.B), u.D
        )

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def mul(self, u, v):
        F = self.field
        A = poly.add(
            F,
            poly.mul(F, u.A, v.A),
            poly.mul(F, poly.mul(F, u.B, v.B), self.f),
        )
        B = poly.add(F, poly.mul(F, u.A, v.B), poly.mul(F, u.B, v.A))
        return self._make(A, B, poly.mul(F, u.D, v.D))

    def inv(self, u):
        # (A + B y)^(-1) = (A - B y)/(A^2 - B^2 f); nonzero since f is not a square
        F = self.field
        N = poly.sub(
            F,
            poly.mul(F, u.A, u.A),
            poly.mul(F, poly.mul(F, u.B, u.B), self.f),
        )
        if poly.is_zero(N):
            raise DivisionByZero("inversion of zero in the function field")
        return self._make(
            poly.mul(F, u.A, u.D), poly.neg(F, poly.mul(F, u.B, u.D)), N
        )

    def div(self, u, v):
        return self.mul(u, self.inv(v))

    def pow(self, u, n: int):
        if n < 0:
            return self.inv(self.pow(u, -n))
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, u)
            u = self.mul(u, u)
            n >>= 1
        return r

    # -- the canonical derivation d ----------------------------------------
    def d_coefficient(self, u) -> "FunctionFieldElement":
        """g such that du = g dx, via the quotient rule and dy = f'/(2y) dx."""
        F = self.field
        Dp = poly.derivative(F, u.D)
        DD = poly.mul(F, u.D, u.D)
        # d(A/D) and the dx-part of d(B/D) y
        ratA = self._make(
            poly.sub(F, poly.mul(F, poly.derivative(F, u.A), u.D), poly.mul(F, u.A, Dp)),
            (),
            DD,
        )
        ratB = self._make(
            (),
            poly.sub(F, poly.mul(F, poly.derivative(F, u.B), u.D), poly.mul(F, u.B, Dp)),
            DD,
        )
        # (B/D) dy = (B/D) f'/(2y) dx = B f' y / (2 D f) dx
        chain = self._make(
            (),
            poly.scale(F, poly.mul(F, u.B, self.fprime), self._half),
            poly.mul(F, u.D, self.f),
        )
        return self.add(self.add(ratA, ratB), chain)

    # -- global regular differentials ---------------------------------------
    def basis_forms(self):
        """The basis (dx/y, x dx/y) of the global regular differentials."""
        inv_y = self.inv(self.y())
        return (
            Differential(self, inv_y),
            Differential(self, self.mul(self.x(), inv_y)),
        )

    def global_form(self, a, b) -> "Differential":
        """(a + b x) dx / y for raw field values a, b."""
        g = self.mul(self.from_poly(poly.normalize(self.field, (a, b))), self.inv(self.y()))
        return Differential(self, g)

    def describe(self) -> dict:
        desc = self.field.describe()
        desc["f"] = [_raw_to_jsonable(c) for c in _padded(self.field, self.f, 6)]
        return desc

    def __repr__(self):
        return f"Curve({self.field!r}, f={self.f})"

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and other.field == self.field
            and other.f == self.f
        )

    def __hash__(self):
        return hash(("Curve", self.field, self.f))


class FunctionFieldElement:
    """(A + B y) / D in normal form.  Immutable; operators delegate to the curve."""

    __slots__ = ("curve", "A", "B", "D")

    def __init__(self, curve: Curve, A, B, D):
        self.curve = curve
        self.A = A
        self.B = B
        self.D = D

    def is_zero(self) -> bool:
        return not self.A and not self.B

    def is_constant(self) -> bool:
        return not self.B and len(self.A) <= 1 and len(self.D) == 1

    def constant_value(self):
        """The raw field value, if this element is a constant."""
        if not self.is_constant():
            raise RangeError("element is not constant")
        return self.A[0] if self.A else self.curve.field.zero()

    def inverse(self) -> "FunctionFieldElement":
        return self.curve.inv(self)

    def deriv(self, theta: "Derivation") -> "FunctionFieldElement":
        return theta.apply(self)

    def max_degree(self) -> int:
        return max(poly.degree(self.A), poly.degree(self.B), poly.degree(self.D))

    def __add__(self, other):
        return self.curve.add(self, _coerce(self.curve, other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.curve.sub(self, _coerce(self.curve, other))

    def __rsub__(self, other):
        return self.curve.sub(_coerce(self.curve, other), self)

    def __neg__(self):
        return self.curve.neg(self)

    def __mul__(self, other):
        return self.curve.mul(self, _coerce(self.curve, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.curve.div(self, _coerce(self.curve, other))

    def __rtruediv__(self, other):
        return self.curve.div(_coerce(self.curve, other), self)

    def __pow__(self, n: int):
        return self.curve.pow(self, n)

    def __eq__(self, other):
        if not isinstance(other, FunctionFieldElement):
            return NotImplemented
        return self.curve == other.curve and (
            self.A == other.A and self.B == other.B and self.D == other.D
        )

    def __hash__(self):
        return hash((self.A, self.B, self.D))

    def __repr__(self):
        return f"FFE(A={self.A}, B={self.B}, D={self.D})"


def _coerce(curve: Curve, v):
    if isinstance(v, FunctionFieldElement):
        return v
    if isinstance(v, int):
        return curve.constant(curve.field.from_int(v))
    raise RangeError(f"cannot interpret {v!r} in the function field")


class Differential:
    """A rational differential g dx on the affine chart."""

    __slots__ = ("curve", "g")

    def __init__(self, curve: Curve, g: FunctionFieldElement):
        self.curve = curve
        self.g = g

    def is_zero(self) -> bool:
        return self.g.is_zero()

    def __add__(self, other: "Differential") -> "Differential":
        return Differential(self.curve, self.g + other.g)

    def __sub__(self, other: "Differential") -> "Differential":
        return Differential(self.curve, self.g - other.g)

    def __neg__(self) -> "Differential":
        return Differential(self.curve, -self.g)

    def scaled(self, u) -> "Differential":
        """K-scaling u * omega."""
        return Differential(self.curve, self.g * _coerce(self.curve, u))

    def ratio(self, other: "Differential") -> FunctionFieldElement:
        """self / other as an element of K (other nonzero)."""
        if other.is_zero():
            raise ZeroDifferential("ratio by the zero differential")
        return self.g / other.g

    def __eq__(self, other):
        if not isinstance(other, Differential):
            return NotImplemented
        return self.curve == other.curve and self.g == other.g

    def __hash__(self):
        return hash(("dx", self.g))

    def __repr__(self):
        return f"Differential({self.g!r} dx)"


class Derivation:
    """A derivation of K determined by its value on x."""

    __slots__ = ("curve", "value_on_x")

    def __init__(self, curve: Curve, value_on_x: FunctionFieldElement):
        self.curve = curve
        self.value_on_x = value_on_x

    def apply(self, u: FunctionFieldElement) -> FunctionFieldElement:
        return self.curve.mul(self.curve.d_coefficient(u), self.value_on_x)

    def apply_n(self, u: FunctionFieldElement, n: int) -> FunctionFieldElement:
        if n < 0:
            raise RangeError("derivation iterate needs n >= 0")
        for _ in range(n):
            u = self.apply(u)
        return u

    def __repr__(self):
        return f"Derivation(theta(x)={self.value_on_x!r})"


# ---------------------------------------------------------------------------
# module-level operations (the public surface)
# ---------------------------------------------------------------------------

def make_curve(field, f_coeffs, degree_cap: int | None = None) -> Curve:
    """Validate and build a curve; raises EvenCharacteristic / DegreeNotFive /
    NotSquarefree on bad input."""
    return Curve(field, f_coeffs, degree_cap)


def make_curve_from_ints(field, ints, degree_cap: int | None = None) -> Curve:
    return Curve(field, poly.from_ints(field, ints), degree_cap)


def k_arith(u: FunctionFieldElement, v: FunctionFieldElement, op: str) -> FunctionFieldElement:
    cv = u.curve
    try:
        fn = {"add": cv.add, "sub": cv.sub, "mul": cv.mul, "div": cv.div}[op]
    except KeyError:
        raise RangeError(f"unknown operation {op!r}") from None
    return fn(u, v)


def canonical_d(u: FunctionFieldElement) -> Differential:
    """du as a differential; kills p-th powers."""
    return Differential(u.curve, u.curve.d_coefficient(u))


def dual_derivation(omega: Differential) -> Derivation:
    """The derivation theta with <omega, theta> = 1, i.e. theta(x) = 1/g."""
    if omega.is_zero():
        raise ZeroDifferential("the zero differential has no dual derivation")
    return Derivation(omega.curve, omega.g.inverse())


def pair(omega: Differential, theta: Derivation) -> FunctionFieldElement:
    """<g dx, theta> = g * theta(x); K-bilinear."""
    return omega.curve.mul(omega.g, theta.value_on_x)


def iterate_derivation(theta: Derivation, u: FunctionFieldElement, n: int) -> FunctionFieldElement:
    return theta.apply_n(u, n)


def hyperelliptic_involution(v):
    """y -> -y on elements; g dx -> involution(g) dx on differentials."""
    if isinstance(v, Differential):
        return Differential(v.curve, hyperelliptic_involution(v.g))
    if isinstance(v, FunctionFieldElement):
        return FunctionFieldElement(v.curve, v.A, poly.neg(v.curve.field, v.B), v.D)
    raise RangeError("involution acts on elements and differentials")


# ---------------------------------------------------------------------------
# catalog interchange: {"p": int, "ext": optional modulus coeffs, "f": [c0..c5]}
# ---------------------------------------------------------------------------

def curve_from_spec(spec: dict, degree_cap: int | None = None) -> Curve:
    """Build a curve from its catalog record."""
    if "p" not in spec or "f" not in spec:
        raise RangeError("curve record needs at least 'p' and 'f'")
    p = spec["p"]
    ext = spec.get("ext")
    field = make_field(p) if not ext else ExtField(p, tuple(ext))
    f = spec["f"]
    if len(f) != 6:
        raise DegreeNotFive("'f' must list the six coefficients c0..c5")
    if isinstance(field, PrimeField):
        coeffs = [field.from_int(c) for c in f]
    else:
        coeffs = [
            field.from_int(c) if isinstance(c, int) else field.from_coeffs(c)
            for c in f
        ]
    return Curve(field, coeffs, degree_cap)


def curve_spec(curve: Curve) -> dict:
    """The catalog record for a curve (inverse of curve_from_spec)."""
    spec = {"p": curve.p, "f": [_raw_to_jsonable(c) for c in _padded(curve.field, curve.f, 6)]}
    if isinstance(curve.field, ExtField):
        spec["ext"] = list(curve.field.modulus)
    return spec


def curve_id(curve: Curve) -> str:
    """Canonical hash of (p, k, modulus, f); stable across runs."""
    field = curve.field
    key = {
        "p": curve.p,
        "k": getattr(field, "k", 1),
        "modulus": list(getattr(field, "modulus", [])),
        "f": [_raw_to_jsonable(c) for c in _padded(field, curve.f, 6)],
    }
    blob = json.dumps(key, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def random_curve(field, rng, degree_cap: int | None = None) -> Curve:
    """Rejection-sample a monic squarefree quintic; deterministic given rng state."""
    while True:
        coeffs = [field.random(rng) for _ in range(5)] + [field.one()]
        try:
            return Curve(field, coeffs, degree_cap)
        except NotSquarefree:
            continue


def _padded(F, a, n):
    return list(a) + [F.zero()] * (n - len(a))


def _raw_to_jsonable(c):
    return list(c) if isinstance(c, tuple) else c
