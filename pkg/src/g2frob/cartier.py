"""Cartier-Manin matrix, ordinarity, and the flat global differential forms.

The Cartier-Manin matrix of y^2 = f(x) is read off the expansion of
f^((p-1)/2): A[i][j] is the coefficient of x^(i*p - j), indices i, j in
{1, 2}.  The curve is ordinary exactly when det A != 0, and the p-rank is
the stable rank of the associated semilinear operator.

A global form omega = (a + b x) dx/y defines the connection d + omega on the
structure sheaf; its p-curvature against the standard chart (omega0 = dx/y,
theta0 dual) vanishes on an F_p-subspace of the (a, b) plane.  Over the
curve's own coefficient field that subspace is the fixed space of A:

    |{(a,b) : psi = 0}| = #ker(A - I)  over F_p,

and more generally the solutions of A v = v^(p).  Over a large enough
extension the flat forms fill out p^(p-rank) elements: p^2 for an ordinary
genus-2 curve.  `stabilization_degree` computes how large is large enough.

Both enumeration methods are exposed: `brute` scans every candidate pair and
evaluates the closed-form p-curvature; `semilinear` solves the equivalent
F_p-linear system.  They agree wherever both run; brute is the normative
oracle, the solver is the one that scales to big extensions.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import poly
from .errors import FieldTooLargeForBrute, NotFlat, RangeError
from .exactnum import PrimeField, make_field
from .funcfield import (
    Curve,
    Differential,
    FunctionFieldElement,
    curve_id,
    dual_derivation,
)
from .linalg import enumerate_span_mod_p, kernel_basis_mod_p
from .pcurvature import ConnectionMatrix, chart_constant, p_curvature_rank1

_BRUTE_FIELD_LIMIT = 1 << 14


@dataclass(frozen=True)
class CartierManinMatrix:
    """2x2 matrix over the curve's field; entries are raw field values."""

    curve_id: str
    matrix: tuple  # ((a11, a12), (a21, a22))
    field: object

    def det(self):
        F, m = self.field, self.matrix
        return F.sub(F.mul(m[0][0], m[1][1]), F.mul(m[0][1], m[1][0]))

    def is_invertible(self) -> bool:
        return not self.field.is_zero(self.det())

    def to_jsonable(self):
        return [[_jsonable(e) for e in row] for row in self.matrix]


def cartier_manin(curve: Curve) -> CartierManinMatrix:
    """Expand f^((p-1)/2) and read off the four coefficients."""
    F = curve.field
    g = poly.pow(F, curve.f, (curve.p - 1) // 2)
    m = tuple(
        tuple(poly.coefficient(F, g, i * curve.p - j) for j in (1, 2))
        for i in (1, 2)
    )
    return CartierManinMatrix(curve_id=curve_id(curve), matrix=m, field=F)


def is_ordinary(curve: Curve) -> bool:
    return cartier_manin(curve).is_invertible()


def p_rank(curve: Curve) -> int:
    """Stable rank of the semilinear Cartier operator (0, 1 or 2)."""
    F = curve.field
    A = cartier_manin(curve).matrix
    # N picks up the twisted factors A^(Frob^j) A^(Frob^(j-1)) ... A; the
    # image chain of a rank <= 2 operator stabilizes well within these steps
    N = A
    Aj = A
    for _ in range(max(4, 2 * F.degree + 2)):
        Aj = tuple(tuple(F.frobenius(e) for e in row) for row in Aj)
        N = _mat2_mul(F, Aj, N)
    return _rank2(F, N)


def _mat2_mul(F, X, Y):
    return tuple(
        tuple(
            F.add(F.mul(X[i][0], Y[0][j]), F.mul(X[i][1], Y[1][j]))
            for j in range(2)
        )
        for i in range(2)
    )


def _rank2(F, M) -> int:
    if all(F.is_zero(e) for row in M for e in row):
        return 0
    det = F.sub(F.mul(M[0][0], M[1][1]), F.mul(M[0][1], M[1][0]))
    return 2 if not F.is_zero(det) else 1


@dataclass(frozen=True)
class TorsionSet:
    """Global forms (a + b x) dx/y with vanishing p-curvature, as (a, b) pairs.

    Sorted deterministically; always contains (0, 0); an F_p-subspace, so its
    size is a power of p.
    """

    curve_id: str
    forms: tuple  # tuple of (a_raw, b_raw) pairs
    method: str

    def __len__(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __contains__(self, ab):
        return tuple(ab) in self.forms

    def dimension(self, p: int) -> int:
        n, d = len(self.forms), 0
        while n > 1:
            n //= p
            d += 1
        return d

    def nonzero(self, field):
        return tuple(
            ab for ab in self.forms if not (field.is_zero(ab[0]) and field.is_zero(ab[1]))
        )

    def differentials(self, curve: Curve):
        return tuple(curve.global_form(a, b) for a, b in self.forms)

    def is_subspace(self, field) -> bool:
        """Closure under addition and F_p-scaling, checked exhaustively."""
        S = set(self.forms)
        if (field.zero(), field.zero()) not in S:
            return False
        for a1, b1 in S:
            for a2, b2 in S:
                if (field.add(a1, a2), field.add(b1, b2)) not in S:
                    return False
            for s in range(field.char):
                sv = field.from_int(s)
                if (field.mul(sv, a1), field.mul(sv, b1)) not in S:
                    return False
        return True

    def to_jsonable(self):
        return [[_jsonable(a), _jsonable(b)] for a, b in self.forms]


def _flat_form_data(curve: Curve):
    """Shared precomputation: x^p, theta0^(p-1)(x), <omega0, theta0^p>."""
    omega0 = curve.basis_forms()[0]
    theta0 = dual_derivation(omega0)
    xe = curve.x()
    xp = curve.pow(xe, curve.p)
    h = theta0.apply_n(xe, curve.p - 1)
    c0 = chart_constant(omega0, theta0)
    return omega0, theta0, xp, h, c0


def _psi_of_pair(curve: Curve, a, b, xp, h, c0) -> FunctionFieldElement:
    """psi(d + (a+bx)dx/y) = T^p + theta0^(p-1)(T) - c0 T for T = a + b x.

    Uses T^p = a^p + b^p x^p and theta0-linearity over constants; equals the
    closed form evaluated directly (spot-welded against p_curvature_rank1 in
    enumerate_p_torsion).
    """
    F = curve.field
    ca, cb = curve.constant(a), curve.constant(b)
    cap = curve.constant(F.frobenius(a))
    cbp = curve.constant(F.frobenius(b))
    T = ca + cb * curve.x()
    return cap + cbp * xp + cb * h - c0 * T


def enumerate_p_torsion(curve: Curve, method: str = "brute") -> TorsionSet:
    """All (a, b) with vanishing p-curvature of d + (a+bx)dx/y.

    `brute` scans all |field|^2 candidates (guarded); `semilinear` solves the
    equivalent F_p-linear system and returns the identical set.
    """
    if method == "brute":
        forms = _torsion_brute(curve)
    elif method == "semilinear":
        forms = _torsion_semilinear(curve)
    else:
        raise RangeError(f"unknown method {method!r}")
    return TorsionSet(curve_id=curve_id(curve), forms=forms, method=method)


def _torsion_brute(curve: Curve):
    F = curve.field
    if F.size > _BRUTE_FIELD_LIMIT:
        raise FieldTooLargeForBrute(
            f"|field| = {F.size} exceeds the brute-force guard {_BRUTE_FIELD_LIMIT}"
        )
    omega0, theta0, xp, h, c0 = _flat_form_data(curve)
    found = []
    spot = 0
    for a in F.elements():
        for b in F.elements():
            psi = _psi_of_pair(curve, a, b, xp, h, c0)
            if psi.is_zero():
                found.append((a, b))
                if spot < 4:  # weld the factored evaluation to the closed form
                    T = curve.constant(a) + curve.constant(b) * curve.x()
                    assert p_curvature_rank1(T, theta0, omega0).is_zero()
                    spot += 1
    return _sort_forms(found)


def _torsion_semilinear(curve: Curve):
    F = curve.field
    omega0, theta0, xp, h, c0 = _flat_form_data(curve)
    k = F.degree
    if isinstance(F, PrimeField):
        unknowns = [(F.one(), F.zero()), (F.zero(), F.one())]
    else:
        unknowns = [(F.monomial(i), F.zero()) for i in range(k)] + [
            (F.zero(), F.monomial(i)) for i in range(k)
        ]
    images = [_psi_of_pair(curve, a, b, xp, h, c0) for a, b in unknowns]
    rows = _k_elements_to_fp_rows(curve, images)
    basis = kernel_basis_mod_p(rows, len(unknowns), curve.p)
    found = []
    for v in enumerate_span_mod_p(basis, len(unknowns), curve.p):
        a, b = F.zero(), F.zero()
        for coeff, (ua, ub) in zip(v, unknowns):
            if coeff:
                s = F.from_int(coeff)
                a = F.add(a, F.mul(s, ua))
                b = F.add(b, F.mul(s, ub))
        found.append((a, b))
    return _sort_forms(found)


def _k_elements_to_fp_rows(curve: Curve, els):
    """Express K elements over a common denominator and flatten the numerator
    coefficients into F_p rows: column j of the output is els[j]."""
    F = curve.field
    common = poly.one(F)
    for e in els:
        g = poly.gcd(F, common, e.D)
        common = poly.mul(F, common, poly.divmod_(F, e.D, g)[0])
    numerators = []
    for e in els:
        scaled = e * curve.from_poly(common)
        assert poly.degree(scaled.D) == 0
        numerators.append((scaled.A, scaled.B))
    max_a = max((len(n[0]) for n in numerators), default=0)
    max_b = max((len(n[1]) for n in numerators), default=0)
    k = F.degree
    nrows = (max_a + max_b) * k
    rows = [[0] * len(els) for _ in range(nrows)]
    for j, (A, B) in enumerate(numerators):
        for i in range(max_a):
            c = poly.coefficient(F, A, i)
            for comp in range(k):
                rows[i * k + comp][j] = _component(c, comp)
        for i in range(max_b):
            c = poly.coefficient(F, B, i)
            for comp in range(k):
                rows[(max_a + i) * k + comp][j] = _component(c, comp)
    return rows


def _component(raw, i):
    return raw[i] if isinstance(raw, tuple) else (raw if i == 0 else 0)


def _sort_forms(found):
    return tuple(sorted(found, key=lambda ab: (_sort_key(ab[0]), _sort_key(ab[1]))))


def _sort_key(raw):
    return tuple(raw) if isinstance(raw, tuple) else (raw,)


def _jsonable(raw):
    return list(raw) if isinstance(raw, tuple) else raw


# ---------------------------------------------------------------------------
# expected counts over extensions, from the Cartier-Manin matrix alone
# ---------------------------------------------------------------------------

def rational_flat_dimension(curve: Curve, k: int = 1) -> int:
    """F_p-dimension of the flat forms rational over F_{p^k}.

    Solves A v = v^(p) linearized over F_p.  Requires a prime-field curve;
    the answer is independent of the modulus used to present F_{p^k}.
    """
    if not isinstance(curve.field, PrimeField):
        raise RangeError("rational_flat_dimension expects a prime-field curve")
    p = curve.p
    A = cartier_manin(curve).matrix
    if k == 1:
        rows = [
            [(A[0][0] - 1) % p, A[0][1] % p],
            [A[1][0] % p, (A[1][1] - 1) % p],
        ]
        return len(kernel_basis_mod_p(rows, 2, p))
    ext = make_field(p, k)
    frob = ext.frobenius_matrix()
    # unknowns: (v1 coords, v2 coords); equations: A v - v^(p) = 0 componentwise
    rows = []
    for out_block in range(2):
        for comp in range(k):
            row = [0] * (2 * k)
            for in_block in range(2):
                a = A[out_block][in_block] % p
                if a:
                    for i in range(k):
                        row[in_block * k + i] = (row[in_block * k + i] + a * (1 if i == comp else 0)) % p
            for i in range(k):
                row[out_block * k + i] = (row[out_block * k + i] - frob[comp][i]) % p
            rows.append(row)
    return len(kernel_basis_mod_p(rows, 2 * k, p))


def stabilization_degree(curve: Curve, k_max: int = 20000) -> int:
    """Smallest k with all p^(p-rank) geometric flat forms rational over F_{p^k}.

    A geometric solution v of A v = v^(p) satisfies v^(p^k) = A^k v, so the
    solutions live in the stable image of A and become rational exactly when
    A^k is the identity there.  The candidate order is verified against the
    linearized fixed-space computation.
    """
    if not isinstance(curve.field, PrimeField):
        raise RangeError("stabilization_degree expects a prime-field curve")
    F = curve.field
    rank = p_rank(curve)
    if rank == 0:
        return 1
    A = cartier_manin(curve).matrix
    if rank == 2:
        k = _matrix_order(F, A, k_max)
    else:
        # A acts on its stable line by a nonzero scalar mu; k = ord(mu)
        A2 = _mat2_mul(F, A, A)
        col = 0 if not (F.is_zero(A2[0][0]) and F.is_zero(A2[1][0])) else 1
        w = (A2[0][col], A2[1][col])
        Aw = (
            F.add(F.mul(A[0][0], w[0]), F.mul(A[0][1], w[1])),
            F.add(F.mul(A[1][0], w[0]), F.mul(A[1][1], w[1])),
        )
        i = 0 if not F.is_zero(w[0]) else 1
        mu = F.div(Aw[i], w[i])
        k, acc = 1, mu
        while not F.eq(acc, F.one()):
            acc = F.mul(acc, mu)
            k += 1
    if rational_flat_dimension(curve, k) != rank:
        raise RangeError("stabilization order verification failed")
    return k


def _matrix_order(F, A, k_max: int) -> int:
    ident = ((F.one(), F.zero()), (F.zero(), F.one()))
    acc = A
    for k in range(1, k_max + 1):
        if acc == ident:
            return k
        acc = _mat2_mul(F, A, acc)
    raise RangeError(f"matrix order exceeds {k_max}; is the curve ordinary?")


# ---------------------------------------------------------------------------
# the canonical split connection attached to a flat form
# ---------------------------------------------------------------------------

def canonical_connection(omega_L: Differential, chart: str = "omega_L") -> ConnectionMatrix:
    """diag(d, d + omega_L) as a rank-2 connection matrix.

    With chart omega_L itself the matrix is diag(0, 1); with the standard
    chart omega0 = dx/y it is diag(0, <omega_L, theta0>).  Raises NotFlat if
    d + omega_L has nonvanishing p-curvature.  omega_L = 0 gives the zero
    matrix on the standard chart.
    """
    curve = omega_L.curve
    omega0 = curve.basis_forms()[0]
    theta0 = dual_derivation(omega0)
    T = curve.mul(omega_L.g, theta0.value_on_x)  # <omega_L, theta0>
    if not p_curvature_rank1(T, theta0, omega0).is_zero():
        raise NotFlat("d + omega_L has nonzero p-curvature")
    z = curve.zero()
    if omega_L.is_zero():
        return ConnectionMatrix(curve, ((z, z), (z, z)), omega0)
    if chart == "omega_L":
        return ConnectionMatrix(curve, ((z, z), (z, curve.one())), omega_L)
    if chart == "omega0":
        return ConnectionMatrix(curve, ((z, z), (z, T)), omega0)
    raise RangeError(f"unknown chart {chart!r}")
