"""Executable checks for the flat-deformation lemmas on a certified curve.

Everything here is phrased as a *report*, not an assertion: the statements
being checked hold for sufficiently general curves, and a small-field curve
is allowed to be special.  A report carries its witness data, so a violated
status can be re-verified independently by re-running the stated computation
on the witness (see `recheck`).

The three checks:

* check_two_sums: for a nonzero flat form omega_L with dual derivation
  theta_L, and an independent global form omega with ratio x = omega/omega_L,
  neither
      S1 = sum_(k=1..p-1) theta_L^k(x)
  nor
      S2 = sum_(k=1..p-1) C(p-1, k) theta_L^k(x)
  vanishes on a general curve.

* check_offdiag_closed_forms: the engine's p-curvature of the two triangular
  connections [[0, x], [0, 1]] and [[1, x], [0, 0]] (chart omega_L) must be
  [[0, S1], [0, 0]] and [[0, S2], [0, 0]] respectively.

* rigidity_scan: over the dual numbers, the traceless first-order
  deformations T = [[w11, w12], [w21, -w11]] (entries global forms) of the
  split connection diag(d, d + omega_L) with vanishing p-curvature should be
  exactly the conjugation-trivial family {(0, c1 omega_L, c2 omega_L)}.
  Along the way the scan verifies, for every deformation, the scalar-shift
  identity
      psi(nabla_eps) = psi(nabla'_eps) + eps (f11 - theta_L^(p-1)(f11)) I
  where nabla'_eps drops the diagonal part (replacing [[f11, .], [., -f11]]
  by [[2 f11, .], [., 0]]); the eps^p = 0 collapse makes the p-th power of
  f11 drop out of this identity.  It also cross-checks the closed forms of
  the auxiliary recursion R0^(n+1) = (theta_L + J) R0^(n) + R J on sampled
  deformations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import comb

from .errors import FieldTooLargeForBrute, NotTorsion, RangeError
from .funcfield import (
    Curve,
    Derivation,
    Differential,
    FunctionFieldElement,
    curve_id,
    dual_derivation,
)
from .linalg import enumerate_span_mod_p, kernel_basis_mod_p
from .pcurvature import (
    ConnectionMatrix,
    DualFunctionElement,
    p_curvature_matrix,
    p_curvature_rank1,
)

_BRUTE_TRIPLE_LIMIT = 1 << 24


@dataclass(frozen=True)
class LemmaReport:
    curve_id: str
    lemma_id: str
    status: str  # "holds" | "violated" | "inapplicable"
    witness: dict
    timing: float

    def to_jsonable(self):
        return {
            "curveId": self.curve_id,
            "lemmaId": self.lemma_id,
            "status": self.status,
            "witness": self.witness,
            "timing": self.timing,
        }


@dataclass(frozen=True)
class RigiditySolutionSet:
    curve_id: str
    solutions: tuple  # sorted triples ((a,b), (a,b), (a,b)) of raw pairs
    is_trivial_family: bool
    mode: str

    def __len__(self):
        return len(self.solutions)

    def to_jsonable(self):
        return [
            [[_jsonable(a), _jsonable(b)] for a, b in triple]
            for triple in self.solutions
        ]


def _as_global_form(curve: Curve, omega):
    if isinstance(omega, Differential):
        return omega, None
    a, b = omega
    if isinstance(a, int):
        a, b = curve.field.from_int(a), curve.field.from_int(b)
    return curve.global_form(a, b), (a, b)


def require_torsion(curve: Curve, omega_L: Differential) -> Derivation:
    """Check omega_L is a nonzero flat form; return its dual derivation."""
    if omega_L.is_zero():
        raise NotTorsion("omega_L must be nonzero")
    omega0 = curve.basis_forms()[0]
    theta0 = dual_derivation(omega0)
    T = curve.mul(omega_L.g, theta0.value_on_x)
    if not p_curvature_rank1(T, theta0, omega0).is_zero():
        raise NotTorsion("d + omega_L does not have vanishing p-curvature")
    return dual_derivation(omega_L)


def two_sums(curve: Curve, theta_L: Derivation, x: FunctionFieldElement):
    """S1 = sum theta_L^k(x), S2 = sum C(p-1,k) theta_L^k(x), k = 1..p-1."""
    p = curve.p
    S1, S2 = curve.zero(), curve.zero()
    cur = x
    for k in range(1, p):
        cur = theta_L.apply(cur)
        S1 = S1 + cur
        S2 = S2 + curve.constant(curve.field.from_int(comb(p - 1, k))) * cur
    return S1, S2


def check_two_sums(curve: Curve, omega_L, omega) -> LemmaReport:
    t0 = time.perf_counter()
    omega_L, ab_L = _as_global_form(curve, omega_L)
    omega, ab = _as_global_form(curve, omega)
    theta_L = require_torsion(curve, omega_L)
    x = omega.ratio(omega_L)
    witness = {
        "omegaL": _form_witness(ab_L, omega_L),
        "omega": _form_witness(ab, omega),
        "x": _ffe_witness(x),
    }
    if x.is_constant():
        S1 = S2 = curve.zero()
        status = "inapplicable"
    else:
        S1, S2 = two_sums(curve, theta_L, x)
        status = "holds" if not S1.is_zero() and not S2.is_zero() else "violated"
    witness["S1"] = _ffe_witness(S1)
    witness["S2"] = _ffe_witness(S2)
    return LemmaReport(
        curve_id=curve_id(curve),
        lemma_id="two-sums-nonvanishing",
        status=status,
        witness=witness,
        timing=time.perf_counter() - t0,
    )


def check_offdiag_closed_forms(curve: Curve, omega_L, omega) -> LemmaReport:
    """Engine p-curvature of the triangular connections vs the two sums."""
    t0 = time.perf_counter()
    omega_L, ab_L = _as_global_form(curve, omega_L)
    omega, ab = _as_global_form(curve, omega)
    theta_L = require_torsion(curve, omega_L)
    x = omega.ratio(omega_L)
    S1, S2 = two_sums(curve, theta_L, x)
    z, one = curve.zero(), curve.one()
    psi_upper = p_curvature_matrix(
        ConnectionMatrix(curve, ((z, x), (z, one)), omega_L), theta_L
    )
    psi_lower = p_curvature_matrix(
        ConnectionMatrix(curve, ((one, x), (z, z)), omega_L), theta_L
    )
    ok = (
        psi_upper[0, 1] == S1
        and psi_lower[0, 1] == S2
        and all(
            psi[i, j].is_zero()
            for psi in (psi_upper, psi_lower)
            for (i, j) in ((0, 0), (1, 0), (1, 1))
        )
    )
    return LemmaReport(
        curve_id=curve_id(curve),
        lemma_id="offdiag-closed-forms",
        status="holds" if ok else "violated",
        witness={
            "omegaL": _form_witness(ab_L, omega_L),
            "omega": _form_witness(ab, omega),
            "S1": _ffe_witness(S1),
            "S2": _ffe_witness(S2),
            "psiUpperOffdiag": _ffe_witness(psi_upper[0, 1]),
            "psiLowerOffdiag": _ffe_witness(psi_lower[0, 1]),
        },
        timing=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# rigidity of the split connection under first-order deformations
# ---------------------------------------------------------------------------

def _deformation_psi(curve: Curve, theta_L: Derivation, chart: Differential,
                     f11, f12, f21):
    """psi of diag(0,1) + eps [[f11, f12], [f21, -f11]] against theta_L."""
    inf = DualFunctionElement.infinitesimal
    M = (
        (inf(f11), inf(f12)),
        (inf(f21), DualFunctionElement(curve.one(), -f11)),
    )
    conn = ConnectionMatrix(curve, M, chart)
    return p_curvature_matrix(conn, theta_L)


def _companion_psi(curve: Curve, theta_L: Derivation, chart: Differential,
                   f11, f12, f21):
    """psi of diag(0,1) + eps [[2 f11, f12], [f21, 0]] against theta_L."""
    two = curve.constant(curve.field.from_int(2))
    inf = DualFunctionElement.infinitesimal
    M = (
        (inf(two * f11), inf(f12)),
        (inf(f21), DualFunctionElement(curve.one(), curve.zero())),
    )
    conn = ConnectionMatrix(curve, M, chart)
    return p_curvature_matrix(conn, theta_L)


def scalar_shift_identity_holds(curve: Curve, theta_L: Derivation, psi, psi_companion,
                                f11) -> bool:
    """psi - psi_companion == eps (f11 - theta_L^(p-1)(f11)) I, exactly."""
    shift = f11 - theta_L.apply_n(f11, curve.p - 1)
    for i in range(2):
        for j in range(2):
            diff = psi[i, j] - psi_companion[i, j]
            want_body = curve.zero()
            want_slope = shift if i == j else curve.zero()
            if not (diff.body == want_body and diff.slope == want_slope):
                return False
    return True


def auxiliary_recursion_rows(curve: Curve, theta_L: Derivation, f11, f12, f21, n: int):
    """R0^(m) for m = 1..n, where R0^(1) = R = [[2 f11, f12], [f21, 0]] and
    R0^(m+1) = J R0^(m) + theta_L(R0^(m)) + R J with J = diag(0, 1).

    J M keeps only the second row of M; M J keeps only the second column, so
    R J contributes f12 in the top-right corner and nothing else.
    """
    two = curve.constant(curve.field.from_int(2))
    R = ((two * f11, f12), (f21, curve.zero()))
    rows = [R]
    cur = R
    for _ in range(n - 1):
        cur = (
            (theta_L.apply(cur[0][0]), theta_L.apply(cur[0][1]) + f12),
            (cur[1][0] + theta_L.apply(cur[1][0]), cur[1][1] + theta_L.apply(cur[1][1])),
        )
        rows.append(cur)
    return rows


def closed_form_rows(curve: Curve, theta_L: Derivation, f11, f12, f21, n: int):
    """The predicted R0^(m): [[2 theta^(m-1) f11, sum_(k<m) theta^k f12],
    [sum_(k<m) C(m-1,k) theta^k f21, 0]]."""
    F = curve.field
    two = curve.constant(F.from_int(2))
    out = []
    t11 = f11
    iter12 = [f12]
    iter21 = [f21]
    for m in range(1, n + 1):
        if m > 1:
            t11 = theta_L.apply(t11)
            iter12.append(theta_L.apply(iter12[-1]))
            iter21.append(theta_L.apply(iter21[-1]))
        s12 = curve.zero()
        for k in range(m):
            s12 = s12 + iter12[k]
        s21 = curve.zero()
        for k in range(m):
            c = comb(m - 1, k) % curve.p
            if c:
                s21 = s21 + curve.constant(F.from_int(c)) * iter21[k]
        out.append(((two * t11, s12), (s21, curve.zero())))
    return out


def rigidity_scan(
    curve: Curve,
    omega_L,
    mode: str = "brute",
    closed_form_samples: int = 16,
):
    """Enumerate traceless first-order deformations with vanishing p-curvature.

    Returns (RigiditySolutionSet, LemmaReport).  Status is "holds" iff the
    solution set equals the conjugation-trivial family
    {(0, c1 omega_L, c2 omega_L) : c1, c2 in the field} AND the scalar-shift
    identity held for every scanned deformation (brute mode).
    """
    t0 = time.perf_counter()
    omega_L, ab_L = _as_global_form(curve, omega_L)
    theta_L = require_torsion(curve, omega_L)
    F = curve.field
    if mode == "brute":
        sols, identity_ok, identity_total, closed_ok = _rigidity_brute(
            curve, theta_L, omega_L, closed_form_samples
        )
    elif mode == "linear":
        sols = _rigidity_linear(curve, theta_L, omega_L)
        identity_ok = identity_total = 0
        closed_ok = True
    else:
        raise RangeError(f"unknown mode {mode!r}")
    family = _trivial_family(curve, ab_L, omega_L)
    is_family = sols == family
    status = "holds" if is_family and (mode == "linear" or (identity_ok == identity_total and closed_ok)) else "violated"
    solset = RigiditySolutionSet(
        curve_id=curve_id(curve),
        solutions=sols,
        is_trivial_family=is_family,
        mode=mode,
    )
    report = LemmaReport(
        curve_id=curve_id(curve),
        lemma_id="split-connection-rigidity",
        status=status,
        witness={
            "omegaL": _form_witness(ab_L, omega_L),
            "solutionCount": len(sols),
            "familyCount": len(family),
            "isTrivialFamily": is_family,
            "scalarShiftIdentity": {"checked": identity_total, "held": identity_ok},
            "closedFormsSampled": closed_ok,
            "mode": mode,
        },
        timing=time.perf_counter() - t0,
    )
    return solset, report


def _global_pairs(curve: Curve):
    F = curve.field
    return [(a, b) for a in F.elements() for b in F.elements()]


def _rigidity_brute(curve, theta_L, omega_L, closed_form_samples):
    F = curve.field
    pairs = _global_pairs(curve)
    if len(pairs) ** 3 > _BRUTE_TRIPLE_LIMIT:
        raise FieldTooLargeForBrute(
            f"{len(pairs)}^3 deformation triples exceed the brute guard"
        )
    ratios = {
        ab: curve.global_form(*ab).ratio(omega_L) for ab in pairs
    }
    sols = []
    identity_ok = identity_total = 0
    closed_ok = True
    sample_step = max(1, len(pairs) ** 3 // max(closed_form_samples, 1))
    idx = 0
    for ab11 in pairs:
        for ab12 in pairs:
            for ab21 in pairs:
                f11, f12, f21 = ratios[ab11], ratios[ab12], ratios[ab21]
                psi = _deformation_psi(curve, theta_L, omega_L, f11, f12, f21)
                if psi.is_zero():
                    sols.append((ab11, ab12, ab21))
                psi_c = _companion_psi(curve, theta_L, omega_L, f11, f12, f21)
                identity_total += 1
                if scalar_shift_identity_holds(curve, theta_L, psi, psi_c, f11):
                    identity_ok += 1
                if idx % sample_step == 0:
                    if not _closed_forms_match(curve, theta_L, psi_c, f11, f12, f21):
                        closed_ok = False
                idx += 1
    return _sort_triples(sols), identity_ok, identity_total, closed_ok


def _closed_forms_match(curve, theta_L, psi_companion, f11, f12, f21) -> bool:
    """R0-recursion == closed forms for n <= p, and the companion psi equals
    eps (R0^(p) - R)."""
    p = curve.p
    rec = auxiliary_recursion_rows(curve, theta_L, f11, f12, f21, p)
    closed = closed_form_rows(curve, theta_L, f11, f12, f21, p)
    for got, want in zip(rec, closed):
        for i in range(2):
            for j in range(2):
                if got[i][j] != want[i][j]:
                    return False
    R, Rp = rec[0], rec[-1]
    for i in range(2):
        for j in range(2):
            e = psi_companion[i, j]
            if not e.body.is_zero():
                return False
            if e.slope != Rp[i][j] - R[i][j]:
                return False
    return True


def _rigidity_linear(curve, theta_L, omega_L):
    """Kernel of the F_p-linear map (w11, w12, w21) -> psi(deformation)."""
    F = curve.field
    k = F.degree
    gens = (
        [(F.monomial(i), F.zero()) for i in range(k)]
        if k > 1
        else [(F.one(), F.zero())]
    )
    if k > 1:
        gens += [(F.zero(), F.monomial(i)) for i in range(k)]
    else:
        gens += [(F.zero(), F.one())]
    unknown_forms = []  # one (slot, a, b) unknown per basis deformation
    for slot in range(3):
        for a, b in gens:
            unknown_forms.append((slot, a, b))
    images = []
    zero = curve.zero()
    for slot, a, b in unknown_forms:
        f = curve.global_form(a, b).ratio(omega_L)
        fs = [zero, zero, zero]
        fs[slot] = f
        psi = _deformation_psi(curve, theta_L, omega_L, *fs)
        images.append(psi)
    rows = _psi_list_to_rows(curve, images)
    basis = kernel_basis_mod_p(rows, len(unknown_forms), curve.p)
    sols = []
    for v in enumerate_span_mod_p(basis, len(unknown_forms), curve.p):
        triple = []
        for slot in range(3):
            a_acc, b_acc = F.zero(), F.zero()
            for col, (s, a, b) in enumerate(unknown_forms):
                if s == slot and v[col]:
                    sc = F.from_int(v[col])
                    a_acc = F.add(a_acc, F.mul(sc, a))
                    b_acc = F.add(b_acc, F.mul(sc, b))
            triple.append((a_acc, b_acc))
        sols.append(tuple(triple))
    return _sort_triples(sols)


def _psi_list_to_rows(curve, psis):
    """Flatten dual-valued psi matrices into F_p rows (column per unknown)."""
    from .cartier import _k_elements_to_fp_rows

    els = []
    for psi in psis:
        col = []
        for i in range(2):
            for j in range(2):
                e = psi[i, j]
                col.append(e.body)
                col.append(e.slope)
        els.append(col)
    # transpose into per-entry K-element lists and stack their rows
    rows = []
    for pos in range(8):
        entry_list = [col[pos] for col in els]
        rows.extend(_k_elements_to_fp_rows(curve, entry_list))
    return rows


def _trivial_family(curve: Curve, ab_L, omega_L: Differential):
    F = curve.field
    if ab_L is None:
        # recover (a, b) from the differential: g * y must be a + b x
        gy = omega_L.g * curve.y()
        if gy.B != () or len(gy.D) != 1 or len(gy.A) > 2:
            raise RangeError("omega_L is not a global form")
        from . import poly as _poly

        a = _poly.coefficient(F, gy.A, 0)
        b = _poly.coefficient(F, gy.A, 1)
        ab_L = (a, b)
    aL, bL = ab_L
    zero = (F.zero(), F.zero())
    fam = []
    for c1 in F.elements():
        for c2 in F.elements():
            fam.append(
                (zero, (F.mul(c1, aL), F.mul(c1, bL)), (F.mul(c2, aL), F.mul(c2, bL)))
            )
    return _sort_triples(fam)


def _sort_triples(triples):
    def key(t):
        return tuple(
            (_key(a), _key(b)) for a, b in t
        )

    return tuple(sorted(set(triples), key=key))


def _key(raw):
    return tuple(raw) if isinstance(raw, tuple) else (raw,)


def _jsonable(raw):
    return list(raw) if isinstance(raw, tuple) else raw


def _ffe_witness(u: FunctionFieldElement):
    return {
        "A": [_jsonable(c) for c in u.A],
        "B": [_jsonable(c) for c in u.B],
        "D": [_jsonable(c) for c in u.D],
    }


def _form_witness(ab, omega: Differential):
    if ab is not None:
        return {"a": _jsonable(ab[0]), "b": _jsonable(ab[1])}
    return {"g": _ffe_witness(omega.g)}


def recheck(curve: Curve, report: LemmaReport) -> bool:
    """Re-run the stated computation on the report's witness; True iff the
    stored status (and the S1/S2 values, where present) reproduce exactly."""
    w = report.witness
    if report.lemma_id == "two-sums-nonvanishing":
        fresh = check_two_sums(curve, _witness_form(curve, w["omegaL"]),
                               _witness_form(curve, w["omega"]))
        return fresh.status == report.status and fresh.witness["S1"] == w["S1"] \
            and fresh.witness["S2"] == w["S2"]
    if report.lemma_id == "offdiag-closed-forms":
        fresh = check_offdiag_closed_forms(curve, _witness_form(curve, w["omegaL"]),
                                           _witness_form(curve, w["omega"]))
        return fresh.status == report.status
    if report.lemma_id == "split-connection-rigidity":
        _, fresh = rigidity_scan(curve, _witness_form(curve, w["omegaL"]),
                                 mode=w["mode"])
        return fresh.status == report.status and \
            fresh.witness["solutionCount"] == w["solutionCount"]
    raise RangeError(f"unknown lemma id {report.lemma_id!r}")


def _witness_form(curve: Curve, wf: dict):
    F = curve.field
    if "a" in wf:
        return (_unjson(F, wf["a"]), _unjson(F, wf["b"]))
    g = curve.element(
        tuple(_unjson(F, c) for c in wf["g"]["A"]),
        tuple(_unjson(F, c) for c in wf["g"]["B"]),
        tuple(_unjson(F, c) for c in wf["g"]["D"]),
    )
    return Differential(curve, g)


def _unjson(F, v):
    return tuple(v) if isinstance(v, list) else v
