"""Closed-form evaluators for the numeric invariants, in exact rationals.

These are identities, not estimates: every result is a Fraction or an int,
and the parameter domains are validated up front.  The genus-2 degree
bookkeeping ties together as

    preimageDegree = 4 p = 4 + 2 * hbarDegree = 4 + 2 * 2(p - 1),

the degree of the Kummer quartic plus twice the residual surface.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import RangeError
from .exactnum import is_prime


def _check_odd_prime(p: int):
    if not isinstance(p, int) or not is_prime(p) or p == 2:
        raise RangeError(f"p must be an odd prime, got {p}")


def _check_genus(g: int):
    if not isinstance(g, int) or g < 2:
        raise RangeError(f"genus must be an integer >= 2, got {g}")


def subbundle_slope_bound(r: int, g: int, d: int, p: int) -> Fraction:
    """Largest possible slope of a rank-r subbundle of the pushforward of a
    degree-d line bundle under Frobenius: ((r-1)(g-1) + d) / p."""
    _check_odd_prime(p)
    _check_genus(g)
    if not 1 <= r <= p:
        raise RangeError(f"need 1 <= r <= p, got r={r}")
    return Fraction((r - 1) * (g - 1) + d, p)


def quotient_slope_bound(r: int, g: int, d: int, p: int) -> Fraction:
    """Smallest possible slope of a rank-r quotient sheaf of the same
    pushforward: ((2p - r - 1)(g-1) + d) / p."""
    _check_odd_prime(p)
    _check_genus(g)
    if not 1 <= r <= p:
        raise RangeError(f"need 1 <= r <= p, got r={r}")
    return Fraction((2 * p - r - 1) * (g - 1) + d, p)


# the operation names used by the CLI and older call sites
mu_r = subbundle_slope_bound
nu_r = quotient_slope_bound


def nagata_segre(r: int, delta: int, n: int, g: int):
    """The Nagata-Segre subbundle bound for a rank-r degree-delta bundle.

    Returns (epsilon, bound) where epsilon is the unique integer in
    [0, r-1] with epsilon + n(r-n)(g-1) = n delta (mod r), and
    bound = delta/r - ((r-n)/r)(g-1) - epsilon/(r n) is the guaranteed
    slope of some rank-n subbundle.
    """
    _check_genus(g)
    if r < 2 or not 1 <= n <= r - 1:
        raise RangeError(f"need 1 <= n <= r-1, got n={n}, r={r}")
    eps = (n * delta - n * (r - n) * (g - 1)) % r
    bound = Fraction(delta, r) - Fraction((r - n) * (g - 1), r) - Fraction(eps, r * n)
    return eps, bound


def counts(p: int, g: int = 2) -> dict:
    """Every closed-form count, keyed the way the CLI reports them.

    The four degree counts (base locus, generalized Verschiebung, residual
    surface, preimage of the Kummer) are genus-2 statements and are only
    emitted when g == 2; tauInvariantCount and maxDestabDegree make sense
    for any genus >= 2.
    """
    _check_odd_prime(p)
    _check_genus(g)
    out = {
        "p": p,
        "g": g,
        "tauInvariantCount": 2 ** (2 * (g - 1) - 1) * (p ** g - 1),
        "maxDestabDegree": g - 1,
    }
    if g == 2:
        base_locus = 2 * (p ** 3 - p)
        versch = p ** 3 + 2 * p
        if base_locus % 3 or versch % 3:
            raise RangeError("divisibility by 3 failed; p is not coprime to 3?")
        out.update(
            {
                "baseLocusLength": base_locus // 3,
                "verschiebungDegree": versch // 3,
                "hbarDegree": 2 * (p - 1),
                "preimageDegree": 4 * p,
            }
        )
        out["consistency"] = out["preimageDegree"] == 4 + 2 * out["hbarDegree"]
    return out
