"""Dense univariate polynomials over a field context.

A polynomial is a tuple of raw field values with no trailing zeros; () is the
zero polynomial.  Index i holds the coefficient of x^i.  All functions take
the field context as their first argument and never mutate their inputs, so
polynomials can be shared freely.

Degrees stay small here (derivation towers on a quintic model), so schoolbook
multiplication and plain Euclid are the right tools.
"""

from __future__ import annotations

from .errors import DivisionByZero


def normalize(F, coeffs):
    """Strip trailing zeros; coefficients must already be raw field values."""
    c = list(coeffs)
    while c and F.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def from_ints(F, ints):
    """Build a polynomial from plain integer coefficients."""
    return normalize(F, [F.from_int(n) for n in ints])


def zero():
    return ()


def one(F):
    return (F.one(),)


def constant(F, a):
    return () if F.is_zero(a) else (a,)


def x(F):
    return (F.zero(), F.one())


def degree(a) -> int:
    """Degree with the convention deg 0 = -1."""
    return len(a) - 1


def is_zero(a) -> bool:
    return not a


def eq(F, a, b) -> bool:
    return len(a) == len(b) and all(F.eq(u, v) for u, v in zip(a, b))


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return normalize(F, out)


def neg(F, a):
    return tuple(F.neg(c) for c in a)


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, s):
    if F.is_zero(s):
        return ()
    return normalize(F, [F.mul(c, s) for c in a])


def mul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if not F.is_zero(c):
            for j, d in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(c, d))
    return normalize(F, out)


def mul_xn(a, F, n: int):
    """a * x^n."""
    if not a:
        return ()
    return (F.zero(),) * n + tuple(a)


def pow(F, a, n: int):  # noqa: A001 - deliberate, mirrors the ring interface
    r = one(F)
    while n:
        if n & 1:
            r = mul(F, r, a)
        a = mul(F, a, a)
        n >>= 1
    return r


def divmod_(F, a, b):
    """Quotient and remainder; b must be nonzero."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    q = [F.zero()] * max(0, len(a) - len(b) + 1)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b) and a:
        s = F.mul(a[-1], inv_lead)
        k = len(a) - len(b)
        q[k] = s
        for i, c in enumerate(b):
            a[k + i] = F.sub(a[k + i], F.mul(s, c))
        while a and F.is_zero(a[-1]):
            a.pop()
    return normalize(F, q), normalize(F, a)


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def monic(F, a):
    if not a:
        return ()
    if F.eq(a[-1], F.one()):
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b):
    """Monic gcd by Euclid."""
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def derivative(F, a):
    return normalize(
        F, [F.mul(F.from_int(i), c) for i, c in enumerate(a)][1:]
    )


def evaluate(F, a, v):
    acc = F.zero()
    for c in reversed(a):
        acc = F.add(F.mul(acc, v), c)
    return acc


def coefficient(F, a, i: int):
    return a[i] if 0 <= i < len(a) else F.zero()


def is_squarefree(F, a) -> bool:
    return len(gcd(F, a, derivative(F, a))) == 1
