"""Exact coefficient rings: prime fields, extension fields, dual numbers.

A ring here is a lightweight *context object* whose methods operate on raw
element values:

    PrimeField(p)        raw value: int in [0, p)
    ExtField(p, modulus) raw value: tuple of k ints (coefficients in the
                         basis 1, t, ..., t^(k-1) modulo the monic
                         irreducible `modulus` of degree k)
    DualRing(base)       raw value: pair (body, slope) of base raws,
                         representing body + eps*slope with eps^2 = 0

Raw values are plain immutable Python data, so everything in this module is
safe to share across threads and processes.  Contexts compare equal when they
describe the same ring, which lets curves and higher layers check operand
compatibility cheaply.

The Frobenius x -> x^p is exposed on the two fields (it is the identity on
F_p).  On dual numbers it is rejected: eps^p = 0 collapses the slope, so a
blanket Frobenius would silently destroy first-order data; callers that want
it componentwise must say so by mapping over body and slope themselves.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import EvenCharacteristic, NonUnitError, RangeError, UnsupportedRing

_MAX_P = 1 << 61  # machine-word guard; everything here targets small p anyway


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division; fine for word-size inputs."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field F_p for an odd prime p, acting on ints reduced into [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if isinstance(p, int) and p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported")
        if not isinstance(p, int) or not is_prime(p):
            raise RangeError(f"{p} is not prime")
        if p >= _MAX_P:
            raise RangeError(f"p must be below 2^61, got {p}")
        self.p = p

    # -- ring structure ---------------------------------------------------
    @property
    def char(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return 1

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NonUnitError("division by zero in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.inv(self.pow(a, -n))
        return pow(a, n, self.p)

    def frobenius(self, a):
        return a % self.p  # Fermat: a^p = a on F_p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def eq(self, a, b) -> bool:
        return (a - b) % self.p == 0

    # -- enumeration / sampling -------------------------------------------
    def elements(self):
        return range(self.p)

    def random(self, rng):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def describe(self) -> dict:
        return {"p": self.p}


class ExtField:
    """F_{p^k} presented as F_p[t] modulo a monic irreducible of degree k.

    Raw values are k-tuples of ints; index i is the coefficient of t^i.
    The modulus is checked for irreducibility at construction.
    """

    __slots__ = ("p", "k", "modulus", "_red")

    def __init__(self, p: int, modulus):
        base = PrimeField(p)
        self.p = base.p
        mod = tuple(c % p for c in modulus)
        while mod and mod[-1] == 0:
            mod = mod[:-1]
        if len(mod) < 2:
            raise RangeError("modulus must have degree >= 1")
        if mod[-1] != 1:
            raise RangeError("modulus must be monic")
        self.k = len(mod) - 1
        self.modulus = mod
        if not _poly_is_irreducible(p, mod):
            raise RangeError(f"modulus {mod} is reducible over F_{p}")
        # _red[i] = t^(k+i) reduced mod the modulus, enough for deg < k products
        self._red = []
        cur = [(-c) % p for c in mod[:-1]]  # t^k
        for _ in range(self.k):
            self._red.append(tuple(cur))
            cur = [0] + cur  # multiply by t
            top = cur.pop()
            if top:
                cur = [(cur[i] - top * mod[i]) % p for i in range(self.k)]

    @property
    def char(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p ** self.k

    @property
    def degree(self) -> int:
        return self.k

    def zero(self):
        return (0,) * self.k

    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def gen(self):
        """The class of t."""
        if self.k == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.k - 2)

    def from_int(self, n: int):
        return (n % self.p,) + (0,) * (self.k - 1)

    def from_coeffs(self, coeffs):
        c = [x % self.p for x in coeffs]
        if len(c) > self.k:
            raise RangeError("too many coefficients for this extension")
        return tuple(c + [0] * (self.k - len(c)))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        out = prod[:k]
        for i in range(k, 2 * k - 1):
            c = prod[i]
            if c:
                r = self._red[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * r[j]) % p
        return tuple(out)

    def inv(self, a):
        if self.is_zero(a):
            raise NonUnitError("division by zero in F_{p^k}")
        return self.pow(a, self.size - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.inv(self.pow(a, -n))
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def frobenius(self, a):
        return self.pow(a, self.p)

    def is_zero(self, a) -> bool:
        return all(x % self.p == 0 for x in a)

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def elements(self):
        from itertools import product

        for tup in product(range(self.p), repeat=self.k):
            yield tup

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def frobenius_matrix(self):
        """Columns are t^(i*p) in the t-power basis (F_p-linear Frobenius)."""
        cols = [self.frobenius(self.monomial(i)) for i in range(self.k)]
        return [[cols[j][i] for j in range(self.k)] for i in range(self.k)]

    def monomial(self, i: int):
        if i == 0:
            return self.one()
        return self.pow(self.gen(), i)

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.p, self.modulus))

    def __repr__(self):
        return f"ExtField(p={self.p}, modulus={list(self.modulus)})"

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


class DualRing:
    """base[eps]/(eps^2): first-order deformations over a field context.

    Raw values are pairs (body, slope).  A pair is a unit iff its body is;
    (a + eps b)^(-1) = a^(-1) - eps b a^(-2).  Duals are never nested.
    """

    __slots__ = ("base",)

    def __init__(self, base):
        if isinstance(base, DualRing):
            raise RangeError("dual numbers are not nested")
        self.base = base

    @property
    def char(self) -> int:
        return self.base.char

    def zero(self):
        return (self.base.zero(), self.base.zero())

    def one(self):
        return (self.base.one(), self.base.zero())

    def eps(self):
        return (self.base.zero(), self.base.one())

    def lift(self, a):
        """Embed a base value as a dual with zero slope."""
        return (a, self.base.zero())

    def from_int(self, n: int):
        return (self.base.from_int(n), self.base.zero())

    def add(self, u, v):
        F = self.base
        return (F.add(u[0], v[0]), F.add(u[1], v[1]))

    def sub(self, u, v):
        F = self.base
        return (F.sub(u[0], v[0]), F.sub(u[1], v[1]))

    def neg(self, u):
        F = self.base
        return (F.neg(u[0]), F.neg(u[1]))

    def mul(self, u, v):
        F = self.base
        return (F.mul(u[0], v[0]), F.add(F.mul(u[0], v[1]), F.mul(u[1], v[0])))

    def inv(self, u):
        F = self.base
        if F.is_zero(u[0]):
            raise NonUnitError("dual number with zero body is not a unit")
        ia = F.inv(u[0])
        return (ia, F.neg(F.mul(u[1], F.mul(ia, ia))))

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

    def frobenius(self, u):
        raise UnsupportedRing(
            "Frobenius is not defined on dual numbers; apply it to body and "
            "slope separately if that is what you mean"
        )

    def is_zero(self, u) -> bool:
        return self.base.is_zero(u[0]) and self.base.is_zero(u[1])

    def eq(self, u, v) -> bool:
        return self.is_zero(self.sub(u, v))

    def is_unit(self, u) -> bool:
        return not self.base.is_zero(u[0])

    def random(self, rng):
        return (self.base.random(rng), self.base.random(rng))

    def __eq__(self, other):
        return isinstance(other, DualRing) and other.base == self.base

    def __hash__(self):
        return hash(("DualRing", self.base))

    def __repr__(self):
        return f"DualRing({self.base!r})"


def field_arith(ring, a, b, op: str):
    """One-call ring arithmetic: op in {'add', 'sub', 'mul', 'div'}."""
    try:
        fn = {"add": ring.add, "sub": ring.sub, "mul": ring.mul, "div": ring.div}[op]
    except KeyError:
        raise RangeError(f"unknown operation {op!r}") from None
    return fn(a, b)


def frobenius(ring, a):
    """The p-power map on a field value (identity on F_p)."""
    return ring.frobenius(a)


# ---------------------------------------------------------------------------
# irreducibility over F_p and deterministic modulus search
# ---------------------------------------------------------------------------

def _pp_norm(p, a):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mulmod(p, a, b, m):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # reduce mod m
    dm = len(m) - 1
    while len(prod) > dm:
        c = prod[-1]
        if c:
            off = len(prod) - 1 - dm
            for i in range(dm + 1):
                prod[off + i] = (prod[off + i] - c * m[i]) % p
        prod.pop()
    return _pp_norm(p, prod)


def _pp_powmod_x(p, e, m):
    """x^e mod m over F_p."""
    result = [1]
    base = [0, 1] if len(m) > 2 else _pp_norm(p, [(-m[0]) % p])
    while e:
        if e & 1:
            result = _pp_mulmod(p, result, base, m)
        base = _pp_mulmod(p, base, base, m)
        e >>= 1
    return result


def _pp_gcd(p, a, b):
    a, b = _pp_norm(p, a), _pp_norm(p, b)
    while b:
        # a mod b
        inv = pow(b[-1], p - 2, p)
        r = a[:]
        while len(r) >= len(b) and r:
            s = (r[-1] * inv) % p
            off = len(r) - len(b)
            for i, c in enumerate(b):
                r[off + i] = (r[off + i] - s * c) % p
            r = _pp_norm(p, r)
        a, b = b, r
    return a


def _pp_sub_x(p, a):
    """a(x) - x as a normalized coefficient list."""
    out = list(a) + [0] * max(0, 2 - len(a))
    out[1] = (out[1] - 1) % p
    return _pp_norm(p, out)


def _poly_is_irreducible(p: int, mod) -> bool:
    """Rabin test: x^(p^k) = x mod m, and gcd(x^(p^(k/q)) - x, m) = 1."""
    m = list(mod)
    k = len(m) - 1
    if k == 1:
        return True
    if _pp_sub_x(p, _pp_powmod_x(p, p ** k, m)):
        return False
    for q in _prime_divisors(k):
        diff = _pp_sub_x(p, _pp_powmod_x(p, p ** (k // q), m))
        if len(_pp_gcd(p, diff, m)) > 1:
            return False
    return True


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def find_irreducible(p: int, k: int, seed: int = 0):
    """Deterministic seeded search for a monic irreducible of degree k over F_p."""
    import random

    if k < 1:
        raise RangeError("extension degree must be >= 1")
    if k == 1:
        return (0, 1)
    rng = random.Random(((p * 1_000_003 + k) * 1_000_003 + seed))
    while True:
        cand = [rng.randrange(p) for _ in range(k)] + [1]
        if cand[0] == 0:
            continue  # divisible by x
        if _poly_is_irreducible(p, cand):
            return tuple(cand)


def make_field(p: int, k: int = 1, modulus=None, seed: int = 0):
    """Build F_p (k=1) or F_{p^k} with a caller-supplied or seeded modulus."""
    if k == 1 and modulus is None:
        return PrimeField(p)
    if modulus is None:
        modulus = find_irreducible(p, k, seed)
    f = ExtField(p, modulus)
    if k not in (1, f.k):
        raise RangeError(f"modulus degree {f.k} does not match requested k={k}")
    return f
