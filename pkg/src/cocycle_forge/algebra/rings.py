"""Finite fields, Galois rings and the integers behind one small ring protocol.

Elements are plain Python ints.  An element of GR(p^k, f) is encoded as
``sum(c_i * (p^k)^i)`` where ``c_0 + c_1 x + ... + c_{f-1} x^{f-1}`` is its
representative in ``(Z/p^k)[x] / (modulus)``.  A finite field is the case k = 1.

Every ring object exposes ``zero, one, add, sub, neg, mul, is_zero, from_int``;
fields additionally expose ``inv`` and ``div``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from ..errors import NotAUnit, RingMismatch

# Monic irreducible moduli over F_p, low degree first.  The Galois ring uses the
# same integer coefficients as its (basic irreducible) modulus.
MODULI = {
    (2, 1): (0, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1),
    (3, 1): (0, 1), (3, 2): (2, 2, 1), (3, 3): (1, 2, 0, 1),
    (5, 1): (0, 1), (5, 2): (2, 4, 1), (5, 3): (3, 3, 0, 1),
    (7, 1): (0, 1), (7, 2): (3, 6, 1), (7, 3): (4, 0, 6, 1),
}

_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class GaloisRing:
    """GR(p^k, f) = (Z/p^k)[x]/(modulus); k = 1 gives the field F_{p^f}."""

    p: int
    k: int = 1
    f: int = 1
    modulus: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.k < 1 or self.f < 1:
            raise ValueError("k and f must be >= 1")
        if self.modulus is None:
            try:
                object.__setattr__(self, "modulus", MODULI[(self.p, self.f)])
            except KeyError:
                raise ValueError(f"no built-in modulus for p={self.p}, f={self.f}") from None
        if len(self.modulus) != self.f + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")

    # -- sizes -------------------------------------------------------------
    @property
    def pk(self) -> int:
        return self.p ** self.k

    @property
    def q(self) -> int:
        """Size of the residue field."""
        return self.p ** self.f

    @property
    def size(self) -> int:
        return self.pk ** self.f

    @property
    def characteristic(self) -> int:
        return self.pk

    @property
    def is_field(self) -> bool:
        return self.k == 1

    zero = 0
    one = 1

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.q}"
        return f"GR({self.pk},{self.f})"

    @property
    def name(self) -> str:
        return f"f{self.q}" if self.k == 1 else f"gr{self.pk}_{self.f}"

    # -- coefficient vectors ------------------------------------------------
    def to_vector(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.pk)
            out.append(r)
        return out

    def from_vector(self, v) -> int:
        a = 0
        for c in reversed(list(v)):
            a = a * self.pk + (c % self.pk)
        return a

    def from_int(self, n: int) -> int:
        return n % self.pk

    # -- arithmetic ---------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.pk
        return self._add_table[a][b] if self._add_table else self._add(a, b)

    def _add(self, a, b):
        va, vb = self.to_vector(a), self.to_vector(b)
        return self.from_vector([x + y for x, y in zip(va, vb)])

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.pk
        return self.from_vector([-x for x in self.to_vector(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.pk
        return self._mul_table[a][b] if self._mul_table else self._mul(a, b)

    def _mul(self, a, b):
        va, vb = self.to_vector(a), self.to_vector(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] += x * y
        m = self.modulus
        for d in range(len(prod) - 1, self.f - 1, -1):
            c = prod[d] % self.pk
            if c:
                for i in range(self.f):
                    prod[d - self.f + i] -= c * m[i]
            prod[d] = 0
        return self.from_vector(prod[: self.f])

    @cached_property
    def _add_table(self):
        if self.size > _TABLE_LIMIT:
            return None
        n = self.size
        return [[self._add(a, b) for b in range(n)] for a in range(n)]

    @cached_property
    def _mul_table(self):
        if self.size > _TABLE_LIMIT:
            return None
        n = self.size
        return [[self._mul(a, b) for b in range(n)] for a in range(n)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, b = self.one, a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def is_zero(self, a: int) -> bool:
        return a == 0

    def is_unit(self, a: int) -> bool:
        return any(c % self.p for c in self.to_vector(a))

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise NotAUnit(f"{a} is not a unit in {self!r}")
        if self.f == 1:
            return pow(a, -1, self.pk)
        order = (self.q - 1) * self.q ** (self.k - 1)
        return self.pow(a, order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self):
        return range(self.size)

    def units(self):
        return [a for a in range(self.size) if self.is_unit(a)]

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.size)

    # -- reduction and lifting ----------------------------------------------
    @property
    def residue_field(self) -> "GaloisRing":
        return GaloisRing(self.p, 1, self.f, self.modulus)

    def lift_ring(self, k: int) -> "GaloisRing":
        return GaloisRing(self.p, k, self.f, self.modulus)

    def generator(self) -> int:
        """A generator of the multiplicative group (fields only)."""
        if not self.is_field:
            raise RingMismatch("generator() is defined for fields only")
        order = self.q - 1
        primes = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        for a in range(1, self.size):
            if all(self.pow(a, order // r) != 1 for r in primes):
                return a
        return 1

    def format(self, a: int) -> str:
        if self.f == 1:
            return str(a)
        return "[" + ",".join(map(str, self.to_vector(a))) + "]"


def FiniteField(p: int, f: int = 1, modulus=None) -> GaloisRing:
    return GaloisRing(p, 1, f, modulus)


def field_from_q(q: int) -> GaloisRing:
    for p in (2, 3, 5, 7):
        f = 1
        while p ** f < q:
            f += 1
        if p ** f == q:
            return FiniteField(p, f)
    raise ValueError(f"unsupported field size q={q}")


class IntegerRing:
    """The integers, with the same protocol as the finite rings."""

    zero = 0
    one = 1
    characteristic = 0
    is_field = False
    name = "z"

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return int(n)

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise NotAUnit(f"{a} is not a unit in ZZ")
        return a

    def format(self, a):
        return str(a)


ZZ = IntegerRing()


def residue_map(ring: GaloisRing, a: int) -> int:
    """Reduce an element of GR(p^k, f) to the residue field F_{p^f}."""
    return ring.residue_field.from_vector([c % ring.p for c in ring.to_vector(a)])


def naive_lift(ring: GaloisRing, a: int) -> int:
    """Teichmuller-free lift: residue digits reused as Galois-ring digits.

    ``ring`` is the target Galois ring.  The lift is a set-theoretic section of
    :func:`residue_map`; it is neither additive nor multiplicative.
    """
    digits = ring.residue_field.to_vector(a)
    return ring.from_vector(digits)
