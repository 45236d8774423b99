"""Polynomials over a finite field and their fraction field.

``Poly`` doubles as an element of A = F_q[t]; ``RatFunc`` elements live in
F_q(var) and are used wherever exact field arithmetic over the global field
(or over F_q(pi) inside K_inf) is required.
"""
from __future__ import annotations

import random
from functools import total_ordering

from ..errors import NotAUnit
from .rings import GaloisRing


@total_ordering
class Poly:
    __slots__ = ("F", "c")

    def __init__(self, F: GaloisRing, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.F = F
        self.c = tuple(c)

    # constructors
    @classmethod
    def const(cls, F, a):
        return cls(F, (a,))

    @classmethod
    def monomial(cls, F, d, a=1):
        return cls(F, (0,) * d + (a,))

    @classmethod
    def parse(cls, F, text: str, var: str = "t") -> "Poly":
        """Parse ``"1+t^2"``-style literals (coefficients as integers of F_p, or F encodings)."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls(F)
        terms = text.replace("-", "+-").split("+")
        acc = cls(F)
        for term in terms:
            if not term:
                continue
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            if var in term:
                coef, _, rest = term.partition(var)
                coef = coef.rstrip("*") or "1"
                deg = int(rest[1:]) if rest.startswith("^") else 1
            else:
                coef, deg = term, 0
            a = F.from_int(int(coef)) if F.f == 1 else int(coef)
            if sign < 0:
                a = F.neg(a)
            acc = acc + cls.monomial(F, deg, a)
        return acc

    # basic data
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def is_zero(self):
        return not self.c

    def lead(self):
        return self.c[-1] if self.c else 0

    def coeff(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.F, other)
        return isinstance(other, Poly) and self.c == other.c

    def __lt__(self, other):
        return (len(self.c), self.c[::-1]) < (len(other.c), other.c[::-1])

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({self.format()})"

    def format(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            s = self.F.format(a)
            if i == 0:
                parts.append(s)
            else:
                mon = var if i == 1 else f"{var}^{i}"
                parts.append(mon if a == 1 else f"{s}*{mon}")
        return "+".join(parts)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, int):
            return Poly.const(self.F, self.F.from_int(other))
        return other

    def __add__(self, other):
        other = self._coerce(other)
        F = self.F
        n = max(len(self.c), len(other.c))
        return Poly(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.F, [self.F.neg(a) for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.F
        if not self.c or not other.c:
            return Poly(F)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    __rmul__ = __mul__

    def scale(self, a):
        return Poly(self.F, [self.F.mul(a, x) for x in self.c])

    def __pow__(self, e: int):
        r = Poly.const(self.F, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        F = self.F
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        inv_lead = F.inv(other.lead())
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(F), self
        quo = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            a = r[k + len(other.c) - 1]
            if a:
                m = F.mul(a, inv_lead)
                quo[k] = m
                for j, b in enumerate(other.c):
                    r[k + j] = F.sub(r[k + j], F.mul(m, b))
        return Poly(F, quo), Poly(F, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.F.inv(self.lead()))

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def __call__(self, x):
        F = self.F
        acc = 0
        for a in reversed(self.c):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def is_irreducible(self) -> bool:
        """Brute-force irreducibility test (small degrees only)."""
        d = self.degree
        if d <= 0:
            return False
        for e in range(1, d // 2 + 1):
            for g in monic_polys(self.F, e):
                if not (self % g):
                    return False
        return True


def polys_of_degree_at_most(F: GaloisRing, d: int):
    """All polynomials of degree <= d (including 0), in a fixed order."""
    if d < 0:
        yield Poly(F)
        return
    n = F.size
    for idx in range(n ** (d + 1)):
        c = []
        for _ in range(d + 1):
            idx, r = divmod(idx, n)
            c.append(r)
        yield Poly(F, c)


def monic_polys(F, d):
    for low in polys_of_degree_at_most(F, d - 1):
        yield low + Poly.monomial(F, d)


def random_poly(F, d, rng: random.Random):
    return Poly(F, [rng.randrange(F.size) for _ in range(d + 1)])


class RatFunc:
    """Element num/den of F(var), kept reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced=False):
        if den is None:
            den = Poly.const(num.F, 1)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            g = num.gcd(den) if num else den.monic()
            num, den = num // g, den // g
            lc = den.lead()
            if lc != 1:
                inv = num.F.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return f"RatFunc({self.num.format()})"
        return f"RatFunc(({self.num.format()})/({self.den.format()}))"

    def __add__(self, o):
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __mul__(self, o):
        return RatFunc(self.num * o.num, self.den * o.den)

    def inv(self):
        if not self.num:
            raise NotAUnit("zero is not invertible")
        return RatFunc(self.den, self.num)

    def __truediv__(self, o):
        return self * o.inv()

    def __bool__(self):
        return bool(self.num)


class FunctionField:
    """Ring-protocol wrapper around F_q(var)."""

    is_field = True

    def __init__(self, F: GaloisRing, var: str = "t"):
        self.F = F
        self.var = var
        self.zero = RatFunc(Poly(F))
        self.one = RatFunc(Poly.const(F, 1))

    def __repr__(self):
        return f"{self.F!r}({self.var})"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and (self.F, self.var) == (other.F, other.var)

    def __hash__(self):
        return hash(("FunctionField", self.F, self.var))

    @property
    def characteristic(self):
        return self.F.p

    @property
    def name(self):
        return f"f{self.F.q}({self.var})"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv()

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return not a.num

    def from_int(self, n):
        return RatFunc(Poly.const(self.F, self.F.from_int(n)))

    def from_base(self, a):
        return RatFunc(Poly.const(self.F, a))

    def from_poly(self, p: Poly):
        return RatFunc(p)

    def gen(self):
        return RatFunc(Poly.monomial(self.F, 1))

    def format(self, a):
        if a.den.degree == 0:
            return a.num.format(self.var)
        return f"({a.num.format(self.var)})/({a.den.format(self.var)})"
