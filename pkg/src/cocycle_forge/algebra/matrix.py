"""2x2 matrices over K_inf (series entries) and over A = F_q[t]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import NotInvertible, PrecisionExhausted
from .poly import Poly
from .series import TruncatedSeries


@dataclass(frozen=True)
class Matrix2:
    """(a b; c d) with TruncatedSeries entries over a common ring.

    ``inverse_hint`` optionally carries an exactly known inverse, which keeps
    group elements such as (a 1; 0 1)^(-1) exact when a is not a monomial.
    """

    a: TruncatedSeries
    b: TruncatedSeries
    c: TruncatedSeries
    d: TruncatedSeries
    inverse_hint: "Matrix2 | None" = field(default=None, compare=False, repr=False)

    @property
    def ring(self):
        return self.a.ring

    @classmethod
    def from_entries(cls, ring, a, b, c, d):
        def conv(x):
            if isinstance(x, TruncatedSeries):
                return x
            if isinstance(x, Poly):
                return TruncatedSeries.from_t_poly(x)
            return TruncatedSeries.const(ring, ring.from_int(x))
        return cls(conv(a), conv(b), conv(c), conv(d))

    @classmethod
    def identity(cls, ring):
        return cls.from_entries(ring, 1, 0, 0, 1)

    @classmethod
    def diag(cls, x: TruncatedSeries, y: TruncatedSeries):
        z = TruncatedSeries.zero(x.ring)
        return cls(x, z, z, y)

    @classmethod
    def scalar(cls, x: TruncatedSeries):
        return cls.diag(x, x)

    def with_inverse(self, inv: "Matrix2") -> "Matrix2":
        return Matrix2(self.a, self.b, self.c, self.d, inverse_hint=inv)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "Matrix2") -> "Matrix2":
        m = Matrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
        if self.inverse_hint is not None and o.inverse_hint is not None:
            ih = o.inverse_hint
            si = self.inverse_hint
            inv = Matrix2(
                ih.a * si.a + ih.b * si.c,
                ih.a * si.b + ih.b * si.d,
                ih.c * si.a + ih.d * si.c,
                ih.c * si.b + ih.d * si.d,
            )
            m = m.with_inverse(inv)
        return m

    def det(self) -> TruncatedSeries:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Matrix2":
        if self.inverse_hint is not None:
            return self.inverse_hint.with_inverse(self)
        det = self.det()
        if det.is_exact_zero():
            raise NotInvertible("singular matrix")
        dinv = det.inv()
        inv = Matrix2(self.d * dinv, -self.b * dinv, -self.c * dinv, self.a * dinv)
        return inv.with_inverse(self)

    def is_exact(self) -> bool:
        return all(x.is_exact for x in self.entries())

    def in_gl2_integral(self) -> bool:
        """Membership in GL2(O_inf): integral entries and unit determinant."""
        for x in self.entries():
            if x.coeffs and x.start < 0:
                return False
            if not x.coeffs and x.absprec is not None and x.absprec < 0:
                raise PrecisionExhausted("entry not certified integral")
        det = self.det()
        if det.is_zero_up_to_precision():
            raise PrecisionExhausted("determinant not certified")
        return det.valuation == 0

    def agrees(self, other: "Matrix2") -> bool:
        return all(x.agrees(y) for x, y in zip(self.entries(), other.entries()))

    def __repr__(self):
        return f"[[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]]"


@dataclass(frozen=True)
class PolyMatrix:
    """Element of GL2(F_q[t]) (or a 2x2 polynomial matrix)."""

    a: Poly
    b: Poly
    c: Poly
    d: Poly

    @property
    def F(self):
        return self.a.F

    @classmethod
    def from_ints(cls, F, a, b, c, d):
        def conv(x):
            return x if isinstance(x, Poly) else Poly.const(F, F.from_int(x))
        return cls(conv(a), conv(b), conv(c), conv(d))

    @classmethod
    def identity(cls, F):
        return cls.from_ints(F, 1, 0, 0, 1)

    @classmethod
    def parse(cls, F, text: str) -> "PolyMatrix":
        """Parse the literal syntax ``[[a,b],[c,d]]`` with entries like ``1+t^2``."""
        body = text.replace(" ", "").strip("[]")
        rows = body.split("],[")
        entries = [e for row in rows for e in row.split(",")]
        if len(entries) != 4:
            raise ValueError(f"bad matrix literal {text!r}")
        return cls(*(Poly.parse(F, e) for e in entries))

    def format(self) -> str:
        return f"[[{self.a.format()},{self.b.format()}],[{self.c.format()},{self.d.format()}]]"

    def __matmul__(self, o):
        return PolyMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def det(self) -> Poly:
        return self.a * self.d - self.b * self.c

    def is_invertible(self) -> bool:
        return self.det().degree == 0

    def inverse(self) -> "PolyMatrix":
        det = self.det()
        if det.degree != 0:
            raise NotInvertible(f"det {det.format()} is not a unit of F_q[t]")
        u = self.F.inv(det.lead())
        return PolyMatrix(self.d.scale(u), (-self.b).scale(u), (-self.c).scale(u), self.a.scale(u))

    def mod(self, g: Poly) -> "PolyMatrix":
        return PolyMatrix(self.a % g, self.b % g, self.c % g, self.d % g)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def max_degree(self) -> int:
        return max((x.degree for x in self.entries() if x), default=-1)

    def to_matrix2(self) -> Matrix2:
        def conv(p):
            return TruncatedSeries.from_t_poly(p)
        inv = self.inverse() if self.is_invertible() else None
        m = Matrix2(*(conv(x) for x in self.entries()))
        if inv is not None:
            m = m.with_inverse(Matrix2(*(conv(x) for x in inv.entries())))
        return m

    def key(self):
        return tuple(x.c for x in self.entries())

    def __lt__(self, other):
        return self.key() < other.key()


def matrix_valuation(m: Matrix2):
    return min(x.valuation_lower_bound for x in m.entries() if not x.is_exact_zero()) if any(
        not x.is_exact_zero() for x in m.entries()) else math.inf
