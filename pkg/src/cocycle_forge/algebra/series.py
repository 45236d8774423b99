"""Truncated Laurent series in the uniformizer pi over a finite ring.

A series stores the coefficients of pi^start, pi^(start+1), ... together with
an absolute precision ``absprec``: every term of exponent >= absprec is
unknown.  ``absprec=None`` marks an exact element (a finite Laurent
polynomial).  Two zero states are kept apart:

* exact zero: no coefficients, ``absprec is None``;
* zero up to precision ``O(pi^a)``: no known nonzero coefficient, ``absprec == a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import NotAUnit, PrecisionExhausted, RingMismatch
from .poly import FunctionField, Poly, RatFunc
from .rings import GaloisRing, naive_lift, residue_map

DEFAULT_PRECISION = 24


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=True)
class TruncatedSeries:
    ring: GaloisRing
    start: int
    coeffs: tuple
    absprec: int | None = None

    def __post_init__(self):
        c = list(self.coeffs)
        start = self.start
        if self.absprec is not None:
            c = c[: max(0, self.absprec - start)]
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        c = c[i:]
        start += i
        if self.absprec is None:
            while c and c[-1] == 0:
                c.pop()
        if not c:
            start = 0 if self.absprec is None else self.absprec
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "start", start)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, ring, absprec=None):
        return cls(ring, 0, (), absprec)

    @classmethod
    def const(cls, ring, a, absprec=None):
        return cls(ring, 0, (a,), absprec)

    @classmethod
    def monomial(cls, ring, exponent, a=1):
        return cls(ring, exponent, (a,))

    @classmethod
    def pi(cls, ring):
        return cls.monomial(ring, 1)

    @classmethod
    def from_dict(cls, ring, terms: dict, absprec=None):
        if not terms:
            return cls.zero(ring, absprec)
        lo, hi = min(terms), max(terms)
        return cls(ring, lo, tuple(terms.get(i, 0) for i in range(lo, hi + 1)), absprec)

    @classmethod
    def from_t_poly(cls, p: Poly):
        """Embed a(t) in F_q[t] into K_inf via t = 1/pi (exact)."""
        if not p:
            return cls.zero(p.F)
        return cls(p.F, -p.degree, tuple(reversed(p.c)))

    @classmethod
    def from_ratfunc_pi(cls, a: RatFunc, absprec: int):
        """Expand an element of F_q(pi) to absolute precision ``absprec``."""
        F = a.num.F
        num = cls(F, 0, a.num.c)
        den = cls(F, 0, a.den.c)
        if den.is_monomial():
            return num * den.inv()
        return div_to(num, den, absprec)

    @classmethod
    def from_ratfunc_t(cls, a: RatFunc, absprec: int):
        num = cls.from_t_poly(a.num)
        den = cls.from_t_poly(a.den)
        if den.is_monomial():
            return num * den.inv()
        return div_to(num, den, absprec)

    # -- inspection ---------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.absprec is None

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.absprec is None

    def is_zero_up_to_precision(self) -> bool:
        return not self.coeffs and self.absprec is not None

    def is_indistinguishable_from_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self):
        """Exponent of the first nonzero term; ``math.inf`` for the exact zero."""
        if self.coeffs:
            return self.start
        if self.absprec is None:
            return math.inf
        raise PrecisionExhausted(f"valuation of O(pi^{self.absprec}) is not certified")

    @property
    def valuation_lower_bound(self):
        if self.coeffs:
            return self.start
        return math.inf if self.absprec is None else self.absprec

    @property
    def relprec(self):
        if self.absprec is None:
            return math.inf
        return self.absprec - self.valuation_lower_bound

    def coeff(self, i: int):
        if self.absprec is not None and i >= self.absprec:
            raise PrecisionExhausted(f"coefficient of pi^{i} is beyond precision {self.absprec}")
        j = i - self.start
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def is_monomial(self) -> bool:
        return self.absprec is None and len(self.coeffs) == 1

    def is_integral(self) -> bool:
        return self.valuation_lower_bound >= 0 if self.coeffs else True

    def degree_top(self):
        """Largest exponent carrying a known nonzero coefficient."""
        return self.start + len(self.coeffs) - 1 if self.coeffs else -math.inf

    def terms(self):
        return {self.start + i: a for i, a in enumerate(self.coeffs) if a}

    def __repr__(self):
        R = self.ring
        parts = []
        for e, a in self.terms().items():
            mon = "1" if e == 0 else ("pi" if e == 1 else f"pi^{e}")
            parts.append(mon if a == 1 else f"{R.format(a)}*{mon}")
        body = " + ".join(parts) if parts else "0"
        if self.absprec is not None:
            body += f" + O(pi^{self.absprec})"
        return body

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return TruncatedSeries.const(self.ring, self.ring.from_int(other))
        if not isinstance(other, TruncatedSeries) or other.ring != self.ring:
            raise RingMismatch(f"cannot combine series over {self.ring!r} and {other!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        R = self.ring
        prec = _min_prec(self.absprec, other.absprec)
        out = dict(self.terms())
        for e, a in other.terms().items():
            out[e] = R.add(out.get(e, 0), a)
        if prec is not None:
            out = {e: a for e, a in out.items() if e < prec}
        return TruncatedSeries.from_dict(R, out, prec)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return TruncatedSeries(R, self.start, tuple(R.neg(a) for a in self.coeffs), self.absprec)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        R = self.ring
        if self.is_exact_zero() or other.is_exact_zero():
            return TruncatedSeries.zero(R)
        vx, vy = self.valuation_lower_bound, other.valuation_lower_bound
        prec = None
        if self.absprec is not None:
            prec = self.absprec + vy
        if other.absprec is not None:
            prec = _min_prec(prec, other.absprec + vx)
        out: dict = {}
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            ei = self.start + i
            for j, b in enumerate(other.coeffs):
                e = ei + other.start + j
                if prec is not None and e >= prec:
                    break
                if b:
                    out[e] = R.add(out.get(e, 0), R.mul(a, b))
        return TruncatedSeries.from_dict(R, out, prec)

    __rmul__ = __mul__

    def scale(self, a):
        R = self.ring
        return TruncatedSeries(R, self.start, tuple(R.mul(a, c) for c in self.coeffs), self.absprec)

    def shift(self, k: int):
        """Multiply by pi^k."""
        prec = None if self.absprec is None else self.absprec + k
        return TruncatedSeries(self.ring, self.start + k, self.coeffs, prec)

    def inv(self, relprec: int | None = None):
        """Multiplicative inverse.

        Requires the leading coefficient to be a unit of the coefficient ring.
        An exact non-monomial input is inverted to relative precision
        ``relprec`` (default ``DEFAULT_PRECISION``).
        """
        R = self.ring
        if self.is_exact_zero():
            raise NotAUnit("exact zero has no inverse")
        if self.is_zero_up_to_precision():
            raise PrecisionExhausted(f"cannot invert O(pi^{self.absprec})")
        v = self.start
        a0 = self.coeffs[0]
        if not R.is_unit(a0):
            raise NotAUnit(f"leading coefficient {a0} is not a unit of {R!r}")
        if self.is_monomial():
            return TruncatedSeries(R, -v, (R.inv(a0),))
        if self.absprec is not None:
            n = self.absprec - v
        else:
            n = DEFAULT_PRECISION if relprec is None else relprec
        if relprec is not None:
            n = min(n, relprec) if self.absprec is not None else relprec
        a = list(self.coeffs) + [0] * max(0, n - len(self.coeffs))
        b0 = R.inv(a0)
        b = [b0]
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                if a[i]:
                    acc = R.add(acc, R.mul(a[i], b[k - i]))
            b.append(R.neg(R.mul(b0, acc)))
        return TruncatedSeries(R, -v, tuple(b), -v + n)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        r = TruncatedSeries.const(self.ring, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    # -- precision management ----------------------------------------------
    def truncate(self, absprec: int):
        """Forget every term of exponent >= absprec."""
        return TruncatedSeries(self.ring, self.start, self.coeffs, _min_prec(self.absprec, absprec))

    def reduce_mod(self, n: int):
        """Exact representative of the class modulo pi^n * O (terms below n)."""
        if self.absprec is not None and self.absprec < n:
            raise PrecisionExhausted(f"need precision {n}, have {self.absprec}")
        return TruncatedSeries(self.ring, self.start, self.coeffs[: max(0, n - self.start)])

    def agrees(self, other) -> bool:
        """Equality up to the smaller of the two precisions."""
        other = self._check(other)
        diff = self - other
        return diff.is_indistinguishable_from_zero()

    def to_ratfunc(self, K: FunctionField) -> RatFunc:
        """Exact series as an element of F_q(pi)."""
        if not self.is_exact:
            raise PrecisionExhausted("only exact series embed into F_q(pi)")
        F = self.ring
        if not self.coeffs:
            return K.zero
        body = Poly(F, self.coeffs)
        if self.start >= 0:
            return RatFunc(body * Poly.monomial(F, self.start))
        return RatFunc(body, Poly.monomial(F, -self.start))

    def map_coeffs(self, ring, fn):
        return TruncatedSeries(ring, self.start, tuple(fn(a) for a in self.coeffs), self.absprec)


def div_to(x: TruncatedSeries, y: TruncatedSeries, absprec: int) -> TruncatedSeries:
    """x / y known at least up to absolute precision ``absprec`` (when inputs allow)."""
    vy = y.valuation
    vx = x.valuation_lower_bound
    if vx is math.inf:
        return TruncatedSeries.zero(x.ring)
    need = max(1, absprec - vx + vy)
    return x * y.inv(relprec=need)


class LaurentRing:
    """Ring-protocol wrapper: Laurent series over ``base`` (a field or Galois ring)."""

    def __init__(self, base: GaloisRing, precision: int = DEFAULT_PRECISION):
        self.base = base
        self.precision = precision
        self.zero = TruncatedSeries.zero(base)
        self.one = TruncatedSeries.const(base, 1)

    def __repr__(self):
        return f"{self.base!r}((pi))"

    def __eq__(self, other):
        return isinstance(other, LaurentRing) and other.base == self.base

    def __hash__(self):
        return hash(("Laurent", self.base))

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def is_field(self):
        return self.base.is_field

    @property
    def name(self):
        return f"laurent_{self.base.name}"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv(self.precision)

    def div(self, a, b):
        return a * self.inv(b)

    def is_zero(self, a):
        return a.is_indistinguishable_from_zero()

    def from_int(self, n):
        return TruncatedSeries.const(self.base, self.base.from_int(n))

    def format(self, a):
        return repr(a)


def series_residue(x: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise reduction GR((pi)) -> F_q((pi))."""
    R = x.ring
    return x.map_coeffs(R.residue_field, lambda a: residue_map(R, a))


def series_lift(x: TruncatedSeries, target: GaloisRing) -> TruncatedSeries:
    """Coefficientwise naive lift F_q((pi)) -> GR((pi))."""
    return x.map_coeffs(target, lambda a: naive_lift(target, a))
