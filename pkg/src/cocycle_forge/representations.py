"""Homogeneous polynomial representations V_n(L) of GL2 and their duals.

Conventions
-----------
* A ``HomPoly`` of degree n stores the coefficient of X^j Y^(n-j) at index j.
* rho_n(g) X^j Y^(n-j) = (aX + bY)^j (cX + dY)^(n-j) where g^(-1) = (a b; c d).
* The dual action is the contragredient: <g.phi, P> = <phi, rho_n(g^(-1)) P>,
  so the matrix of rho*_n(g) is the transpose of the matrix of rho_n(g^(-1)).

Coefficients live in any ring object from :mod:`cocycle_forge.algebra`.  For
n > 0 the natural choice is ``FunctionField(F, "pi")``: every matrix entry used
in this package is an exact element of F_q(pi), a subfield of K_inf, so ranks
computed there are ranks over K_inf.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .algebra import (FiniteField, FunctionField, GaloisRing, LaurentRing, Matrix2,
                      SpanBuilder, TruncatedSeries)
from .errors import NotApplicable, NotAUnit, PrecisionExhausted, RingMismatch, TooLarge


# -- data ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomPoly:
    n: int
    coeffs: tuple
    ring: object = field(compare=False)

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"degree {self.n} needs {self.n + 1} coefficients")

    @classmethod
    def monomial(cls, ring, n, j, a=None):
        c = [ring.zero] * (n + 1)
        c[j] = ring.one if a is None else a
        return cls(n, tuple(c), ring)

    @classmethod
    def zero(cls, ring, n):
        return cls(n, (ring.zero,) * (n + 1), ring)

    def __add__(self, other):
        R = self.ring
        return HomPoly(self.n, tuple(R.add(a, b) for a, b in zip(self.coeffs, other.coeffs)), R)

    def __sub__(self, other):
        R = self.ring
        return HomPoly(self.n, tuple(R.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)), R)

    def scale(self, s):
        R = self.ring
        return HomPoly(self.n, tuple(R.mul(s, a) for a in self.coeffs), R)

    def is_zero(self):
        return all(self.ring.is_zero(a) for a in self.coeffs)


@dataclass(frozen=True)
class DualVec:
    n: int
    coeffs: tuple
    ring: object = field(compare=False)

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"degree {self.n} needs {self.n + 1} coefficients")

    @classmethod
    def zero(cls, ring, n):
        return cls(n, (ring.zero,) * (n + 1), ring)

    def __call__(self, P: HomPoly):
        return evaluate_dual(self, P)

    def __add__(self, other):
        R = self.ring
        return DualVec(self.n, tuple(R.add(a, b) for a, b in zip(self.coeffs, other.coeffs)), R)

    def __sub__(self, other):
        R = self.ring
        return DualVec(self.n, tuple(R.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)), R)

    def __neg__(self):
        R = self.ring
        return DualVec(self.n, tuple(R.neg(a) for a in self.coeffs), R)

    def scale(self, s):
        R = self.ring
        return DualVec(self.n, tuple(R.mul(s, a) for a in self.coeffs), R)

    def is_zero(self):
        return all(self.ring.is_zero(a) for a in self.coeffs)


def evaluate_dual(phi: DualVec, P: HomPoly):
    R = phi.ring
    acc = R.zero
    for a, b in zip(phi.coeffs, P.coeffs):
        acc = R.add(acc, R.mul(a, b))
    return acc


@dataclass(frozen=True)
class Twist:
    """det^l, or a character xi of K_inf^* trivial on 1 + pi O.

    ``xi_gen`` is the value on ``generator`` of F^*, ``xi_pi`` the value on pi;
    both are units of the coefficient ring.
    """

    l: int = 0
    xi_gen: object = None
    xi_pi: object = None
    generator: int | None = None

    @property
    def is_character(self):
        return self.xi_gen is not None


# -- coercions ------------------------------------------------------------------------

def coerce_series(ring, x):
    """Map an element of K_inf (a TruncatedSeries) into ``ring``."""
    if isinstance(ring, FunctionField):
        return x.to_ratfunc(ring)
    if isinstance(ring, LaurentRing):
        return x
    if isinstance(ring, GaloisRing):
        if x.is_exact and (not x.coeffs or (x.start == 0 and len(x.coeffs) == 1)):
            return x.coeff(0) if x.coeffs else 0
        raise RingMismatch(f"{x!r} is not a constant of {ring!r}")
    raise RingMismatch(f"unsupported coefficient ring {ring!r}")


def _entries(ring, g):
    if isinstance(g, Matrix2):
        return tuple(coerce_series(ring, x) for x in g.entries())
    return tuple(g)


def exact_entries(ring, g):
    """Entries of g in ``ring``, recovered from an exact inverse hint if needed."""
    try:
        return _entries(ring, g)
    except PrecisionExhausted:
        if not isinstance(g, Matrix2) or g.inverse_hint is None:
            raise
        return _invert(ring, _entries(ring, g.inverse_hint))


def _invert(ring, e):
    a, b, c, d = e
    dinv = ring.inv(_det(ring, e))
    return (ring.mul(d, dinv), ring.neg(ring.mul(b, dinv)), ring.neg(ring.mul(c, dinv)), ring.mul(a, dinv))


def _det(ring, e):
    a, b, c, d = e
    return ring.sub(ring.mul(a, d), ring.mul(b, c))


def inverse_entries(ring, g):
    """Entries of g^(-1) in ``ring``; exact whenever ``ring`` is a field."""
    if isinstance(g, Matrix2) and g.inverse_hint is not None:
        return _entries(ring, g.inverse_hint)
    if isinstance(g, Matrix2) and not getattr(ring, "is_field", False) and not isinstance(ring, LaurentRing):
        return _entries(ring, g.inverse())
    if isinstance(ring, LaurentRing):
        return _entries(ring, g.inverse())
    return _invert(ring, _entries(ring, g))


def _discrete_log(F: GaloisRing, gen: int, c: int) -> int:
    x, k = 1, 0
    while x != c:
        x = F.mul(x, gen)
        k += 1
        if k > F.size:
            raise NotAUnit(f"{c} is not a power of {gen}")
    return k


def twist_scalar(ring, g, twist: Twist | None):
    """det(g)^l or xi(det g), as an element of ``ring``."""
    if twist is None or (twist.l == 0 and not twist.is_character):
        return ring.one
    e = exact_entries(ring, g)
    if not twist.is_character:
        return _power(ring, _det(ring, e), twist.l)
    # character: factor det = pi^v * c * (1-unit)
    if isinstance(g, Matrix2):
        det = g.det()
        v, c = det.valuation, det.coeffs[0]
        F = det.ring
    else:
        F = ring
        v, c = 0, _det(ring, e)
    k = _discrete_log(F, twist.generator, c)
    val = _power(ring, twist.xi_gen, k)
    return ring.mul(val, _power(ring, twist.xi_pi, v))


def _power(ring, x, e):
    if e < 0:
        x, e = ring.inv(x), -e
    r = ring.one
    for _ in range(e):
        r = ring.mul(r, x)
    return r


# -- the action -----------------------------------------------------------------------

def _linear_powers(ring, lin, n):
    """Coefficient lists (index = power of X) of lin^0 .. lin^n for lin = (coef X, coef Y)."""
    cx, cy = lin
    out = [[ring.one]]
    for _ in range(n):
        prev = out[-1]
        nxt = [ring.zero] * (len(prev) + 1)
        for i, a in enumerate(prev):
            nxt[i] = ring.add(nxt[i], ring.mul(a, cy))
            nxt[i + 1] = ring.add(nxt[i + 1], ring.mul(a, cx))
        out.append(nxt)
    return out


def rho_matrix_from_inverse(ring, inv_entries, n):
    """Matrix of rho_n(g) given the entries (a, b, c, d) of g^(-1)."""
    a, b, c, d = inv_entries
    P1 = _linear_powers(ring, (a, b), n)
    P2 = _linear_powers(ring, (c, d), n)
    M = [[ring.zero] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        u, w = P1[j], P2[n - j]
        for i1, x in enumerate(u):
            if ring.is_zero(x):
                continue
            for i2, y in enumerate(w):
                if not ring.is_zero(y):
                    M[i1 + i2][j] = ring.add(M[i1 + i2][j], ring.mul(x, y))
    return M


def rho_matrix(ring, g, n, twist: Twist | None = None):
    if n == 0:
        return [[twist_scalar(ring, g, twist)]]
    M = rho_matrix_from_inverse(ring, inverse_entries(ring, g), n)
    s = twist_scalar(ring, g, twist)
    if s != ring.one:
        M = [[ring.mul(s, x) for x in row] for row in M]
    return M


def rho_dual_matrix(ring, g, n, twist: Twist | None = None):
    """Matrix of rho*_n(g) = transpose of rho_n(g^(-1))."""
    if n == 0:
        return [[ring.inv(twist_scalar(ring, g, twist))]] if twist else [[ring.one]]
    M = rho_matrix_from_inverse(ring, exact_entries(ring, g), n)
    if twist is not None and (twist.l or twist.is_character):
        s = ring.inv(twist_scalar(ring, g, twist))
        M = [[ring.mul(s, x) for x in row] for row in M]
    return [list(col) for col in zip(*M)]


def _apply(ring, M, v):
    out = []
    for row in M:
        acc = ring.zero
        for x, y in zip(row, v):
            if not ring.is_zero(x) and not ring.is_zero(y):
                acc = ring.add(acc, ring.mul(x, y))
        out.append(acc)
    return tuple(out)


def rho_apply(g, P: HomPoly, twist: Twist | None = None) -> HomPoly:
    if P.n == 0 and twist is None:
        return P
    return HomPoly(P.n, _apply(P.ring, rho_matrix(P.ring, g, P.n, twist), P.coeffs), P.ring)


def rho_dual_apply(g, phi: DualVec, twist: Twist | None = None) -> DualVec:
    if phi.n == 0 and twist is None:
        return phi
    return DualVec(phi.n, _apply(phi.ring, rho_dual_matrix(phi.ring, g, phi.n, twist), phi.coeffs),
                   phi.ring)


# -- the set D and alpha --------------------------------------------------------------

def dee_contains(n: int, p: int) -> bool:
    """n in {m, m p^r - 1 : 0 < m < p, r > 0}."""
    if 0 < n < p:
        return True
    m = n + 1
    r = 0
    while m % p == 0:
        m //= p
        r += 1
    return r > 0 and 0 < m < p


def binomials_nonzero_mod_p(n: int, p: int) -> bool:
    return all(math.comb(n, i) % p for i in range(n + 1))


def alpha(n: int, p: int) -> int:
    if n < 1:
        raise ValueError("alpha is defined for n >= 1")
    if n < p:
        return n
    # largest m p^r - 1 <= n: take r maximal with p^r <= n + 1, then m = (n + 1) // p^r < p
    pr = p
    while pr * p <= n + 1:
        pr *= p
    return (n + 1) // pr * pr - 1


def dee_table(p: int, max_n: int):
    return [(n, dee_contains(n, p)) for n in range(1, max_n + 1)]


# -- proof matrices and the cyclicity closure ------------------------------------------

def proof_matrices(a: TruncatedSeries):
    """(gamma_a, delta_a) with gamma_a^(-1) = (a 1; 1 0), delta_a^(-1) = (a 1; 0 1)."""
    F = a.ring
    one, zero = TruncatedSeries.const(F, 1), TruncatedSeries.zero(F)
    g_inv = Matrix2(a, one, one, zero)
    gamma = Matrix2(zero, one, one, -a).with_inverse(g_inv)
    if a.is_indistinguishable_from_zero():
        raise NotAUnit("delta_a needs a != 0")
    d_inv = Matrix2(a, one, zero, one)
    ainv = a.inv()
    delta = Matrix2(ainv, -ainv, zero, one).with_inverse(d_inv)
    return gamma, delta


def default_samples(F: GaloisRing):
    pi = TruncatedSeries.pi(F)
    one = TruncatedSeries.const(F, 1)
    out = [TruncatedSeries.const(F, c) for c in range(1, F.size)]
    for s in (one + pi, one - pi, pi + one, pi - one):
        if s not in out:
            out.append(s)
    return out


@dataclass
class ClosureResult:
    n: int
    alpha: int
    dimension: int
    basis: list            # accepted vectors (coefficient tuples in ``ring``)
    words: list            # words[i] is a tuple of generator indices producing basis[i]
    generators: list       # Matrix2 group elements, indexed by the words
    ring: object

    @property
    def complete(self):
        return self.dimension == self.n + 1


def generator_vector(ring, n):
    a = alpha(n, ring.characteristic) if n > 0 else 0
    return a, HomPoly.monomial(ring, n, a)


def orbit_closure(ring, n, start, generators, twist=None, max_word=None):
    """Span of the orbit of ``start`` under words in ``generators`` (to a fixed point)."""
    mats = [rho_matrix(ring, g, n, twist) for g in generators]
    span = SpanBuilder(ring, n + 1)
    words = []
    queue = [(tuple(start), ())]
    span.add(start)
    words.append(())
    while queue:
        v, w = queue.pop(0)
        if max_word is not None and len(w) >= max_word:
            continue
        for k, M in enumerate(mats):
            img = _apply(ring, M, v)
            if span.add(img):
                words.append(w + (k,))
                queue.append((img, w + (k,)))
        if len(span) == n + 1:
            break
    return span, words


def cyclicity_closure(p: int, f: int, n: int, twist: Twist | None = None, sample_set=None,
                      ring=None) -> ClosureResult:
    """Closure of X^alpha Y^(n - alpha) under rho_n(gamma_a), rho_n(delta_a), a in the samples."""
    F = FiniteField(p, f)
    ring = ring or FunctionField(F, "pi")
    if n == 0:
        return ClosureResult(0, 0, 1, [(ring.one,)], [()], [], ring)
    samples = sample_set if sample_set is not None else default_samples(F)
    if not samples:
        raise ValueError("sample set must be nonempty")
    gens = []
    for a in samples:
        gamma, delta = proof_matrices(a)
        gens.extend([gamma, delta])
    a_exp, start = generator_vector(ring, n)
    span, words = orbit_closure(ring, n, start.coeffs, gens, twist)
    return ClosureResult(n, a_exp, len(span), span.originals, words, gens, ring)


def closure_from(ring, n, start: HomPoly, generators, twist=None):
    span, words = orbit_closure(ring, n, start.coeffs, generators, twist)
    return len(span), span


# -- subrepresentation and irreducibility probes --------------------------------------

def probe_group_elements(F: GaloisRing, rng: random.Random | None = None, extra=3):
    """Sample pool: gamma_a, delta_a, diag(pi, 1) and a few random integral matrices."""
    from .tree import random_integral_matrix
    rng = rng or random.Random(0)
    pool = []
    for a in default_samples(F):
        pool.extend(proof_matrices(a))
    pi, one = TruncatedSeries.pi(F), TruncatedSeries.const(F, 1)
    pool.append(Matrix2.diag(pi, one).with_inverse(Matrix2.diag(pi.inv(), one)))
    for _ in range(extra):
        pool.append(random_integral_matrix(F, rng, prec=3))
    return pool


def subrep_probe(p: int, n: int, f: int = 1, group_samples=None):
    """Check that span{X^(pj) Y^(n-pj)} is stable under sampled rho_n(g)."""
    if n == 0 or n % p:
        raise NotApplicable(f"p={p} does not divide n={n}")
    F = FiniteField(p, f)
    ring = FunctionField(F, "pi")
    pool = group_samples or probe_group_elements(F)
    basis = [HomPoly.monomial(ring, n, p * j) for j in range(n // p + 1)]
    invariant = True
    for g in pool:
        M = rho_matrix(ring, g, n)
        for v in basis:
            img = _apply(ring, M, v.coeffs)
            if any(not ring.is_zero(x) for i, x in enumerate(img) if i % p):
                invariant = False
    return invariant, len(basis)


def gl2_elements(F: GaloisRing):
    els = []
    for a, b, c, d in itertools.product(range(F.size), repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)) != 0:
            els.append((a, b, c, d))
    return els


@dataclass
class ProbeVerdict:
    irreducible: bool
    witness: list | None    # basis of a proper invariant subspace, when found
    group_order: int
    vectors_checked: int


def irreducibility_probe(F: GaloisRing, n: int, twist: Twist | None = None,
                         max_work: int = 5_000_000) -> ProbeVerdict:
    """Exhaustive search for a proper G(F)-invariant subspace of V_n(F).

    Every nonzero vector (up to scalars) is closed under the full group; the
    representation is irreducible exactly when every such cyclic subspace is
    the whole space.
    """
    if F.q > 4:
        raise TooLarge(f"q={F.q} exceeds the desk-scale bound q <= 4")
    group = gl2_elements(F)
    nvec = (F.size ** (n + 1) - 1) // (F.size - 1)
    if nvec * len(group) * (n + 1) ** 2 > max_work:
        raise TooLarge(f"{nvec} vectors x {len(group)} group elements is too much work")
    mats = []
    for g in group:
        a, b, c, d = g
        dinv = F.inv(F.sub(F.mul(a, d), F.mul(b, c)))
        inv = (F.mul(d, dinv), F.neg(F.mul(b, dinv)), F.neg(F.mul(c, dinv)), F.mul(a, dinv))
        M = rho_matrix_from_inverse(F, inv, n) if n else [[1]]
        s = twist_scalar(F, g, twist)
        if s != 1:
            M = [[F.mul(s, x) for x in row] for row in M]
        mats.append(M)
    checked = 0
    for v in itertools.product(range(F.size), repeat=n + 1):
        first = next((x for x in v if x), None)
        if first != 1:
            continue
        checked += 1
        span = SpanBuilder(F, n + 1)
        span.add(v)
        frontier = [v]
        while frontier and len(span) < n + 1:
            w = frontier.pop()
            for M in mats:
                img = _apply(F, M, w)
                if span.add(img):
                    frontier.append(img)
        if len(span) < n + 1:
            return ProbeVerdict(False, span.originals, len(group), checked)
    return ProbeVerdict(True, None, len(group), checked)
