"""The Bruhat-Tits tree of GL2(K_inf), K_inf = F_q((pi)).

A vertex is the homothety class of the O_inf-lattice spanned by the columns of
``[[pi^n, u], [0, 1]]``; it is stored as the pair (n, u) with u reduced modulo
pi^n, i.e. only the terms pi^j with j < n are kept.  Equivalently a vertex is
the closed disk u + pi^n O_inf of K_inf; the parent of a disk (level n - 1) is
the next larger disk and the end "infinity" is reached by walking parents.

Every edge joins a disk to its parent, so levels of adjacent vertices differ by
exactly one.  Edges are oriented; the level-increasing orientation is the
storage orientation.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .algebra import FiniteField, Matrix2, TruncatedSeries, div_to
from .errors import NotInvertible, PrecisionExhausted

DEFAULT_MAX_RADIUS = 8


@dataclass(frozen=True, order=False)
class TreeVertex:
    level: int
    u: TruncatedSeries

    def __post_init__(self):
        if not self.u.is_exact:
            raise PrecisionExhausted("vertex representatives must be exact")
        if self.u.coeffs and self.u.degree_top() >= self.level:
            object.__setattr__(self, "u", self.u.reduce_mod(self.level))

    @property
    def field(self):
        return self.u.ring

    def sort_key(self):
        return (self.level, self.u.start, self.u.coeffs)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def matrix(self) -> Matrix2:
        F = self.field
        m = Matrix2(TruncatedSeries.monomial(F, self.level), self.u,
                    TruncatedSeries.zero(F), TruncatedSeries.const(F, 1))
        minv = Matrix2(TruncatedSeries.monomial(F, -self.level), -self.u.shift(-self.level),
                       TruncatedSeries.zero(F), TruncatedSeries.const(F, 1))
        return m.with_inverse(minv)

    def node_id(self) -> str:
        """Stable identifier ``v:n:u-hex``."""
        if not self.u.coeffs:
            body = "0"
        else:
            sep = "" if self.field.size <= 16 else "-"
            body = f"{self.u.start}." + sep.join(format(a, "x") for a in self.u.coeffs)
        return f"v:{self.level}:{body}"

    def __repr__(self):
        return f"({self.level}, {self.u!r})"


def vertex(F, level: int, terms=None) -> TreeVertex:
    """Build (level, u) from a dict {exponent: coefficient} or a series."""
    if isinstance(terms, TruncatedSeries):
        u = terms
    else:
        u = TruncatedSeries.from_dict(F, dict(terms or {}))
    return TreeVertex(level, u)


def standard_vertex(F) -> TreeVertex:
    return TreeVertex(0, TruncatedSeries.zero(F))


@dataclass(frozen=True)
class TreeEdge:
    origin: TreeVertex
    terminus: TreeVertex

    def __post_init__(self):
        if abs(self.origin.level - self.terminus.level) != 1 or not _adjacent(self.origin, self.terminus):
            raise ValueError(f"{self.origin} and {self.terminus} are not adjacent")

    def reverse(self) -> "TreeEdge":
        return TreeEdge(self.terminus, self.origin)

    def __neg__(self):
        return self.reverse()

    @property
    def is_upward(self) -> bool:
        return self.terminus.level > self.origin.level

    def canonical(self) -> tuple["TreeEdge", int]:
        """Level-increasing orientation together with the sign +1 / -1."""
        return (self, 1) if self.is_upward else (self.reverse(), -1)

    def sort_key(self):
        return (self.origin.sort_key(), self.terminus.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"{self.origin!r}->{self.terminus!r}"


def parent(v: TreeVertex) -> TreeVertex:
    return TreeVertex(v.level - 1, v.u.reduce_mod(v.level - 1))


def children(v: TreeVertex) -> list[TreeVertex]:
    F = v.field
    return [TreeVertex(v.level + 1, v.u + TruncatedSeries.monomial(F, v.level, c) if c else v.u)
            for c in range(F.size)]


def _adjacent(v, w) -> bool:
    if v.level + 1 == w.level:
        v, w = w, v
    if w.level + 1 != v.level:
        return False
    return parent(v) == w


def neighbors(v: TreeVertex) -> list[TreeVertex]:
    """The q + 1 neighbours: the parent first, then the q children."""
    return [parent(v)] + children(v)


def outgoing_edges(v: TreeVertex) -> list[TreeEdge]:
    return [TreeEdge(v, w) for w in neighbors(v)]


def common_level(v: TreeVertex, w: TreeVertex) -> int:
    """Level of the smallest disk containing both v and w."""
    m = min(v.level, w.level)
    diff = v.u - w.u
    if diff.coeffs:
        m = min(m, diff.start)
    return m


def distance(v: TreeVertex, w: TreeVertex) -> int:
    m = common_level(v, w)
    return (v.level - m) + (w.level - m)


def ancestor(v: TreeVertex, level: int) -> TreeVertex:
    return TreeVertex(level, v.u.reduce_mod(level))


def path(v: TreeVertex, w: TreeVertex) -> list[TreeVertex]:
    """Vertices of the geodesic from v to w, endpoints included."""
    m = common_level(v, w)
    up = [ancestor(v, k) for k in range(v.level, m - 1, -1)]
    down = [ancestor(w, k) for k in range(m + 1, w.level + 1)]
    return up + down


def ball(center: TreeVertex, radius: int, max_radius: int = DEFAULT_MAX_RADIUS):
    """Vertices within ``radius`` of ``center`` and the oriented edges among them."""
    if radius > max_radius:
        raise ValueError(f"radius {radius} exceeds the configured maximum {max_radius}")
    seen = {center: 0}
    order = [center]
    queue = deque([center])
    while queue:
        v = queue.popleft()
        if seen[v] == radius:
            continue
        for w in neighbors(v):
            if w not in seen:
                seen[w] = seen[v] + 1
                order.append(w)
                queue.append(w)
    edges = []
    for v in order:
        for w in neighbors(v):
            if w in seen:
                edges.append(TreeEdge(v, w))
    return order, edges


def ball_size(q: int, radius: int) -> int:
    if radius == 0:
        return 1
    return 1 + (q + 1) * (q ** radius - 1) // (q - 1)


# -- the group action -----------------------------------------------------------

def _pivot_column(M: Matrix2):
    """Column whose bottom entry has minimal (certified) valuation."""
    c, d = M.c, M.d
    if c.is_exact_zero() and d.is_exact_zero():
        raise NotInvertible("matrix with zero bottom row")
    if c.coeffs and (not d.coeffs and (d.is_exact_zero() or d.absprec >= c.start)
                     or d.coeffs and c.start <= d.start):
        return M.a, c
    if d.coeffs and (not c.coeffs and (c.is_exact_zero() or c.absprec >= d.start)
                     or c.coeffs and d.start < c.start):
        return M.b, d
    raise PrecisionExhausted("cannot certify the pivot of the bottom row")


def vertex_normal_form(M: Matrix2) -> TreeVertex:
    """The vertex (n, u) equal to the lattice class of the columns of M.

    Column operations by GL2(O_inf) clear the bottom row except for the pivot
    of least valuation; scaling by that pivot gives [[pi^n, u], [0, 1]] with
    n = v(det M) - 2 v(pivot) and u = top / pivot mod pi^n.
    """
    top, bottom = _pivot_column(M)
    det = M.det()
    if det.is_exact_zero():
        raise NotInvertible("singular matrix")
    if not det.coeffs:
        raise PrecisionExhausted("determinant not certified nonzero")
    n = det.start - 2 * bottom.start
    if top.is_exact_zero():
        return TreeVertex(n, TruncatedSeries.zero(M.ring))
    u = div_to(top, bottom, n).reduce_mod(n)
    return TreeVertex(n, u)


def act_vertex(g: Matrix2, v: TreeVertex) -> TreeVertex:
    return vertex_normal_form(g @ v.matrix())


def act_edge(g: Matrix2, e: TreeEdge) -> TreeEdge:
    return TreeEdge(act_vertex(g, e.origin), act_vertex(g, e.terminus))


# -- ends ---------------------------------------------------------------------------

INFINITY = "infinity"


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of P^1(K_inf): ``z=None`` is the end at infinity."""

    z: TruncatedSeries | None = None

    @property
    def is_infinity(self):
        return self.z is None

    def __repr__(self):
        return "inf" if self.z is None else f"<{self.z!r}>"


def in_disk(b: BoundaryPoint, v: TreeVertex) -> bool:
    if b.is_infinity:
        return False
    diff = b.z - v.u
    if diff.coeffs and diff.start < v.level:
        return False
    if diff.absprec is not None and diff.absprec < v.level:
        raise PrecisionExhausted(f"boundary point known to precision {diff.absprec} < level {v.level}")
    return True


def next_step(v: TreeVertex, b: BoundaryPoint) -> TreeVertex:
    """Neighbour of v on the half-line from v towards the end b."""
    if in_disk(b, v):
        if b.z.absprec is not None and b.z.absprec < v.level + 1:
            raise PrecisionExhausted("boundary point not resolved at the next level")
        return TreeVertex(v.level + 1, b.z.reduce_mod(v.level + 1))
    return parent(v)


def boundary_in_U(b: BoundaryPoint, e: TreeEdge) -> bool:
    """Whether the end b lies in U(e), the ends of half-lines through e."""
    return next_step(e.origin, b) == e.terminus


def random_boundary_point(F, rng: random.Random, lo=-4, hi=8, p_inf=0.1) -> BoundaryPoint:
    if rng.random() < p_inf:
        return BoundaryPoint(None)
    start = rng.randint(lo, 2)
    terms = {e: rng.randrange(F.size) for e in range(start, hi)}
    return BoundaryPoint(TruncatedSeries.from_dict(F, terms, absprec=hi))


# -- edge index set of the covering ------------------------------------------------

def edge_index(e: TreeEdge) -> tuple[int, TruncatedSeries]:
    """Unoriented edge -> (n, z mod pi^(n+1)) with n the lower level."""
    up, _ = e.canonical()
    return up.origin.level, up.terminus.u


def edge_from_index(n: int, z: TruncatedSeries) -> TreeEdge:
    child = TreeVertex(n + 1, z.reduce_mod(n + 1))
    return TreeEdge(parent(child), child)


# -- random data ------------------------------------------------------------------

def random_vertex(F, rng: random.Random, center=None, radius=4) -> TreeVertex:
    v = center or standard_vertex(F)
    for _ in range(rng.randint(0, radius)):
        v = rng.choice(neighbors(v))
    return v


def random_integral_matrix(F, rng: random.Random, prec=6) -> Matrix2:
    """Random element of GL2(O_inf) with exact polynomial entries."""
    while True:
        ent = [TruncatedSeries.from_dict(F, {i: rng.randrange(F.size) for i in range(prec)})
               for _ in range(4)]
        m = Matrix2(*ent)
        det = m.det()
        if det.coeffs and det.start == 0:
            return m


def random_group_element(F, rng: random.Random, prec=5, spread=2) -> Matrix2:
    """Random element of GL2(K_inf) with exact entries: pi-power twists of integral matrices."""
    m = random_integral_matrix(F, rng, prec)
    k = rng.randint(-spread, spread)
    t = Matrix2.diag(TruncatedSeries.monomial(F, k), TruncatedSeries.const(F, 1))
    m2 = random_integral_matrix(F, rng, prec)
    return m @ t @ m2


# -- export ---------------------------------------------------------------------------

def ball_to_dot(vertices, edges, name="ball") -> str:
    lines = [f"digraph {name} {{"]
    for v in sorted(vertices):
        lines.append(f'  "{v.node_id()}" [label="{v.node_id()}"];')
    seen = set()
    for e in sorted(edges):
        up, _ = e.canonical()
        if up in seen:
            continue
        seen.add(up)
        lines.append(f'  "{up.origin.node_id()}" -> "{up.terminus.node_id()}" [orient="up"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "TreeVertex", "TreeEdge", "BoundaryPoint", "FiniteField", "vertex", "standard_vertex",
    "neighbors", "children", "parent", "outgoing_edges", "distance", "path", "ball", "ball_size",
    "vertex_normal_form", "act_vertex", "act_edge", "boundary_in_U", "next_step", "in_disk",
    "edge_index", "edge_from_index", "random_vertex", "random_boundary_point",
    "random_integral_matrix", "random_group_element", "ball_to_dot", "common_level", "ancestor",
]
