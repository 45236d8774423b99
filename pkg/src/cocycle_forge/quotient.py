"""Arithmetic subgroups of GL2(F_q[t]) and their quotient graphs on the tree.

Every vertex of the tree is GL2(A)-equivalent to exactly one vertex of the
ray Lambda_m = (m, 0), m >= 0 (the "type" of the vertex), and every edge to
exactly one e_m = (Lambda_m -> Lambda_(m+1)) or its reverse.  The stabilizers
are explicit:

    G_0 = GL2(F_q),   G_m = {(a 0; c d) : a, d in F_q^*, deg c <= m}  (m >= 1),

and the stabilizer of e_m is G_m for m >= 1 and the constant lower triangular
group for m = 0.  A congruence subgroup Gamma contains the principal
congruence subgroup of its level g, so Gamma-orbits of vertices of type m are
the double cosets  Gamma_bar \\ H / G_m_bar  inside H = {x in GL2(A/g) : det x
in F_q^*}.  All witnesses produced here are exact elements of GL2(A); they are
found by a finite search over G_m and verified against the tree action.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import GaloisRing, Poly, PolyMatrix, TruncatedSeries
from .algebra.poly import polys_of_degree_at_most
from .errors import DegreeBoundTooSmall, DepthTooSmall, NotEquivalent, NotInvertible
from .tree import TreeEdge, TreeVertex, act_edge, act_vertex, outgoing_edges

KINDS = ("full", "gamma0", "gamma1", "gammaFull")
CUSP_PERSISTENCE = 3


@dataclass(frozen=True)
class ArithmeticGroup:
    F: GaloisRing
    kind: str = "full"
    level: Poly | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == "full":
            object.__setattr__(self, "level", None)
        elif self.level is None or self.level.degree < 1 or self.level.lead() != 1:
            raise ValueError("congruence subgroups need a monic nonconstant level")

    @classmethod
    def parse(cls, F, text: str) -> "ArithmeticGroup":
        """``full`` or ``kind:poly``, e.g. ``gamma0:t^3+t+1``."""
        if text == "full":
            return cls(F)
        kind, _, lev = text.partition(":")
        return cls(F, kind, Poly.parse(F, lev))

    @property
    def name(self) -> str:
        return "full" if self.kind == "full" else f"{self.kind}:{self.level.format()}"

    @property
    def modulus(self) -> Poly:
        return self.level if self.level is not None else Poly.const(self.F, 1)


def group_member(gamma: PolyMatrix, G: ArithmeticGroup) -> bool:
    det = gamma.det()
    if det.degree != 0:
        raise NotInvertible(f"det {det.format()} is not in F_q^*")
    if G.kind == "full":
        return True
    g = G.level
    a, b, c, d = ((x % g) for x in gamma.entries())
    one = Poly.const(G.F, 1)
    if G.kind == "gamma0":
        return not c
    if G.kind == "gamma1":
        return not c and a == one and d == one
    return not b and not c and a == one and d == one


# -- GL2(A) reduction theory ------------------------------------------------------------

def _tpoly_part(u: TruncatedSeries) -> Poly:
    """Terms pi^e with e <= 0 of u, as a polynomial in t = 1/pi."""
    coeffs = {}
    for i, a in enumerate(u.coeffs):
        e = u.start + i
        if e <= 0 and a:
            coeffs[-e] = a
    if not coeffs:
        return Poly(u.ring)
    return Poly(u.ring, [coeffs.get(j, 0) for j in range(max(coeffs) + 1)])


def _apply(gamma: PolyMatrix, v: TreeVertex) -> TreeVertex:
    return act_vertex(gamma.to_matrix2(), v)


def ray_vertex(F, m: int) -> TreeVertex:
    return TreeVertex(m, TruncatedSeries.zero(F))


def ray_edge(F, m: int) -> TreeEdge:
    return TreeEdge(ray_vertex(F, m), ray_vertex(F, m + 1))


def reduce_vertex(v: TreeVertex):
    """(m, gamma) with gamma in GL2(A) and gamma . v = Lambda_m."""
    F = v.field
    W = PolyMatrix.from_ints(F, 0, 1, 1, 0)
    gamma = PolyMatrix.identity(F)
    while True:
        P = _tpoly_part(v.u)
        if P:
            T = PolyMatrix(Poly.const(F, 1), -P, Poly(F), Poly.const(F, 1))
            v = _apply(T, v)
            gamma = T @ gamma
        if not v.u.coeffs:
            if v.level < 0:
                v = _apply(W, v)
                gamma = W @ gamma
            return v.level, gamma
        v = _apply(W, v)
        gamma = W @ gamma


def reduce_edge(e: TreeEdge):
    """(m, gamma, sign) with gamma . e = e_m (sign +1) or -e_m (sign -1)."""
    F = e.origin.field
    mo, go = reduce_vertex(e.origin)
    mt, _ = reduce_vertex(e.terminus)
    if mt == mo - 1:
        m, gamma, _ = reduce_edge(e.reverse())
        return m, gamma, -1
    if mt != mo + 1:
        raise AssertionError("adjacent vertices must have adjacent types")
    if mo == 0:
        w = _apply(go, e.terminus)
        if w.level == -1:
            k = PolyMatrix.from_ints(F, 0, 1, 1, 0)
        else:
            k = PolyMatrix.from_ints(F, 1, F.neg(w.u.coeff(0)), 0, 1)
        go = k @ go
    return mo, go, 1


def vertex_type(v: TreeVertex) -> int:
    return reduce_vertex(v)[0]


def full_stabilizer_order(q: int, m: int) -> int:
    if m == 0:
        return (q * q - 1) * (q * q - q)
    return (q - 1) ** 2 * q ** (m + 1)


def edge_stabilizer_order(q: int, m: int) -> int:
    return (q - 1) ** 2 * q ** (m + 1)


def _lower(F, cdeg: int):
    units = [Poly.const(F, a) for a in range(1, F.size) if F.is_unit(a)]
    out = []
    for c in polys_of_degree_at_most(F, cdeg):
        for a in units:
            for d in units:
                out.append(PolyMatrix(a, Poly(F), c, d))
    return out


def _gl2_const(F):
    out = []
    for a in range(F.size):
        for b in range(F.size):
            for c in range(F.size):
                for d in range(F.size):
                    if F.sub(F.mul(a, d), F.mul(b, c)):
                        out.append(PolyMatrix.from_ints(F, a, b, c, d))
    return out


def vertex_stabilizer_elements(F, m: int):
    """All of Stab_GL2(A)(Lambda_m)."""
    return _gl2_const(F) if m == 0 else _lower(F, m)


def edge_stabilizer_elements(F, m: int):
    """All of Stab_GL2(A)(e_m)."""
    return _lower(F, m)


# -- residues modulo the level -------------------------------------------------------------

class _Residues:
    """Arithmetic in GL2(A/g) and the double-coset keys for a congruence kind."""

    def __init__(self, G: ArithmeticGroup):
        self.G = G
        self.F = G.F
        self.g = G.modulus
        self.D = self.g.degree
        self.elements = list(polys_of_degree_at_most(self.F, self.D - 1))
        self.units = [r for r in self.elements if r and (r.gcd(self.g).degree == 0)]
        self._keys = {}
        self._reps = {}

    def red(self, x: PolyMatrix):
        g = self.g
        return tuple(e % g for e in x.entries())

    def mul(self, x, y):
        g = self.g
        a, b, c, d = x
        e, f, h, k = y
        return ((a * e + b * h) % g, (a * f + b * k) % g, (c * e + d * h) % g, (c * f + d * k) % g)

    def inv(self, x):
        if self.D == 0:
            return x
        a, b, c, d = x
        det = (a * d - b * c) % self.g
        if det.degree != 0:
            raise NotInvertible("residue matrix is not in H")
        u = self.F.inv(det.lead())
        g = self.g
        return (d.scale(u) % g, (-b).scale(u) % g, (-c).scale(u) % g, a.scale(u) % g)

    def in_gamma_bar(self, x) -> bool:
        kind = self.G.kind
        if kind == "full":
            return True
        a, b, c, d = x
        one = Poly.const(self.F, 1) % self.g
        if kind == "gamma0":
            return not c
        if kind == "gamma1":
            return not c and a == one and d == one
        return not b and not c and a == one and d == one

    def _right_coset_key(self, x):
        """Canonical label of Gamma_bar . x."""
        kind = self.G.kind
        if kind == "full":
            return ()
        a, b, c, d = x
        if kind == "gamma0":
            g = self.g
            return min(((u * c) % g, (u * d) % g) for u in self.units)
        if kind == "gamma1":
            return (c, d, ((a * d - b * c) % self.g))
        return x

    def key(self, x, kgroup: tuple):
        """Canonical label of the double coset Gamma_bar x K_bar."""
        memo = (x, kgroup)
        if memo in self._keys:
            return self._keys[memo]
        best = min(self._right_coset_key(self.mul(x, k)) for k in self.kreps(kgroup))
        self._keys[memo] = best
        return best

    def kreps(self, kgroup: tuple):
        """Elements of GL2(A) whose residues cover K_bar, K = vertex or edge stabilizer."""
        if kgroup in self._reps:
            return self._reps[kgroup][1]
        what, m = kgroup
        F = self.F
        if what == "v" and m == 0:
            lifts = _gl2_const(F)
        else:
            lifts = _lower(F, min(m, max(self.D - 1, 0)))
        seen = {}
        for k in lifts:
            seen.setdefault(self.red(k), k)
        self._reps[kgroup] = (list(seen.values()), list(seen.keys()))
        return self._reps[kgroup][1]

    def klifts(self, kgroup: tuple):
        self.kreps(kgroup)
        return self._reps[kgroup][0]


def _kgroup_vertex(m):
    return ("v", m)


def _kgroup_edge(m):
    return ("e", m)


@lru_cache(maxsize=64)
def _residues(G: ArithmeticGroup) -> _Residues:
    return _Residues(G)


def _connector(G: ArithmeticGroup, gamma_from: PolyMatrix, gamma_to: PolyMatrix, kgroup):
    """sigma in Gamma with sigma = gamma_to^-1 k gamma_from for some k in the stabilizer, or None."""
    R = _residues(G)
    xf, xt_inv = R.red(gamma_from), R.inv(R.red(gamma_to))
    for k in R.klifts(kgroup):
        if R.in_gamma_bar(R.mul(R.mul(xt_inv, R.red(k)), xf)):
            sigma = gamma_to.inverse() @ k @ gamma_from
            return sigma
    return None


def _check_bound(sigma: PolyMatrix, degree_bound, pair):
    if degree_bound is not None and sigma.max_degree() > degree_bound:
        raise DegreeBoundTooSmall(
            f"witness of degree {sigma.max_degree()} exceeds bound {degree_bound}", pair)


def vertex_key(G: ArithmeticGroup, v: TreeVertex):
    m, gamma = reduce_vertex(v)
    R = _residues(G)
    return (m, R.key(R.inv(R.red(gamma)), _kgroup_vertex(m)))


def edge_key(G: ArithmeticGroup, e: TreeEdge):
    """((m, label), sign): the orbit of e or of -e among upward edges of type m."""
    m, gamma, sign = reduce_edge(e)
    R = _residues(G)
    return (m, R.key(R.inv(R.red(gamma)), _kgroup_edge(m))), sign


def equiv_witness(v: TreeVertex, w: TreeVertex, G: ArithmeticGroup, degree_bound=None) -> PolyMatrix:
    """gamma in Gamma with gamma . v = w, or NotEquivalent.

    Non-equivalence is certified: distinct types are never GL2(A)-equivalent,
    and within a type the search runs over all of Stab(Lambda_m) modulo the level.
    """
    if v == w:
        return PolyMatrix.identity(v.field)
    mv, gv = reduce_vertex(v)
    mw, gw = reduce_vertex(w)
    if mv != mw:
        raise NotEquivalent(f"{v!r} has type {mv}, {w!r} has type {mw}")
    sigma = _connector(G, gv, gw, _kgroup_vertex(mv))
    if sigma is None:
        raise NotEquivalent(f"{v!r} and {w!r} lie in different {G.name}-orbits")
    _check_bound(sigma, degree_bound, (v, w))
    return sigma


def edge_equiv_witness(e: TreeEdge, f: TreeEdge, G: ArithmeticGroup):
    """(gamma, sign) with gamma . e = f (sign +1) or gamma . e = -f (sign -1)."""
    me, ge, se = reduce_edge(e)
    mf, gf, sf = reduce_edge(f)
    if me != mf:
        raise NotEquivalent("edges of different types")
    sigma = _connector(G, ge, gf, _kgroup_edge(me))
    if sigma is None:
        raise NotEquivalent(f"edges in different {G.name}-orbits")
    return sigma, se * sf


def stabilizer(v: TreeVertex, G: ArithmeticGroup, degree_bound=None) -> list[PolyMatrix]:
    """The full (finite) stabilizer of v in Gamma."""
    m, gamma = reduce_vertex(v)
    gi = gamma.inverse()
    out = []
    for k in vertex_stabilizer_elements(v.field, m):
        s = gi @ k @ gamma
        if group_member(s, G):
            _check_bound(s, degree_bound, (v, v))
            out.append(s)
    return sorted(out)


def edge_stabilizer(e: TreeEdge, G: ArithmeticGroup) -> list[PolyMatrix]:
    m, gamma, _ = reduce_edge(e)
    gi = gamma.inverse()
    out = []
    for k in edge_stabilizer_elements(e.origin.field, m):
        s = gi @ k @ gamma
        if group_member(s, G):
            out.append(s)
    return sorted(out)


def _stabilizer_order(G, gamma, kgroup, full_order):
    R = _residues(G)
    x, xi = R.red(gamma), R.inv(R.red(gamma))
    kb = R.kreps(kgroup)
    hits = sum(1 for k in kb if R.in_gamma_bar(R.mul(R.mul(xi, k), x)))
    return full_order // len(kb) * hits


# -- the quotient graph ------------------------------------------------------------------

@dataclass
class VertexOrbit:
    id: int
    type: int
    rep: TreeVertex
    reducer: PolyMatrix
    key: tuple
    stabilizer_order: int
    boundary: bool
    cusp: int | None = None


@dataclass
class EdgeOrbit:
    id: int
    type: int
    rep: TreeEdge            # upward (type m -> m+1); origin is the rep of the origin orbit
    reducer: PolyMatrix
    key: tuple
    origin: int
    terminus: int
    terminus_witness: PolyMatrix   # maps rep.terminus to the rep of the terminus orbit
    stabilizer_order: int
    reversal_witness: PolyMatrix | None = None
    role: str = "finite"     # finite | first | ray
    cusp: int | None = None

    @property
    def reversed_by_gamma(self):
        return self.reversal_witness is not None


@dataclass
class Incidence:
    """An outgoing tree edge at a vertex representative: edge = witness . (sign * rep)."""
    edge: TreeEdge
    orbit: int
    sign: int
    witness: PolyMatrix


@dataclass
class Cusp:
    id: int
    first_edge: int
    vertices: list          # ray vertex orbit ids, outward
    edges: list             # ray edge orbit ids after the first edge, outward
    onset: int              # type of the first ray vertex


@dataclass
class QuotientGraph:
    group: ArithmeticGroup
    depth: int
    vertices: list
    edges: list
    incidences: dict
    cusps: list
    unresolved: list = field(default_factory=list)   # boundary vertices not on a detected ray
    persistence: int = CUSP_PERSISTENCE

    @property
    def finite_vertices(self):
        return [v.id for v in self.vertices if v.cusp is None]

    @property
    def finite_edges(self):
        return [e.id for e in self.edges if e.role == "finite"]

    @property
    def first_edges(self):
        return [c.first_edge for c in self.cusps]

    def require_resolved(self):
        if self.unresolved:
            raise DepthTooSmall(
                f"depth {self.depth} leaves boundary orbits {self.unresolved} off every cusp ray")

    def vertex_by_key(self, key):
        return next((v for v in self.vertices if v.key == key), None)

    def edge_by_key(self, key):
        return next((e for e in self.edges if e.key == key), None)

    def to_json(self) -> dict:
        return {
            "format": "cocycle-forge/1",
            "kind": "quotient",
            "gamma": self.group.name,
            "q": self.group.F.q,
            "depth": self.depth,
            "betti1": betti1(self),
            "vertices": [{
                "id": v.id, "type": v.type, "rep": v.rep.node_id(),
                "stabilizer_order": v.stabilizer_order, "boundary": v.boundary,
                "cusp": v.cusp} for v in self.vertices],
            "edges": [{
                "id": e.id, "type": e.type, "origin": e.origin, "terminus": e.terminus,
                "rep": [e.rep.origin.node_id(), e.rep.terminus.node_id()],
                "witness": e.terminus_witness.format(),
                "reversed": e.reversed_by_gamma, "stabilizer_order": e.stabilizer_order,
                "role": e.role, "cusp": e.cusp} for e in self.edges],
            "cusps": [{"id": c.id, "first_edge": c.first_edge, "vertices": c.vertices,
                       "onset": c.onset} for c in self.cusps],
            "unresolved": self.unresolved,
        }

    def to_dot(self) -> str:
        lines = [f'graph "{self.group.name}" {{']
        for v in self.vertices:
            shape = "box" if v.cusp is not None else "ellipse"
            lines.append(f'  o{v.id} [label="o{v.id} t{v.type} |{v.stabilizer_order}|", shape={shape}];')
        for e in self.edges:
            style = {"finite": "solid", "first": "bold", "ray": "dashed"}[e.role]
            lines.append(f'  o{e.origin} -- o{e.terminus} [label="e{e.id}", style={style}, '
                         f'witness="{e.terminus_witness.format()}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def quotient_graph(G: ArithmeticGroup, depth: int, persistence: int = CUSP_PERSISTENCE) -> QuotientGraph:
    """Gamma-orbits of vertices of type <= depth and of edges between them.

    The explored region (all vertices of type <= depth) contains the ball of
    radius ``depth`` around the standard vertex.
    """
    if not 0 <= depth <= 8:
        raise ValueError("depth must lie in [0, 8]")
    F = G.F
    q = F.q
    R = _residues(G)

    # vertex orbits, discovered through neighbors of known representatives
    vertices = []
    by_key = {}
    queue = deque()

    def add_vertex(v):
        m, gamma = reduce_vertex(v)
        key = (m, R.key(R.inv(R.red(gamma)), _kgroup_vertex(m)))
        if key in by_key or m > depth:
            return
        order = _stabilizer_order(G, gamma, _kgroup_vertex(m), full_stabilizer_order(q, m))
        vo = VertexOrbit(len(vertices), m, v, gamma, key, order, m == depth)
        vertices.append(vo)
        by_key[key] = vo
        queue.append(vo)

    add_vertex(ray_vertex(F, 0))
    while queue:
        vo = queue.popleft()
        for e in outgoing_edges(vo.rep):
            add_vertex(e.terminus)
    vertices.sort(key=lambda o: (o.type, o.id))
    for i, vo in enumerate(vertices):
        vo.id = i

    # edge orbits: upward edges at representatives
    edges = []
    ekey = {}
    for vo in vertices:
        if vo.boundary:
            continue
        for e in outgoing_edges(vo.rep):
            m, gamma, sign = reduce_edge(e)
            if sign < 0:
                continue
            key = (m, R.key(R.inv(R.red(gamma)), _kgroup_edge(m)))
            if key in ekey:
                continue
            tkey = vertex_key(G, e.terminus)
            target = by_key[tkey]
            wit = equiv_witness(e.terminus, target.rep, G)
            order = _stabilizer_order(G, gamma, _kgroup_edge(m), edge_stabilizer_order(q, m))
            eo = EdgeOrbit(len(edges), m, e, gamma, key, vo.id, target.id, wit, order)
            edges.append(eo)
            ekey[key] = eo

    # incidences with witnesses
    incidences = {}
    for vo in vertices:
        inc = []
        for e in outgoing_edges(vo.rep):
            m, gamma, sign = reduce_edge(e)
            if m >= depth:
                continue
            key = (m, R.key(R.inv(R.red(gamma)), _kgroup_edge(m)))
            eo = ekey[key]
            sigma = _connector(G, eo.reducer, gamma, _kgroup_edge(m))
            inc.append(Incidence(e, eo.id, sign, sigma))
        incidences[vo.id] = inc

    QG = QuotientGraph(G, depth, vertices, edges, incidences, [], persistence=persistence)
    _detect_cusps(QG)
    return QG


def _down_orbits(QG, vo):
    return {i.orbit for i in QG.incidences[vo.id] if i.sign < 0}


def _detect_cusps(QG: QuotientGraph):
    """Label rays: chains from the boundary whose vertices see all q downward edges as one orbit."""
    V, E = QG.vertices, QG.edges
    for b in V:
        if not b.boundary:
            continue
        chain, cur = [], b
        while cur.type >= 1:
            down = _down_orbits(QG, cur)
            if len(down) != 1:
                break
            chain.append(cur)
            cur = V[E[next(iter(down))].origin]
        if len(chain) < min(QG.persistence, QG.depth):
            QG.unresolved.append(b.id)
            continue
        cid = len(QG.cusps)
        ray = chain[::-1]
        first = next(iter(_down_orbits(QG, ray[0])))
        ray_edges = [next(iter(_down_orbits(QG, v))) for v in ray[1:]]
        for v in ray:
            v.cusp = cid
        E[first].role, E[first].cusp = "first", cid
        for i in ray_edges:
            E[i].role, E[i].cusp = "ray", cid
        QG.cusps.append(Cusp(cid, first, [v.id for v in ray], ray_edges, ray[0].type))


def betti1(QG: QuotientGraph) -> int:
    """E - V + C of the finite part."""
    fv = set(QG.finite_vertices)
    fe = [e for e in QG.edges if e.role == "finite"]
    parent = {v: v for v in fv}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in fe:
        a, b = find(e.origin), find(e.terminus)
        if a != b:
            parent[a] = b
    comps = len({find(v) for v in fv})
    return len(fe) - len(fv) + comps


def verify_quotient(QG: QuotientGraph) -> list[str]:
    """Re-check every stored witness against membership and the tree action."""
    problems = []
    G = QG.group
    for e in QG.edges:
        tgt = QG.vertices[e.terminus].rep
        if not group_member(e.terminus_witness, G):
            problems.append(f"edge {e.id}: witness not in {G.name}")
        elif act_vertex(e.terminus_witness.to_matrix2(), e.rep.terminus) != tgt:
            problems.append(f"edge {e.id}: witness does not glue")
        if e.rep.origin != QG.vertices[e.origin].rep:
            problems.append(f"edge {e.id}: origin is not the orbit representative")
    for vid, inc in QG.incidences.items():
        for i in inc:
            rep = QG.edges[i.orbit].rep
            rep = rep if i.sign > 0 else rep.reverse()
            if not group_member(i.witness, G) or act_edge(i.witness.to_matrix2(), rep) != i.edge:
                problems.append(f"vertex {vid}: bad incidence witness for {i.edge!r}")
    return problems


def quotient_json(QG: QuotientGraph) -> str:
    return json.dumps(QG.to_json(), indent=2, sort_keys=True)
