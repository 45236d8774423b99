"""Harmonic cocycles on the tree and their Gamma-invariant subspaces.

A cocycle of weight w takes values in V_(w-2)^*.  Values are stored on upward
edges only; the reverse orientation is implied by antisymmetry.

Invariant cocycles are determined by their values on edge-orbit
representatives: if e' = sigma . (s * rep) then f(e') = s * rho*(sigma) f(rep).
Three support conventions are computed from one linear system:

* ``H``   : unknowns on the finite part and the first cusp edges, harmonicity
            at finite-part vertices; values further out along a cusp ray are
            then forced by harmonicity at the ray vertices.
* ``H!``  : as ``H`` but additionally zero beyond the first cusp edges.
* ``H!!`` : zero on every cusp-ray edge, first edges included.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .algebra import (FiniteField, FunctionField, GaloisRing, IntegerRing, LaurentRing,
                      PolyMatrix, ZZ, field_from_q, gr_kernel, integer_kernel, kernel_over_field)
from .errors import IncompatibleWeight, OutOfExploredRegion, RingMismatch
from .quotient import (QuotientGraph, edge_equiv_witness, edge_key, edge_stabilizer, quotient_graph)
from .representations import DualVec, rho_dual_matrix
from .tree import TreeEdge, outgoing_edges

SUPPORTS = ("H", "H!", "H!!")


def parse_ring(text: str, F: GaloisRing):
    """Coefficient ring from a short name: ``z``, ``f2``, ``gr4``, ``gr8_2``, ``f2(pi)``, ``laurent``."""
    if text == "z":
        return ZZ
    if text in ("laurent", "K") or text.endswith("(pi)"):
        return FunctionField(F, "pi")
    if text.startswith("gr"):
        body = text[2:]
        pk, _, f = body.partition("_")
        pk, f = int(pk), int(f or 1)
        p = next(d for d in range(2, pk + 1) if pk % d == 0)
        k = round(math.log(pk, p))
        return GaloisRing(p, k, f)
    if text.startswith("f"):
        return field_from_q(int(text[1:]))
    raise RingMismatch(f"unknown ring {text!r}")


def ring_name(ring) -> str:
    if isinstance(ring, IntegerRing):
        return "z"
    return ring.name


def p_is_zero(ring) -> bool:
    """True when the characteristic of the coefficient ring is a prime."""
    from .algebra.rings import is_prime
    c = getattr(ring, "characteristic", 0)
    return c > 1 and is_prime(c)


def dual_matrix(ring, gamma, n):
    """rho*_n(gamma) as a list of rows; identity for n = 0 without touching the ring."""
    if n == 0:
        return [[ring.one]]
    if not isinstance(ring, (FunctionField, LaurentRing)):
        raise RingMismatch("weight > 2 needs coefficients containing K_inf")
    g = gamma.to_matrix2() if isinstance(gamma, PolyMatrix) else gamma
    return rho_dual_matrix(ring, g, n)


def _mv(ring, M, v):
    out = []
    for row in M:
        acc = ring.zero
        for x, y in zip(row, v):
            acc = ring.add(acc, ring.mul(x, y))
        out.append(acc)
    return out


# -- individual cocycles -------------------------------------------------------------

@dataclass
class HarmonicCocycle:
    weight: int
    ring: object
    values: dict = field(default_factory=dict)   # upward TreeEdge -> DualVec

    @property
    def n(self):
        return self.weight - 2

    @classmethod
    def from_values(cls, weight, ring, pairs):
        """Build from (edge, DualVec) pairs in any orientation."""
        f = cls(weight, ring)
        for e, val in pairs:
            f.set(e, val)
        return f

    def zero_value(self):
        return DualVec.zero(self.ring, self.n)

    def set(self, e: TreeEdge, val: DualVec):
        up, s = e.canonical()
        val = val if s > 0 else -val
        if val.is_zero():
            self.values.pop(up, None)
        else:
            self.values[up] = val

    def value(self, e: TreeEdge) -> DualVec:
        up, s = e.canonical()
        val = self.values.get(up)
        if val is None:
            return self.zero_value()
        return val if s > 0 else -val

    __call__ = value

    def support(self):
        return sorted(self.values, key=lambda e: e.sort_key())

    def __add__(self, other):
        f = HarmonicCocycle(self.weight, self.ring, dict(self.values))
        for e, v in other.values.items():
            f.set(e, f.value(e) + v)
        return f

    def scale(self, s):
        f = HarmonicCocycle(self.weight, self.ring)
        for e, v in self.values.items():
            f.set(e, v.scale(s))
        return f

    def vertex_sum(self, v):
        acc = self.zero_value()
        for e in outgoing_edges(v):
            acc = acc + self.value(e)
        return acc

    def support_vertices(self):
        out = set()
        for e in self.values:
            out.add(e.origin)
            out.add(e.terminus)
        return sorted(out, key=lambda v: v.sort_key())


def is_harmonic(f: HarmonicCocycle, vertices=None):
    """(True, None) or (False, vertex with a nonzero sum).  Defaults to the support's vertices."""
    vs = f.support_vertices() if vertices is None else vertices
    for v in vs:
        if not f.vertex_sum(v).is_zero():
            return False, v
    return True, None


def gamma_action(gamma, f: HarmonicCocycle) -> HarmonicCocycle:
    """g(f)(e) = rho*(g) f(g^-1 e): push every stored value forward along g."""
    from .tree import act_edge
    g = gamma.to_matrix2() if isinstance(gamma, PolyMatrix) else gamma
    M = dual_matrix(f.ring, gamma, f.n)
    out = HarmonicCocycle(f.weight, f.ring)
    for e, val in f.values.items():
        img = act_edge(g, e)
        out.set(img, DualVec(f.n, tuple(_mv(f.ring, M, val.coeffs)), f.ring))
    return out


# -- invariant spaces --------------------------------------------------------------------

@dataclass
class InvariantSpace:
    QG: QuotientGraph
    weight: int
    ring: object
    support: str
    unknown_orbits: list            # edge orbit ids carrying unknowns
    harmonic_vertices: list         # vertex orbit ids where harmonicity was imposed
    basis: list                     # each: dict edge orbit id -> tuple of n+1 coordinates
    matrix: list                    # the constraint matrix (rows)
    invariant_factors: list | None = None
    extra_levels: int = 0

    @property
    def n(self):
        return self.weight - 2

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def group(self):
        return self.QG.group

    def dualvec(self, vec, orbit) -> DualVec:
        coords = vec.get(orbit)
        if coords is None:
            return DualVec.zero(self.ring, self.n)
        return DualVec(self.n, tuple(coords), self.ring)

    def cocycle(self, i, edges=None) -> HarmonicCocycle:
        """Basis element i as an explicit cocycle on the given tree edges (default: all incidences)."""
        vec = self.basis[i]
        f = HarmonicCocycle(self.weight, self.ring)
        if edges is None:
            edges = [inc.edge for incs in self.QG.incidences.values() for inc in incs]
        for e in edges:
            f.set(e, invariant_extend(self, vec, e))
        return f

    def to_json(self) -> dict:
        out = {
            "format": "cocycle-forge/1",
            "kind": "cocycles",
            "gamma": self.group.name,
            "q": self.group.F.q,
            "weight": self.weight,
            "ring": ring_name(self.ring),
            "depth": self.QG.depth,
            "support": self.support,
            "dimension": self.dimension,
            "basis": [[{"orbit_id": o, "dual_coords": [_jsonable(x) for x in vec[o]]}
                       for o in sorted(vec) if any(not self.ring.is_zero(x) for x in vec[o])]
                      for vec in self.basis],
        }
        if self.invariant_factors is not None:
            out["invariant_factors"] = list(self.invariant_factors)
        return out


def _jsonable(x):
    if isinstance(x, int):
        return x
    if hasattr(x, "num"):
        return {"num": list(x.num.c), "den": list(x.den.c)}
    return str(x)


def _harmonic_rows(QG, ring, n, vid, col, extra_zero=()):
    """n+1 rows expressing sum over outgoing edges at vertex orbit vid of f(e) = 0."""
    N = len(col) * (n + 1)
    rows = [[ring.zero] * N for _ in range(n + 1)]
    touched = False
    for inc in QG.incidences[vid]:
        if inc.orbit not in col:
            continue
        touched = True
        M = dual_matrix(ring, inc.witness, n)
        base = col[inc.orbit] * (n + 1)
        for r in range(n + 1):
            for c in range(n + 1):
                x = M[r][c] if inc.sign > 0 else ring.neg(M[r][c])
                rows[r][base + c] = ring.add(rows[r][base + c], x)
    return rows if touched else []


def _stabilizer_rows(QG, ring, n, oid, col):
    if n == 0:
        return []
    rows = []
    N = len(col) * (n + 1)
    seen = set()
    for s in edge_stabilizer(QG.edges[oid].rep, QG.group):
        if s.key() in seen:
            continue
        seen.add(s.key())
        M = dual_matrix(ring, s, n)
        base = col[oid] * (n + 1)
        for r in range(n + 1):
            row = [ring.zero] * N
            for c in range(n + 1):
                x = M[r][c]
                if r == c:
                    x = ring.sub(x, ring.one)
                row[base + c] = x
            rows.append(row)
    return rows


def _solve(rows, ring, ncols):
    """Kernel generators and (over Z) the invariant factors of the system."""
    if isinstance(ring, IntegerRing):
        basis, factors = integer_kernel(rows, ncols)
        return basis, factors
    if ring.is_field:
        return kernel_over_field(rows, ring, ncols), None
    if isinstance(ring, GaloisRing):
        gens, _ = gr_kernel(rows, ring, ncols)
        return gens, None
    raise RingMismatch(f"no solver for {ring!r}")


def _unknowns(QG, support, extra_levels):
    unknown = list(QG.finite_edges)
    harmonic = list(QG.finite_vertices)
    for c in QG.cusps:
        if support == "H!!":
            continue
        unknown.append(c.first_edge)
        if support == "H!":
            take = min(extra_levels, len(c.edges))
            unknown.extend(c.edges[:take])
            harmonic.extend(c.vertices[:take + 1])
    return sorted(set(unknown)), sorted(set(harmonic))


def invariant_space(G_or_QG, weight: int, ring, depth: int | None = None, support: str = "H!",
                    extra_levels: int = 0) -> InvariantSpace:
    """H^w(ring)^Gamma under one of the support conventions ``H``, ``H!``, ``H!!``."""
    if weight < 2:
        raise IncompatibleWeight("weight must be >= 2")
    if support not in SUPPORTS:
        raise ValueError(f"support must be one of {SUPPORTS}")
    QG = G_or_QG if isinstance(G_or_QG, QuotientGraph) else quotient_graph(G_or_QG, depth)
    QG.require_resolved()
    n = weight - 2
    if n > 0 and not isinstance(ring, (FunctionField, LaurentRing)):
        raise RingMismatch("weight > 2 needs coefficients containing K_inf")
    if isinstance(ring, LaurentRing):
        ring = FunctionField(ring.base, "pi")
    unknown, harmonic = _unknowns(QG, support, extra_levels)
    col = {o: i for i, o in enumerate(unknown)}
    ncols = len(unknown) * (n + 1)
    rows = []
    for vid in harmonic:
        rows.extend(_harmonic_rows(QG, ring, n, vid, col))
    for oid in unknown:
        rows.extend(_stabilizer_rows(QG, ring, n, oid, col))
    sol, factors = _solve(rows, ring, ncols)
    basis = []
    for v in sol:
        vec = {o: tuple(v[col[o] * (n + 1):(col[o] + 1) * (n + 1)]) for o in unknown}
        if support == "H":
            _propagate_rays(QG, ring, n, vec)
        basis.append(vec)
    return InvariantSpace(QG, weight, ring, support, unknown, harmonic, basis, rows, factors,
                          extra_levels)


def _propagate_rays(QG, ring, n, vec):
    """Fill in ray-edge values forced by harmonicity at ray vertices (plain H)."""
    for c in QG.cusps:
        for vid, nxt in zip(c.vertices, c.edges):
            acc = [ring.zero] * (n + 1)
            up = None
            for inc in QG.incidences[vid]:
                if inc.orbit == nxt and inc.sign > 0:
                    up = inc
                    continue
                val = vec.get(inc.orbit)
                if val is None:
                    continue
                img = _mv(ring, dual_matrix(ring, inc.witness, n), val)
                acc = [ring.add(a, b if inc.sign > 0 else ring.neg(b)) for a, b in zip(acc, img)]
            # rho*(up.witness) f(nxt) = -acc
            inv = dual_matrix(ring, up.witness.inverse(), n)
            vec[nxt] = tuple(_mv(ring, inv, [ring.neg(a) for a in acc]))


def invariant_extend(space: InvariantSpace, vec: dict, e: TreeEdge) -> DualVec:
    """Value at an arbitrary edge of the explored region of the invariant cocycle ``vec``."""
    QG = space.QG
    (m, label), sign = edge_key(QG.group, e)
    if m >= QG.depth:
        raise OutOfExploredRegion(f"edge of type {m} beyond depth {QG.depth}")
    eo = QG.edge_by_key((m, label))
    val = space.dualvec(vec, eo.id)
    if val.is_zero():
        return val
    sigma, s = edge_equiv_witness(eo.rep, e, QG.group)
    M = dual_matrix(space.ring, sigma, space.n)
    img = DualVec(space.n, tuple(_mv(space.ring, M, val.coeffs)), space.ring)
    return img if s > 0 else -img


def verify_space(space: InvariantSpace) -> list[str]:
    """Independent re-check of every basis vector: harmonicity at vertex reps from explicit values."""
    QG = space.QG
    problems = []
    check = set(space.harmonic_vertices)
    if space.support == "H":
        for c in QG.cusps:
            check.update(c.vertices[:-1])
    for i in range(space.dimension):
        vec = space.basis[i]
        for vid in sorted(check):
            v = QG.vertices[vid]
            acc = DualVec.zero(space.ring, space.n)
            for e in outgoing_edges(v.rep):
                acc = acc + invariant_extend(space, vec, e)
            if not acc.is_zero():
                problems.append(f"basis {i}: not harmonic at orbit {vid}")
        if space.n:
            for oid in space.unknown_orbits:
                val = space.dualvec(vec, oid)
                for s in edge_stabilizer(QG.edges[oid].rep, QG.group):
                    M = dual_matrix(space.ring, s, space.n)
                    if tuple(_mv(space.ring, M, val.coeffs)) != tuple(val.coeffs):
                        problems.append(f"basis {i}: not invariant on orbit {oid}")
                        break
    return problems


def ray_extent(space: InvariantSpace) -> int:
    """Largest number of nonzero ray edges past a first edge, over the basis."""
    worst = 0
    for vec in space.basis:
        for c in space.QG.cusps:
            for i, o in enumerate(c.edges):
                if any(not space.ring.is_zero(x) for x in vec.get(o, ())):
                    worst = max(worst, i + 1)
    return worst


def support_check(space: InvariantSpace) -> bool:
    """Containment of the support of every basis vector.

    ``H!``/``H!!``: nothing outside the finite part and first edges, besides
    any ray unknowns that were explicitly requested.  ``H`` with p = 0 in the
    ring: values forced along each cusp ray must die out before the explored
    boundary, so the cocycle has finite support modulo Gamma.
    """
    QG = space.QG
    allowed = set(QG.finite_edges) | set(QG.first_edges) | set(space.unknown_orbits)
    for vec in space.basis:
        for o, coords in vec.items():
            if o in allowed or space.support == "H":
                continue
            if any(not space.ring.is_zero(x) for x in coords):
                return False
    if space.support == "H" and p_is_zero(space.ring):
        for vec in space.basis:
            for c in QG.cusps:
                if c.edges and any(not space.ring.is_zero(x) for x in vec.get(c.edges[-1], ())):
                    return False
    return True


def depth_stable(G, weight, ring, depths, support="H!"):
    """Dimensions at each depth (used to check the cusp-onset heuristic)."""
    return {d: invariant_space(G, weight, ring, d, support).dimension for d in depths}


def dimension_table(rows):
    """TSV text from (q, level, weight, ring, support, dimension) tuples."""
    lines = ["q\tlevel\tweight\tring\tsupport\tdimension"]
    lines += ["\t".join(str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def space_json(space: InvariantSpace) -> str:
    return json.dumps(space.to_json(), indent=2, sort_keys=True)
