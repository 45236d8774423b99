"""Independent brute-force oracles used to derive and freeze expected values.

Nothing here calls the code under test for the quantity being checked; the
oracles only share the basic data types.
"""
import itertools
import math

from cocycle_forge.algebra import Poly, PolyMatrix
from cocycle_forge.algebra.poly import polys_of_degree_at_most
from cocycle_forge.tree import act_vertex, standard_vertex, vertex


# -- binomials ---------------------------------------------------------------------

def all_binomials_survive(n, p):
    """Every C(n, k), 0 <= k <= n, is nonzero mod p (direct, no Lucas)."""
    return all(math.comb(n, k) % p for k in range(n + 1))


def dee_by_definition(n, p):
    """n in {m, m p^r - 1 : 0 < m < p, r > 0} by listing the set."""
    if 0 < n < p:
        return True
    r = 1
    while p ** r - 1 <= n:
        if any(m * p ** r - 1 == n for m in range(1, p)):
            return True
        r += 1
    return False


# -- polynomial substitution -----------------------------------------------------------

def _pmul(P, Q, p):
    out = {}
    for (i1, j1), a in P.items():
        for (i2, j2), b in Q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = (out.get(k, 0) + a * b) % p
    return {k: v for k, v in out.items() if v}


def substitute(coeffs, ginv, p):
    """Coefficients of P((a X + b Y), (c X + d Y)) for P = sum coeffs[j] X^j Y^(n-j), over F_p."""
    a, b, c, d = ginv
    n = len(coeffs) - 1
    lx = {(1, 0): a % p, (0, 1): b % p}
    ly = {(1, 0): c % p, (0, 1): d % p}
    lx = {k: v for k, v in lx.items() if v}
    ly = {k: v for k, v in ly.items() if v}
    total = {}
    for j, cj in enumerate(coeffs):
        if not cj % p:
            continue
        term = {(0, 0): cj % p}
        for _ in range(j):
            term = _pmul(term, lx, p)
        for _ in range(n - j):
            term = _pmul(term, ly, p)
        for k, v in term.items():
            total[k] = (total.get(k, 0) + v) % p
    return [total.get((j, n - j), 0) for j in range(n + 1)]


# -- GL2(F_q[t]) by enumeration -----------------------------------------------------------

def gl2a_elements(F, max_deg):
    """All matrices over F_q[t] with entries of degree <= max_deg and det in F_q^*."""
    polys = list(polys_of_degree_at_most(F, max_deg))
    out = []
    for a, b, c, d in itertools.product(polys, repeat=4):
        det = a * d - b * c
        if det.c and det.degree == 0:
            out.append(PolyMatrix(a, b, c, d))
    return out


def lambda_m(F, m):
    return vertex(F, m)


def brute_stabilizer_order(F, m, elements):
    L = lambda_m(F, m)
    return sum(1 for g in elements if act_vertex(g.to_matrix2(), L) == L)


def brute_find(v, w, elements, member=None):
    """Some enumerated gamma (in the subgroup ``member`` when given) with gamma v = w, or None."""
    for g in elements:
        if member is not None and not member(g):
            continue
        if act_vertex(g.to_matrix2(), v) == w:
            return g
    return None


# -- linear algebra -------------------------------------------------------------------------

def brute_kernel_dim(rows, ncols, p):
    """log_p of the number of solutions of rows . x = 0 over F_p, by full enumeration."""
    count = 0
    for x in itertools.product(range(p), repeat=ncols):
        if all(sum(a * b for a, b in zip(r, x)) % p == 0 for r in rows):
            count += 1
    return round(math.log(count, p))


# -- graphs ---------------------------------------------------------------------------------

def cycle_rank(nodes, edges):
    """E - V + (number of components), components by depth-first search."""
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, comps = set(), 0
    for v in nodes:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
    return len(edges) - len(nodes) + comps


def finite_part_cycle_rank(qjson):
    """Cycle rank of the finite part read off the quotient JSON."""
    nodes = sorted({v["id"] for v in qjson["vertices"] if v["cusp"] is None})
    edges = [(e["origin"], e["terminus"]) for e in qjson["edges"] if e["role"] == "finite"]
    return cycle_rank(nodes, edges)


# -- random edge functions ------------------------------------------------------------------

def random_edge_function(F, center, radius, rng, harmonic=True):
    """Antisymmetric weight-2 edge function on a ball, harmonic at interior vertices when asked.

    Built outward: at each interior vertex all but one outgoing value is random and
    the last one is solved for (or, when ``harmonic`` is false, also random).
    """
    from cocycle_forge.cocycles import HarmonicCocycle
    from cocycle_forge.representations import DualVec
    from cocycle_forge.tree import outgoing_edges
    f = HarmonicCocycle(2, F)
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            out = [e for e in outgoing_edges(v) if e.terminus not in seen]
            acc = F.zero
            for e in outgoing_edges(v):
                if e.terminus in seen:
                    acc = F.add(acc, f.value(e).coeffs[0])
            for i, e in enumerate(out):
                if harmonic and i == len(out) - 1:
                    a = F.neg(acc)
                else:
                    a = rng.randrange(F.size)
                acc = F.add(acc, a)
                f.set(e, DualVec(0, (a,), F))
                seen.add(e.terminus)
                nxt.append(e.terminus)
        frontier = nxt
    return f, seen


def refinement_invariant(f, center, radius):
    """pairing(f, 1_U(e)) is unchanged by refining at e, for every edge ending inside."""
    from cocycle_forge.representations import HomPoly
    from cocycle_forge.special_rep import from_indicator, pairing, refine
    from cocycle_forge.tree import ball
    one = HomPoly(0, (1,), f.ring)
    inner = set(ball(center, radius - 1)[0])
    _, edges = ball(center, radius)
    for e in edges:
        if e.terminus not in inner:
            continue
        h = from_indicator(e, one)
        if pairing(f, h) != pairing(f, refine(h, e)):
            return False
    return True
