"""Sp_n(L): locally constant V_n(L)-valued functions on P^1(K_inf) modulo constants.

A step function is presented as a finite sum  sum_i lambda_i * 1_{U(e_i)}.  In
disk language, U(parent -> D) is the disk D and U(D -> parent) is its
complement, so modulo constants every class is a finite combination of disk
indicators and is represented by the unique function that vanishes near the
end infinity.  The normal form lists the maximal disks on which that function
is constant and nonzero, with its values there.

The action is sp_n(g) h : z -> rho_n(g) h(z.g) with the right action
z.g = g^-1 z on ends, which turns 1_{U(e)} into 1_{U(g e)}.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebra import FunctionField, GaloisRing, Poly, RatFunc, TruncatedSeries
from .errors import EdgeNotPresent, IncompatibleWeight
from .representations import HomPoly, evaluate_dual, rho_apply
from .tree import (BoundaryPoint, TreeEdge, TreeVertex, act_edge, ancestor, boundary_in_U,
                   children, parent)


@dataclass
class StepFunction:
    n: int
    ring: object
    terms: list = field(default_factory=list)    # [(TreeEdge, HomPoly)]

    @classmethod
    def zero(cls, ring, n):
        return cls(n, ring, [])

    def __add__(self, other):
        return StepFunction(self.n, self.ring, list(self.terms) + list(other.terms))

    def __neg__(self):
        return StepFunction(self.n, self.ring, [(e, lam.scale(self.ring.neg(self.ring.one)))
                                                for e, lam in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return StepFunction(self.n, self.ring, [(e, lam.scale(s)) for e, lam in self.terms])

    def edges(self):
        return [e for e, _ in self.terms]

    def normal_form(self):
        return normal_form(self)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.n == other.n and normal_form(self) == normal_form(other)

    def is_zero(self):
        return not normal_form(self)

    def __call__(self, b: BoundaryPoint) -> HomPoly:
        """Value at an end, for the presented representative (defined up to a constant)."""
        acc = HomPoly.zero(self.ring, self.n)
        for e, lam in self.terms:
            if boundary_in_U(b, e):
                acc = acc + lam
        return acc


def from_indicator(e: TreeEdge, lam: HomPoly) -> StepFunction:
    return StepFunction(lam.n, lam.ring, [(e, lam)])


def onward_edges(e: TreeEdge):
    """Edges leaving e's terminus other than -e: their U's partition U(e)."""
    w = e.terminus
    return [TreeEdge(w, x) for x in [parent(w)] + children(w) if x != e.origin]


def refine(h: StepFunction, e: TreeEdge) -> StepFunction:
    idx = next((i for i, (f, _) in enumerate(h.terms) if f == e), None)
    if idx is None:
        raise EdgeNotPresent(f"{e!r} is not in the presentation")
    _, lam = h.terms[idx]
    new = h.terms[:idx] + [(f, lam) for f in onward_edges(e)] + h.terms[idx + 1:]
    return StepFunction(h.n, h.ring, new)


# -- normal form -------------------------------------------------------------------

def _disk_terms(h: StepFunction):
    """Modulo constants: sum of +-lambda * 1_D over disks D."""
    out = {}
    for e, lam in h.terms:
        up, s = e.canonical()
        D = up.terminus
        val = lam if s > 0 else lam.scale(h.ring.neg(h.ring.one))
        out[D] = out[D] + val if D in out else val
    return {D: v for D, v in out.items() if not v.is_zero()}


def _contains(D: TreeVertex, E: TreeVertex) -> bool:
    return E.level >= D.level and ancestor(E, D.level) == D


def normal_form(h: StepFunction) -> tuple:
    """Sorted ((disk, value), ...) over maximal disks of constancy with nonzero value."""
    terms = _disk_terms(h)
    if not terms:
        return ()
    disks = sorted(terms, key=lambda D: D.sort_key())
    top = disks[0]
    for D in disks[1:]:
        m = min(top.level, D.level)
        diff = top.u - D.u
        if diff.coeffs:
            m = min(m, diff.start)
        top = ancestor(D, m)
    zero = HomPoly.zero(h.ring, h.n)

    def expand(D, base, inside):
        """('const', value) or ('split', [(disk, value)]) for the function on disk D."""
        base = base + terms[D] if D in terms else base
        inside = [E for E in inside if E != D]
        if not inside:
            return ("const", base)
        parts = []
        for C in children(D):
            sub = [E for E in inside if _contains(C, E)]
            parts.append((C, expand(C, base, sub) if sub else ("const", base)))
        consts = [r[1] for _, r in parts if r[0] == "const"]
        if len(consts) == len(parts) and all(c == consts[0] for c in consts):
            return ("const", consts[0])
        flat = []
        for C, r in parts:
            if r[0] == "const":
                if not r[1].is_zero():
                    flat.append((C, r[1]))
            else:
                flat.extend(r[1])
        return ("split", flat)

    kind, data = expand(top, zero, disks)
    if kind == "const":
        data = [] if data.is_zero() else [(top, data)]
    return tuple(sorted(((D, v.coeffs) for D, v in data), key=lambda t: t[0].sort_key()))


def normal_presentation(h: StepFunction) -> StepFunction:
    """The normal form as a presentation by upward edges."""
    return StepFunction(h.n, h.ring, [(TreeEdge(parent(D), D), HomPoly(h.n, c, h.ring))
                                      for D, c in normal_form(h)])


# -- action and pairing -------------------------------------------------------------

def sp_apply(g, h: StepFunction, twist=None) -> StepFunction:
    """sp_n(g) h: lambda 1_{U(e)} -> rho_n(g) lambda 1_{U(g e)}."""
    return StepFunction(h.n, h.ring, [(act_edge(g, e), rho_apply(g, lam, twist) if h.n else lam)
                                      for e, lam in h.terms])


def pairing(f, h: StepFunction):
    """sum_i f(e_i)(lambda_i) over the presentation of h."""
    if f.weight != h.n + 2:
        raise IncompatibleWeight(f"weight {f.weight} cocycle against degree {h.n} step function")
    R = h.ring
    acc = R.zero
    for e, lam in h.terms:
        acc = R.add(acc, evaluate_dual(f.value(e), lam))
    return acc


def tensor_embed(h0: StepFunction, lam: HomPoly) -> StepFunction:
    """Sp_0 (x) V_n -> Sp_n: (sum c_i 1_{U(e_i)}) (x) lam -> sum c_i lam 1_{U(e_i)}."""
    R = lam.ring
    lift = R.from_base if hasattr(R, "from_base") else (lambda a: a)
    return StepFunction(lam.n, R, [(e, lam.scale(lift(c.coeffs[0]))) for e, c in h0.terms])


# -- JSON ---------------------------------------------------------------------------

def _enc_scalar(ring, x):
    if isinstance(x, RatFunc):
        return {"num": list(x.num.c), "den": list(x.den.c)}
    return x


def _dec_scalar(ring, x):
    if isinstance(ring, FunctionField):
        return RatFunc(Poly(ring.F, x["num"]), Poly(ring.F, x["den"]))
    return x


def _enc_vertex(v: TreeVertex):
    return [v.level, v.u.start, list(v.u.coeffs)]


def _dec_vertex(F, data):
    level, start, coeffs = data
    return TreeVertex(level, TruncatedSeries(F, start, tuple(coeffs)))


def step_to_json(h: StepFunction) -> dict:
    F = h.terms[0][0].origin.field if h.terms else None
    return {
        "format": "cocycle-forge/1",
        "kind": "step",
        "n": h.n,
        "ring": h.ring.name if hasattr(h.ring, "name") else "z",
        "field": [F.p, F.f] if F else None,
        "terms": [{"edge": [_enc_vertex(e.origin), _enc_vertex(e.terminus)],
                   "poly": [_enc_scalar(h.ring, c) for c in lam.coeffs]} for e, lam in h.terms],
    }


def step_from_json(data, ring, F: GaloisRing) -> StepFunction:
    terms = []
    for t in data["terms"]:
        o, w = (_dec_vertex(F, x) for x in t["edge"])
        terms.append((TreeEdge(o, w), HomPoly(data["n"], tuple(_dec_scalar(ring, c) for c in t["poly"]),
                                              ring)))
    return StepFunction(data["n"], ring, terms)


def step_dumps(h: StepFunction) -> str:
    return json.dumps(step_to_json(h), sort_keys=True)
