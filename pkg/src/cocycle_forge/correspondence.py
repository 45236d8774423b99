"""Executable forms of the cocycle / automorphic-form correspondence.

Automorphic functions are never tabulated on G(A).  A Gamma_x-invariant
cocycle phi_x becomes an evaluator

    (x, g_inf, h)  ->  < phi_x , sp_n(g_inf) h >

and the reverse map reads phi_x(e)(lambda) back from the evaluator at
(x, 1, lambda 1_{U(e)}).  The class set X is a list so the product over x is
represented; for the rational function field with determinant-surjective
level structure it is a single point.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (FiniteField, FunctionField, GaloisRing, Matrix2, PolyMatrix, SpanBuilder,
                      TruncatedSeries, ZZ, naive_lift, rank, residue_map)
from .cocycles import (HarmonicCocycle, InvariantSpace, _mv, dual_matrix, invariant_extend,
                       invariant_space, _harmonic_rows, _solve, _unknowns)
from .errors import ClosureIncomplete, InvarianceViolation, OutOfExploredRegion
from .quotient import ArithmeticGroup, QuotientGraph, edge_key, quotient_graph, stabilizer
from .representations import (DualVec, HomPoly, cyclicity_closure, evaluate_dual, generator_vector,
                              rho_matrix)
from .special_rep import StepFunction, from_indicator, sp_apply
from .tree import (TreeEdge, act_edge, children, outgoing_edges, parent, random_group_element,
                   standard_vertex)


# -- class set and global cocycles --------------------------------------------------

@dataclass
class ClassSet:
    labels: list
    groups: dict          # label -> ArithmeticGroup

    @classmethod
    def singleton(cls, G: ArithmeticGroup, label="x0"):
        return cls([label], {label: G})

    def __post_init__(self):
        if not self.labels:
            raise ValueError("class set must be nonempty")


@dataclass
class InvariantCocycle:
    """One Gamma-invariant cocycle, given by its values on edge-orbit representatives."""
    space: InvariantSpace
    vec: dict

    @property
    def weight(self):
        return self.space.weight

    @property
    def ring(self):
        return self.space.ring

    def value(self, e: TreeEdge) -> DualVec:
        return invariant_extend(self.space, self.vec, e)

    __call__ = value


@dataclass
class GlobalCocycle:
    classes: ClassSet
    components: dict      # label -> InvariantCocycle

    def __getitem__(self, x):
        return self.components[x]


def _check_invariance(phi: InvariantCocycle, samples, edges):
    """rho*(gamma^-1) phi(gamma e) = phi(e) on the sampled (gamma, e)."""
    R, n = phi.ring, phi.space.n
    for gamma in samples:
        M = dual_matrix(R, gamma.inverse(), n)
        g2 = gamma.to_matrix2()
        for e in edges:
            lhs = _mv(R, M, phi.value(act_edge(g2, e)).coeffs)
            if tuple(lhs) != tuple(phi.value(e).coeffs):
                raise InvarianceViolation("cocycle is not invariant", (gamma, e))


def _invariance_samples(phi: InvariantCocycle, k=6):
    QG = phi.space.QG
    samples = []
    for vo in QG.vertices[:k]:
        samples.extend(stabilizer(vo.rep, QG.group)[:4])
    for eo in QG.edges[:k]:
        samples.append(eo.terminus_witness)
    return samples


def phi_decompose(classes: ClassSet, global_values: dict, check=True) -> GlobalCocycle:
    """Split X-indexed data {x: InvariantCocycle} into the tuple (phi_x)_x, re-checking invariance."""
    comps = {}
    for x in classes.labels:
        phi = global_values[x]
        if check:
            edges = [i.edge for incs in phi.space.QG.incidences.values() for i in incs][:24]
            _check_invariance(phi, _invariance_samples(phi), edges)
        comps[x] = phi
    return GlobalCocycle(classes, comps)


def phi_compose(gc: GlobalCocycle) -> dict:
    return {x: gc.components[x] for x in gc.classes.labels}


# -- evaluators ---------------------------------------------------------------------

@dataclass
class AutomorphicEvaluator:
    cocycle: GlobalCocycle
    weight: int

    @property
    def n(self):
        return self.weight - 2

    def __call__(self, x, g_inf, h: StepFunction):
        return theta_evaluate(self, x, g_inf, h)


def evaluator(gc: GlobalCocycle) -> AutomorphicEvaluator:
    w = next(iter(gc.components.values())).weight
    return AutomorphicEvaluator(gc, w)


def _pair(phi: InvariantCocycle, h: StepFunction):
    R = phi.ring
    acc = R.zero
    for e, lam in h.terms:
        acc = R.add(acc, evaluate_dual(phi.value(e), lam))
    return acc


def theta_evaluate(W: AutomorphicEvaluator, x, g_inf, h: StepFunction):
    """< phi_x , sp_n(g_inf) h >."""
    phi = W.cocycle[x]
    if g_inf is not None:
        h = sp_apply(g_inf, h)
    return _pair(phi, h)


def hom_to_cocycle(W: AutomorphicEvaluator) -> GlobalCocycle:
    """phi_x(e)(lambda) := W(x, 1, lambda 1_{U(e)}) on every edge-orbit representative."""
    comps = {}
    for x, phi in W.cocycle.components.items():
        sp = phi.space
        R, n = sp.ring, sp.n
        vec = {}
        for eo in sp.QG.edges:
            coords = tuple(theta_evaluate(W, x, None, from_indicator(eo.rep, HomPoly.monomial(R, n, j)))
                           for j in range(n + 1))
            if any(not R.is_zero(c) for c in coords) or eo.id in phi.vec:
                vec[eo.id] = coords
        comps[x] = InvariantCocycle(sp, vec)
    return GlobalCocycle(W.cocycle.classes, comps)


def same_cocycle(a: InvariantCocycle, b: InvariantCocycle) -> bool:
    R = a.ring
    keys = set(a.vec) | set(b.vec)
    zero = (R.zero,) * (a.space.n + 1)
    return all(tuple(a.vec.get(k, zero)) == tuple(b.vec.get(k, zero)) for k in keys)


def basis_cocycles(space: InvariantSpace, classes: ClassSet | None = None):
    classes = classes or ClassSet.singleton(space.group)
    x = classes.labels[0]
    return [GlobalCocycle(classes, {x: InvariantCocycle(space, vec)}) for vec in space.basis]


def sample_pool(F, rng: random.Random, space: InvariantSpace | None = None, size=12):
    """g_inf pool: stabilizer elements, diag(pi, 1), gamma_a / delta_a and random elements."""
    from .representations import default_samples, proof_matrices
    pool = []
    if space is not None:
        for vo in space.QG.vertices[:3]:
            pool.extend(s.to_matrix2() for s in stabilizer(vo.rep, space.group)[:3])
    pi, one = TruncatedSeries.pi(F), TruncatedSeries.const(F, 1)
    pool.append(Matrix2.diag(pi, one).with_inverse(Matrix2.diag(pi.inv(), one)))
    for a in default_samples(F)[:3]:
        pool.extend(proof_matrices(a))
    while len(pool) < size:
        pool.append(random_group_element(F, rng, prec=3, spread=1))
    return pool


@dataclass
class EquivarianceReport:
    checks: int
    failures: list
    skipped: int          # draws whose edges left the explored region

    @property
    def ok(self):
        return self.checks > 0 and not self.failures


def random_step(F, ring, n, rng: random.Random, terms=2, radius=2) -> StepFunction:
    """A small step function near the standard vertex with random coefficients."""
    from .tree import random_vertex
    out = []
    for _ in range(terms):
        v = random_vertex(F, rng, radius=radius)
        e = TreeEdge(v, rng.choice([parent(v)] + children(v)))
        coeffs = tuple(ring.from_int(rng.randrange(F.p)) for _ in range(n + 1))
        out.append((e, HomPoly(n, coeffs, ring)))
    return StepFunction(n, ring, out)


def check_equivariance(W: AutomorphicEvaluator, x=None, trials=100, seed=0, max_draws=None):
    """W(x, g g', h) = W(x, g, sp_n(g') h) for g, g' from the sample pool."""
    x = x if x is not None else W.cocycle.classes.labels[0]
    sp = W.cocycle[x].space
    F = sp.group.F
    rng = random.Random(seed)
    pool = sample_pool(F, rng, sp, size=16)
    max_draws = max_draws or 20 * trials
    checks, bad, skipped = 0, [], 0
    for _ in range(max_draws):
        if checks >= trials:
            break
        g, g2 = rng.choice(pool), rng.choice(pool)
        h = random_step(F, sp.ring, sp.n, rng)
        try:
            lhs = theta_evaluate(W, x, g @ g2, h)
            rhs = theta_evaluate(W, x, g, sp_apply(g2, h))
        except OutOfExploredRegion:
            skipped += 1
            continue
        checks += 1
        if lhs != rhs:
            bad.append((g, g2, h))
    return EquivarianceReport(checks, bad, skipped)


# -- support and the condition at infinity ---------------------------------------------

STANDARD_EDGE_NOTE = "Iwahori stabilizer of the standard edge (Lambda_0 -> Lambda_1) times the center"


@dataclass
class SupportCertificate:
    orbits: list               # edge-orbit ids where phi is nonzero (the set S)
    k_inf: str
    samples: int
    outside: int               # samples classified outside S K_inf Z
    violations: list
    skipped: int               # samples leaving the explored region

    @property
    def ok(self):
        return not self.violations


def support_certificate(W: AutomorphicEvaluator, x=None, draws=500, seed=0, extra=()) -> SupportCertificate:
    """Certify that g -> W(x, g, lambda 1_{U(e0)}) vanishes unless g e0 lies in Gamma S.

    ``extra`` enlarges S (monotonicity check).
    """
    x = x if x is not None else W.cocycle.classes.labels[0]
    phi = W.cocycle[x]
    sp = phi.space
    R, n = sp.ring, sp.n
    S = sorted({o for o, c in phi.vec.items() if any(not R.is_zero(a) for a in c)} | set(extra))
    F = sp.group.F
    e0 = TreeEdge(standard_vertex(F), TreeVertex_level1(F))
    rng = random.Random(seed)
    outside = skipped = 0
    bad = []
    for _ in range(draws):
        g = random_group_element(F, rng, prec=3, spread=2)
        e = act_edge(g, e0)
        try:
            (m, label), _ = edge_key(sp.group, e)
        except Exception:
            skipped += 1
            continue
        if m >= sp.QG.depth:
            skipped += 1
            continue
        eo = sp.QG.edge_by_key((m, label))
        if eo.id in S:
            continue
        outside += 1
        for j in range(n + 1):
            val = theta_evaluate(W, x, g, from_indicator(e0, HomPoly.monomial(R, n, j)))
            if not R.is_zero(val):
                bad.append((g, j))
                break
    return SupportCertificate(S, STANDARD_EDGE_NOTE, draws, outside, bad, skipped)


def TreeVertex_level1(F):
    from .tree import TreeVertex
    return TreeVertex(1, TruncatedSeries.zero(F))


def k_inf_samples(F, edges, rng: random.Random, tries=200):
    """Sampled elements of GL2(O_inf) fixing every edge in ``edges``."""
    from .tree import random_integral_matrix
    out = []
    for _ in range(tries):
        k = random_integral_matrix(F, rng, prec=4)
        if all(act_edge(k, e) == e for e in edges):
            out.append(k)
    return out


@dataclass
class InfinityReport:
    k_samples: int
    span_dimension: int
    checks: int
    failures: int
    note: str = "sampling witness, not a proof"

    @property
    def ok(self):
        return self.failures == 0


def _nf_vector(h: StepFunction, index: dict):
    from .special_rep import normal_form
    R = h.ring
    vec = {}
    for D, coeffs in normal_form(h):
        for j, c in enumerate(coeffs):
            key = (D, j)
            if key not in index:
                index[key] = len(index)
            vec[index[key]] = c
    return vec


def verify_infinity_condition(W: AutomorphicEvaluator, u: StepFunction, x=None, seed=0,
                              g_samples=8) -> InfinityReport:
    """Q(f) spanned by sp_n(k) u over k in a sampled K_inf, and eps(sp_n(k) u) = (g -> f(g k))."""
    x = x if x is not None else W.cocycle.classes.labels[0]
    F = W.cocycle[x].space.group.F
    rng = random.Random(seed)
    ks = k_inf_samples(F, u.edges(), rng)
    index = {}
    vecs = [_nf_vector(sp_apply(k, u), index) for k in ks]
    R = u.ring
    rows = [[v.get(i, R.zero) for i in range(len(index))] for v in vecs]
    dim = rank(rows, R) if rows and index else 0
    gs = sample_pool(F, rng, W.cocycle[x].space, size=g_samples)
    checks = fails = 0
    for k in ks[:10]:
        ku = sp_apply(k, u)
        for g in gs:
            checks += 1
            if theta_evaluate(W, x, g, ku) != theta_evaluate(W, x, g @ k, u):
                fails += 1
    return InfinityReport(len(ks), dim, checks, fails)


# -- homs out of V_n and the generator X^alpha Y^(n - alpha) ----------------------------

@dataclass
class HomData:
    """An L-linear map psi: V_n(L) -> L^m, stored by the images of the monomials."""
    n: int
    ring: object
    images: list            # images[j] = psi(X^j Y^(n-j)), tuples of length m

    def __call__(self, P: HomPoly):
        R = self.ring
        m = len(self.images[0])
        out = [R.zero] * m
        for c, img in zip(P.coeffs, self.images):
            for i in range(m):
                out[i] = R.add(out[i], R.mul(c, img[i]))
        return tuple(out)


@dataclass
class GeneratorImage:
    n: int
    ring: object
    alpha: int
    image: tuple


def target_action(ring, n):
    """The G(K_inf)-action on the target L^(n+1) = V_n(L) used for sample homs."""
    def act(g, vec):
        return tuple(_mv(ring, rho_matrix(ring, g, n), vec))
    return act


def restrict_to_generator(psi: HomData, p: int) -> GeneratorImage:
    a = generator_vector(psi.ring, psi.n)[0] if psi.n else 0
    return GeneratorImage(psi.n, psi.ring, a, tuple(psi.images[a]))


def extend_from_generator(img: GeneratorImage, p: int, f: int = 1, act=None, sample_set=None) -> HomData:
    """Rebuild psi from psi(X^alpha Y^(n - alpha)) by replaying the closure words.

    psi(rho(w) e_alpha) = w . psi(e_alpha); monomials are then solved for in
    terms of the closure basis.
    """
    n, R = img.n, img.ring
    if n == 0:
        return HomData(0, R, [img.image])
    act = act or target_action(R, n)
    cl = cyclicity_closure(p, f, n, sample_set=sample_set, ring=R)
    if not cl.complete:
        raise ClosureIncomplete(f"closure reached dimension {cl.dimension} < {n + 1}")
    basis_images = []
    for word in cl.words:
        v = img.image
        for k in word:
            v = act(cl.generators[k], v)
        basis_images.append(v)
    # express each monomial in the closure basis: solve B^T c = e_j
    from .algebra import kernel_over_field
    m = len(img.image)
    images = []
    for j in range(n + 1):
        # augmented system [b_0 .. b_n | -e_j] x = 0 with last coordinate 1
        cols = [list(b) for b in cl.basis]
        target = [R.one if i == j else R.zero for i in range(n + 1)]
        rows = [[cols[c][i] for c in range(len(cols))] + [R.neg(target[i])] for i in range(n + 1)]
        ker = kernel_over_field(rows, R, len(cols) + 1)
        sol = next(v for v in ker if not R.is_zero(v[-1]))
        scale = R.inv(sol[-1])
        coeffs = [R.mul(scale, c) for c in sol[:-1]]
        out = [R.zero] * m
        for c, bimg in zip(coeffs, basis_images):
            for i in range(m):
                out[i] = R.add(out[i], R.mul(c, bimg[i]))
        images.append(tuple(out))
    return HomData(n, R, images)


def block_hom(ring, n, scalars):
    """v -> (c_1 v, ..., c_m v) : V_n -> V_n^m, equivariant for :func:`block_action`."""
    images = []
    for j in range(n + 1):
        img = []
        for c in scalars:
            img.extend(c if i == j else ring.zero for i in range(n + 1))
        images.append(tuple(img))
    return HomData(n, ring, images)


def block_action(ring, n, m):
    """rho_n acting diagonally on V_n^m."""
    def act(g, vec):
        M = rho_matrix(ring, g, n)
        out = []
        for b in range(m):
            out.extend(_mv(ring, M, vec[b * (n + 1):(b + 1) * (n + 1)]))
        return tuple(out)
    return act


def cocycle_hom(space: InvariantSpace, vec: dict) -> HomData:
    """A weight-2 invariant cocycle as a hom out of V_0 = L: 1 -> its orbit values."""
    if space.n:
        raise ValueError("only weight 2 cocycles are homs out of V_0")
    orbits = sorted(vec)
    return HomData(0, space.ring, [tuple(vec[o][0] for o in orbits)])


# -- lifting to Galois rings --------------------------------------------------------------

@dataclass
class LiftReport:
    k: int
    ring: str
    reduces_exactly: bool
    residual_zero: bool | None   # lifted data also solves the constraint system over the ring
    lifted: object


def lift_vector(R: GaloisRing, vec, rng: random.Random | None = None):
    """Naive lift; with ``rng`` a random element of the maximal ideal is added."""
    out = []
    for a in vec:
        b = naive_lift(R, a)
        if rng is not None:
            noise = R.from_vector([R.p * rng.randrange(R.pk // R.p) for _ in range(R.f)])
            b = R.add(b, noise)
        out.append(b)
    return tuple(out)


def reduce_vector(R: GaloisRing, vec):
    return tuple(residue_map(R, a) for a in vec)


def lift_hom(psi: HomData, k: int, rng: random.Random | None = None) -> LiftReport:
    """Lift a hom over F_q to GR(p^k, f) and check that it reduces back exactly.

    For n = 0 the generator image is lifted and spread as a scalar; for n > 0
    the monomial images are lifted coefficientwise.  Only the residual
    identity is claimed, not linearity or equivariance over the ring.
    """
    F = psi.ring
    if not isinstance(F, GaloisRing) or F.k != 1:
        raise TypeError("lift_hom expects a hom over a finite field")
    R = F.lift_ring(k)
    if psi.n == 0:
        img = restrict_to_generator(psi, F.p)
        lifted_img = GeneratorImage(0, R, 0, lift_vector(R, img.image, rng))
        lifted = extend_from_generator(lifted_img, F.p)
    else:
        lifted = HomData(psi.n, R, [lift_vector(R, im, rng) for im in psi.images])
    back = [reduce_vector(R, im) for im in lifted.images]
    return LiftReport(k, R.name, back == [tuple(im) for im in psi.images], None, lifted)


def lift_cocycle(space: InvariantSpace, vec: dict, k: int, rng=None) -> LiftReport:
    """Lift a weight-2 cocycle over F_q to GR(p^k, f); also reports whether it solves the ring system."""
    F = space.ring
    rep = lift_hom(cocycle_hom(space, vec), k, rng)
    R = F.lift_ring(k)
    orbits = sorted(vec)
    lifted = {o: (c,) for o, c in zip(orbits, rep.lifted.images[0])}
    col = {o: i for i, o in enumerate(space.unknown_orbits)}
    rows = []
    for vid in space.harmonic_vertices:
        rows.extend(_harmonic_rows(space.QG, R, 0, vid, col))
    x = [lifted.get(o, (R.zero,))[0] for o in space.unknown_orbits]
    rep.residual_zero = all(R.is_zero(_dot(R, r, x)) for r in rows)
    rep.lifted = lifted
    return rep


def _dot(R, r, x):
    acc = R.zero
    for a, b in zip(r, x):
        acc = R.add(acc, R.mul(a, b))
    return acc


# -- weight 2 over Z ---------------------------------------------------------------------

@dataclass
class Weight2Report:
    gamma: str
    depth: int
    p: int
    support: str
    free_rank: int
    invariant_factors: list      # nontrivial invariant factors of the Z system
    fp_dimension: int
    reduced_rank: int
    reduction_surjective: bool
    systems_match: bool          # the F_p matrix is the reduction of the Z matrix

    def to_json(self):
        return {"format": "cocycle-forge/1", "kind": "weight2", **self.__dict__}


def weight2_integral(G: ArithmeticGroup, depth: int, support="H", QG=None) -> Weight2Report:
    """Solve weight 2 over Z and F_p; does reduction mod p of the Z-solutions span the F_p-solutions?"""
    QG = QG or quotient_graph(G, depth)
    p = G.F.p
    Fp = FiniteField(p, 1)
    sz = invariant_space(QG, 2, ZZ, support=support)
    sp = invariant_space(QG, 2, Fp, support=support)
    match = [[Fp.from_int(a) for a in row] for row in sz.matrix] == [list(r) for r in sp.matrix]
    cols = sz.unknown_orbits
    red = [[Fp.from_int(vec[o][0]) for o in cols] for vec in sz.basis]
    for r in red:
        for row in sp.matrix:
            if not Fp.is_zero(_dot(Fp, row, r)):
                raise InvarianceViolation("reduction of a Z-solution does not solve the F_p system", r)
    rr = rank(red, Fp) if red else 0
    factors = [int(d) for d in (sz.invariant_factors or []) if abs(d) not in (0, 1)]
    return Weight2Report(G.name, QG.depth, p, support, sz.dimension, factors, sp.dimension, rr,
                         rr == sp.dimension, match)
