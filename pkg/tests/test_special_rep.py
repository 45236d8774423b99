import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cocycle_forge.algebra import FunctionField, PolyMatrix, field_from_q
from cocycle_forge.cocycles import gamma_action, invariant_space, is_harmonic
from cocycle_forge.errors import EdgeNotPresent, IncompatibleWeight
from cocycle_forge.quotient import ArithmeticGroup, quotient_graph
from cocycle_forge.representations import HomPoly
from cocycle_forge.special_rep import (StepFunction, from_indicator, normal_form,
                                       normal_presentation, pairing, refine, sp_apply,
                                       step_dumps, step_from_json, step_to_json, tensor_embed)
from cocycle_forge.tree import (TreeEdge, ball, children, outgoing_edges, parent,
                                random_boundary_point, random_group_element, random_vertex,
                                standard_vertex)

from oracles import random_edge_function, refinement_invariant

F2 = field_from_q(2)
F3 = field_from_q(3)


def _random_step(F, rng, n=0, terms=3, ring=None):
    ring = ring or F
    out = []
    for _ in range(terms):
        v = random_vertex(F, rng, radius=3)
        e = TreeEdge(v, rng.choice([parent(v)] + children(v)))
        out.append((e, HomPoly(n, tuple(ring.from_int(rng.randrange(F.p)) for _ in range(n + 1)), ring)))
    return StepFunction(n, ring, out)


def test_indicator_and_its_complement_sum_to_a_constant():
    e = outgoing_edges(standard_vertex(F2))[1]
    one = HomPoly(0, (1,), F2)
    assert (from_indicator(e, one) + from_indicator(-e, one)).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([2, 3]))
def test_refinement_does_not_change_the_class(seed, q):
    F = field_from_q(q)
    rng = random.Random(seed)
    h = _random_step(F, rng)
    e = rng.choice(h.edges())
    assert refine(h, e) == h


def test_refine_requires_the_edge():
    v = standard_vertex(F2)
    h = from_indicator(TreeEdge(parent(v), v), HomPoly(0, (1,), F2))
    with pytest.raises(EdgeNotPresent):
        refine(h, TreeEdge(v, parent(v)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_normal_form_agrees_with_pointwise_values(seed):
    rng = random.Random(seed)
    h = _random_step(F3, rng)
    nf = normal_presentation(h)
    diffs = set()
    for _ in range(15):
        b = random_boundary_point(F3, rng, lo=-5, hi=12)
        diffs.add(tuple(F3.sub(a, c) for a, c in zip(h(b).coeffs, nf(b).coeffs)))
    assert len(diffs) == 1       # equal up to one constant


def test_normal_form_is_canonical():
    v = standard_vertex(F2)
    one = HomPoly(0, (1,), F2)
    # 1_D for D = disk at v, written as the sum over its two children
    split = StepFunction(0, F2, [(TreeEdge(v, c), one) for c in children(v)])
    whole = from_indicator(TreeEdge(parent(v), v), one)
    assert normal_form(split) == normal_form(whole)
    assert len(normal_form(whole)) == 1


@pytest.mark.parametrize("q", [2, 3])
def test_action_composes(q):
    F = field_from_q(q)
    K = FunctionField(F, "pi")
    rng = random.Random(q)
    for n, ring in ((0, F), (2, K)):
        for _ in range(15):
            g, g2 = random_group_element(F, rng), random_group_element(F, rng)
            if n:
                # exact elements keep rho_n inside F_q(pi)
                g = PolyMatrix.parse(F, "[[1+t,t],[1,1]]").to_matrix2()
                g2 = PolyMatrix.parse(F, "[[0,1],[1,t]]").to_matrix2()
            h = _random_step(F, rng, n=n, ring=ring)
            assert sp_apply(g @ g2, h) == sp_apply(g, sp_apply(g2, h))


def test_pairing_weight_check():
    QG = quotient_graph(ArithmeticGroup.parse(F2, "gamma0:t"), 5)
    f = invariant_space(QG, 2, F2, support="H").cocycle(0)
    with pytest.raises(IncompatibleWeight):
        pairing(f, StepFunction(1, F2, []))


def test_pairing_is_equivariant():
    rng = random.Random(11)
    for _ in range(30):
        f, _ = random_edge_function(F2, standard_vertex(F2), 4, rng)
        h = _random_step(F2, rng, terms=2)
        h = StepFunction(0, F2, [(e, lam) for e, lam in h.terms if e.origin in _ball(3)
                                 and e.terminus in _ball(3)])
        g = random_group_element(F2, rng, prec=3, spread=0)
        moved = gamma_action(g, f)
        assert pairing(moved, sp_apply(g, h)) == pairing(f, h)


_BALLS = {}


def _ball(r):
    if r not in _BALLS:
        _BALLS[r] = set(ball(standard_vertex(F2), r)[0])
    return _BALLS[r]


def test_refinement_invariance_iff_harmonic():
    rng = random.Random(5)
    c = standard_vertex(F3)
    for i in range(40):
        f, _ = random_edge_function(F3, c, 3, rng, harmonic=i % 2 == 0)
        inner = list(ball(c, 2)[0])
        assert refinement_invariant(f, c, 3) == is_harmonic(f, inner)[0]


def test_tensor_embed_and_json():
    K = FunctionField(F2, "pi")
    rng = random.Random(2)
    h0 = _random_step(F2, rng)
    lam = HomPoly(1, (K.one, K.zero), K)
    h = tensor_embed(h0, lam)
    assert h.n == 1 and len(h.terms) == len(h0.terms)
    doc = step_to_json(h0)
    assert doc["format"] == "cocycle-forge/1"
    back = step_from_json(json.loads(step_dumps(h0)), F2, F2)
    assert back == h0
