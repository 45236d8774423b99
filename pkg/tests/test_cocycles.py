import dataclasses
import json
import random

import jsonschema
import pytest

from cocycle_forge.algebra import ZZ, FiniteField, FunctionField, GaloisRing, field_from_q
from cocycle_forge.cocycles import (HarmonicCocycle, _mv, dual_matrix, gamma_action, invariant_extend,
                                    invariant_space, is_harmonic, parse_ring, support_check,
                                    verify_space)
from cocycle_forge.errors import OutOfExploredRegion, RingMismatch
from cocycle_forge.quotient import ArithmeticGroup, betti1, quotient_graph, stabilizer
from cocycle_forge.representations import DualVec
from cocycle_forge.schemas import SCHEMAS
from cocycle_forge.tree import (TreeEdge, act_edge, act_vertex, outgoing_edges, random_group_element,
                                standard_vertex, vertex)

from oracles import brute_kernel_dim

F2 = field_from_q(2)


@pytest.fixture(scope="module")
def qg():
    cache = {}

    def get(spec, depth=6):
        if (spec, depth) not in cache:
            cache[(spec, depth)] = quotient_graph(ArithmeticGroup.parse(F2, spec), depth)
        return cache[(spec, depth)]
    return get


def _harmonic_at_root(seed, F=F2):
    """A random weight-2 cocycle: pick values on all but one outgoing edge, solve for the last."""
    rng = random.Random(seed)
    f = HarmonicCocycle(2, F)
    v0 = standard_vertex(F)
    edges = outgoing_edges(v0)
    acc = 0
    for e in edges[:-1]:
        a = rng.randrange(F.size)
        f.set(e, DualVec(0, (a,), F))
        acc = F.add(acc, a)
    f.set(edges[-1], DualVec(0, (F.neg(acc),), F))
    return f, v0


def test_antisymmetry_and_harmonicity():
    f, v0 = _harmonic_at_root(1)
    for e in outgoing_edges(v0):
        assert f.value(-e) == -f.value(e)
    assert is_harmonic(f, [v0]) == (True, None)
    g = HarmonicCocycle(2, F2)
    g.set(outgoing_edges(v0)[0], DualVec(0, (1,), F2))
    ok, bad = is_harmonic(g, [v0])
    assert not ok and bad == v0


def test_gamma_action_axioms():
    rng = random.Random(4)
    f, v0 = _harmonic_at_root(2)
    for _ in range(20):
        g, h = random_group_element(F2, rng), random_group_element(F2, rng)
        lhs = gamma_action(g, gamma_action(h, f))
        rhs = gamma_action(g @ h, f)
        assert lhs.values == rhs.values
        moved = gamma_action(g, f)
        assert is_harmonic(moved, [act_vertex(g, v0)])[0]


def test_parse_ring():
    assert parse_ring("z", F2) is ZZ
    assert parse_ring("f2", F2) == FiniteField(2)
    assert parse_ring("gr8_2", F2) == GaloisRing(2, 3, 2)
    assert isinstance(parse_ring("laurent", F2), FunctionField)


# frozen from the solver after cross-checks (brute-force kernel, betti oracle, verify_space)
DIMS = {
    ("full", "f2", "H"): 0, ("full", "f2", "H!!"): 0, ("full", "z", "H"): 0,
    ("gamma0:t", "f2", "H"): 1, ("gamma0:t", "f2", "H!!"): 0, ("gamma0:t", "z", "H"): 1,
    ("gamma0:t^3+t+1", "f2", "H"): 3, ("gamma0:t^3+t+1", "f2", "H!"): 3,
    ("gamma0:t^3+t+1", "f2", "H!!"): 2, ("gamma0:t^3+t+1", "z", "H"): 3,
    ("gamma0:t^3+t+1", "z", "H!"): 2, ("gamma0:t^3+t+1", "z", "H!!"): 2,
    ("gamma0:t^3+t+1", "gr4", "H"): 3, ("gamma0:t^3+t+1", "gr4", "H!!"): 2,
    ("gamma0:t^3", "f2", "H"): 4, ("gamma0:t^3", "f2", "H!!"): 2, ("gamma0:t^3", "z", "H!"): 1,
}


@pytest.mark.parametrize("spec,ring,support", list(DIMS))
def test_weight2_dimensions(spec, ring, support, qg):
    QG = qg(spec, 5 if spec == "full" else 6)
    sp = invariant_space(QG, 2, parse_ring(ring, F2), support=support)
    assert sp.dimension == DIMS[(spec, ring, support)]
    assert verify_space(sp) == []
    assert support_check(sp)


@pytest.mark.parametrize("spec", ["gamma0:t", "gamma0:t^3+t+1", "gamma0:t^2"])
def test_solver_against_enumeration(spec, qg):
    QG = qg(spec)
    for support in ("H!", "H!!"):
        sp = invariant_space(QG, 2, F2, support=support)
        ncols = len(sp.unknown_orbits)
        if ncols <= 14:
            assert sp.dimension == brute_kernel_dim(sp.matrix, ncols, 2)


@pytest.mark.parametrize("spec", ["gamma0:t^3+t+1", "gamma0:t^3+t^2", "gamma0:t^3+1", "gamma0:t^3"])
def test_doubly_cuspidal_rank_is_betti(spec, qg):
    """Over Z the cusp-vanishing space has rank b1; mod 2 it can only grow."""
    QG = qg(spec)
    b = betti1(QG)
    assert invariant_space(QG, 2, ZZ, support="H!!").dimension == b
    assert invariant_space(QG, 2, F2, support="H!!").dimension >= b


@pytest.mark.parametrize("spec", ["gamma0:t", "gamma0:t^3+t+1", "gamma0:t^3"])
def test_extra_ray_levels_never_increase_dimension_in_char_p(spec, qg):
    QG = qg(spec)
    base = invariant_space(QG, 2, F2, support="H!").dimension
    for k in (1, 2):
        assert invariant_space(QG, 2, F2, support="H!", extra_levels=k).dimension <= base


@pytest.mark.parametrize("spec", ["gamma0:t", "gamma0:t^3+t+1"])
def test_integral_vs_mod_p(spec, qg):
    QG = qg(spec)
    for support in ("H", "H!"):
        sz = invariant_space(QG, 2, ZZ, support=support)
        sp = invariant_space(QG, 2, F2, support=support)
        assert sp.dimension >= sz.dimension
        for vec in sz.basis:
            x = [vec[o][0] % 2 for o in sp.unknown_orbits]
            assert all(sum(a * b for a, b in zip(r, x)) % 2 == 0 for r in sp.matrix)


def test_invariant_extend_matches_group_action(qg):
    QG = qg("gamma0:t^3+t+1")
    sp = invariant_space(QG, 2, F2, support="H")
    vec = sp.basis[0]
    for eo in QG.edges[:6]:
        assert invariant_extend(sp, vec, eo.rep) == sp.dualvec(vec, eo.id)
    f = sp.cocycle(0)
    for vo in QG.vertices[:4]:
        for s in stabilizer(vo.rep, QG.group):
            moved = gamma_action(s, f)
            for e in outgoing_edges(vo.rep):
                assert moved.value(e) == f.value(e)


def test_invariant_extend_higher_weight_twists(qg):
    K = FunctionField(F2, "pi")
    QG = qg("full", 6)
    sp = invariant_space(QG, 5, K, support="H")
    assert sp.dimension == 1
    vec = sp.basis[0]
    for vo in QG.vertices[:3]:
        for s in stabilizer(vo.rep, QG.group)[:5]:
            M = dual_matrix(K, s, 3)
            g = s.to_matrix2()
            for e in outgoing_edges(vo.rep):
                lhs = invariant_extend(sp, vec, act_edge(g, e))
                rhs = invariant_extend(sp, vec, e)
                assert list(lhs.coeffs) == _mv(K, M, rhs.coeffs)


def test_out_of_region(qg):
    QG = qg("gamma0:t", 5)
    sp = invariant_space(QG, 2, F2, support="H")
    deep = vertex(F2, 7)
    with pytest.raises(OutOfExploredRegion):
        invariant_extend(sp, sp.basis[0], TreeEdge(deep, vertex(F2, 8)))


def test_ring_mismatch(qg):
    with pytest.raises(RingMismatch):
        invariant_space(qg("full", 5), 3, F2)


def test_support_check_rejects_deep_ray_values(qg):
    QG = qg("gamma0:t")
    sp = invariant_space(QG, 2, F2, support="H!")
    deep = QG.cusps[0].edges[-1]
    fake = dataclasses.replace(sp, basis=[{deep: (1,)}])
    assert not support_check(fake)
    assert support_check(dataclasses.replace(sp, basis=[]))


def test_json_schema(qg):
    sp = invariant_space(qg("gamma0:t^3+t+1"), 2, ZZ, support="H")
    doc = json.loads(json.dumps(sp.to_json()))
    jsonschema.validate(doc, SCHEMAS["cocycles"])
    assert doc["dimension"] == 3
