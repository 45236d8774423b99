"""Acceptance criteria 1-11, each with its time limit and one PASS/FAIL line.

The lines are printed as the tests run (visible with ``-s``) and repeated in
the terminal summary.
"""
import os
import random
import subprocess
import sys
import time

import pytest

from cocycle_forge.algebra import ZZ, FiniteField, FunctionField, field_from_q
from cocycle_forge.cocycles import invariant_space, is_harmonic, support_check
from cocycle_forge.correspondence import (basis_cocycles, check_equivariance, cocycle_hom,
                                          evaluator, hom_to_cocycle, lift_cocycle, lift_hom,
                                          same_cocycle, weight2_integral)
from cocycle_forge.quotient import ArithmeticGroup, betti1, quotient_graph, verify_quotient
from cocycle_forge.representations import (DualVec, HomPoly, alpha, closure_from, cyclicity_closure,
                                           dee_contains, default_samples, proof_matrices)
from cocycle_forge.tree import (Matrix2, act_edge, act_vertex, ball, distance, neighbors,
                                outgoing_edges, random_group_element, random_vertex,
                                standard_vertex)

from conftest import ACCEPTANCE
from oracles import all_binomials_survive, random_edge_function, refinement_invariant

F2 = field_from_q(2)

# Gamma samples shipped with the package
GAMMA0_DEG3 = ["gamma0:t^3+t+1", "gamma0:t^3+1", "gamma0:t^3+t^2", "gamma0:t^3"]
SAMPLES = ["full", "gamma0:t", "gamma0:t^2", "gamma1:t", "gammaFull:t"] + GAMMA0_DEG3

_QG = {}


def qg(spec, depth=6):
    if (spec, depth) not in _QG:
        _QG[(spec, depth)] = quotient_graph(ArithmeticGroup.parse(F2, spec), depth)
    return _QG[(spec, depth)]


def record(n, ok, elapsed, limit, detail=""):
    line = f"ACCEPTANCE {n:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:.1f}s / {limit}s)  {detail}"
    ACCEPTANCE[n] = line
    print(line)
    return ok and elapsed < limit


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_1_tree_regularity_and_action():
    with Clock() as c:
        bad = 0
        for q in (2, 3, 4):
            F = field_from_q(q)
            verts, _ = ball(standard_vertex(F), 5)
            bad += sum(1 for v in verts if len(set(neighbors(v))) != q + 1)
        checks = fails = 0
        rng = random.Random(1)
        for i in range(1000):
            F = field_from_q((2, 3, 4)[i % 3])
            g, h = random_group_element(F, rng), random_group_element(F, rng)
            v, w = random_vertex(F, rng), random_vertex(F, rng)
            e = rng.choice(outgoing_edges(v))
            ok = (act_vertex(g @ h, v) == act_vertex(g, act_vertex(h, v))
                  and act_vertex(Matrix2.identity(F), v) == v
                  and distance(act_vertex(g, v), act_vertex(g, w)) == distance(v, w)
                  and act_edge(g, e).terminus in neighbors(act_edge(g, e).origin))
            checks += 1
            fails += not ok
    assert record(1, bad == 0 and fails == 0, c.elapsed, 30,
                  f"irregular vertices {bad}; action checks {checks}, failures {fails}")


def test_2_dee_criterion():
    with Clock() as c:
        dis = [(n, p) for p in (2, 3, 5, 7) for n in range(1, 301)
               if dee_contains(n, p) != all_binomials_survive(n, p)]
    assert record(2, not dis, c.elapsed, 5, f"disagreements {len(dis)}")


def test_3_alpha_bound():
    with Clock() as c:
        low = [(n, p) for p in (2, 3, 5, 7) for n in range(1, 10 ** 4 + 1) if 2 * alpha(n, p) < n or (alpha(n, p) == n) != dee_contains(n, p)]
    assert record(3, not low, c.elapsed, 5, f"violations {len(low)}")


def test_4_cyclicity():
    with Clock() as c:
        short = []
        for p in (2, 3):
            for n in range(1, 11):
                cl = cyclicity_closure(p, 1, n)
                if cl.dimension != n + 1:
                    short.append((p, n, cl.dimension))
        control = []
        for p in (2, 3):
            F = FiniteField(p)
            K = FunctionField(F, "pi")
            gens = [g for a in default_samples(F) for g in proof_matrices(a)]
            for n in range(p, 11, p):
                dim, _ = closure_from(K, n, HomPoly.monomial(K, n, n), gens)
                if dim > n // p + 1:
                    control.append((p, n, dim))
    assert record(4, not short and not control, c.elapsed, 120,
                  f"incomplete closures {short}; control breaches {control}")


def test_5_harmonicity_iff_pairing_well_defined():
    F3 = field_from_q(3)
    center = standard_vertex(F3)
    inner = list(ball(center, 2)[0])
    with Clock() as c:
        rng = random.Random(5)
        agree = 0
        seen = {True: 0, False: 0}
        for i in range(200):
            f, _ = random_edge_function(F3, center, 3, rng, harmonic=i % 2 == 0)
            h = is_harmonic(f, inner)[0]
            seen[h] += 1
            agree += refinement_invariant(f, center, 3) == h
        # constructed counterexamples in both directions: break a harmonic function at one
        # edge, then repair a broken one by restoring that edge
        f, _ = random_edge_function(F3, center, 3, rng, harmonic=True)
        e = outgoing_edges(center)[0]
        good = f.value(e)
        f.set(e, good + DualVec(0, (1,), F3))
        broken = (not is_harmonic(f, inner)[0], not refinement_invariant(f, center, 3))
        f.set(e, good)
        repaired = (is_harmonic(f, inner)[0], refinement_invariant(f, center, 3))
    ok = agree == 200 and seen[True] and seen[False] and all(broken) and all(repaired)
    assert record(5, ok, c.elapsed, 60,
                  f"agreement {agree}/200 (harmonic {seen[True]}, not {seen[False]}); "
                  f"broken {broken}; repaired {repaired}")


def test_6_full_group_quotient():
    with Clock() as c:
        QG = quotient_graph(ArithmeticGroup(F2), 5)
        ray = len(QG.cusps) == 1 and betti1(QG) == 0 and verify_quotient(QG) == []
        no_rev = not any(e.reversed_by_gamma for e in QG.edges)
        d_f2 = invariant_space(QG, 2, F2, support="H").dimension
        d_z = invariant_space(QG, 2, ZZ, support="H").dimension
    ok = ray and no_rev and d_f2 == 0 and d_z == 0
    assert record(6, ok, c.elapsed, 120,
                  f"single ray {ray}; reversals none {no_rev}; dim F2 {d_f2}; rank Z {d_z}")


def test_7_support_and_ray_levels():
    with Clock() as c:
        bad_support, grew = [], []
        for spec in SAMPLES:
            QG = qg(spec, 5 if spec == "full" else 6)
            for support in ("H", "H!", "H!!"):
                sp = invariant_space(QG, 2, F2, support=support)
                if not support_check(sp):
                    bad_support.append((spec, support))
            base = invariant_space(QG, 2, F2, support="H!").dimension
            for k in (1, 2):
                if invariant_space(QG, 2, F2, support="H!", extra_levels=k).dimension > base:
                    grew.append((spec, k))
    assert record(7, not bad_support and not grew, c.elapsed, 300,
                  f"support violations {bad_support}; growth under extra levels {grew}")


@pytest.mark.xfail(strict=True, reason="over F_2 the invariant weight-2 space exceeds betti1 "
                                       "by (cusps - 1); the criterion is reported as failing")
def test_8_weight2_topology():
    with Clock() as c:
        rows = []
        for spec in GAMMA0_DEG3:
            QG = qg(spec)
            d = invariant_space(QG, 2, F2, support="H").dimension
            rows.append((spec, d, betti1(QG), len(QG.cusps)))
    ok = all(d == b for _, d, b, _ in rows)
    detail = "; ".join(f"{s}: dim {d}, betti1 {b}, cusps {k}" for s, d, b, k in rows)
    assert record(8, ok, c.elapsed, 300, detail)


def test_9_correspondence_round_trips():
    K = FunctionField(F2, "pi")
    cases = [("gamma0:t", 6, 2, F2), ("gamma0:t^3+t+1", 6, 2, F2), ("gamma0:t^3", 6, 2, F2),
             ("full", 6, 5, K)]
    with Clock() as c:
        n_basis = trips = checks = fails = 0
        for spec, depth, weight, ring in cases:
            sp = invariant_space(qg(spec, depth), weight, ring, support="H")
            for gc in basis_cocycles(sp):
                n_basis += 1
                W = evaluator(gc)
                trips += same_cocycle(hom_to_cocycle(W)["x0"], gc["x0"])
                rep = check_equivariance(W, trials=100, seed=n_basis)
                checks += rep.checks
                fails += len(rep.failures)
    ok = trips == n_basis and fails == 0 and checks == 100 * n_basis
    assert record(9, ok, c.elapsed, 300,
                  f"round trips {trips}/{n_basis}; equivariance {checks} checks, {fails} failures")


def test_10_lifting():
    with Clock() as c:
        lifts = exact = 0
        for spec in ["gamma0:t", "gamma0:t^3+t+1", "gamma0:t^3"]:
            sp = invariant_space(qg(spec), 2, F2, support="H")
            for vec in sp.basis:
                for k in (2, 3):
                    lifts += 2
                    exact += lift_cocycle(sp, vec, k).reduces_exactly
                    exact += lift_hom(cocycle_hom(sp, vec), k, rng=random.Random(k)).reduces_exactly
        findings = []
        for spec in ["full"] + GAMMA0_DEG3:
            rep = weight2_integral(ArithmeticGroup.parse(F2, spec), 5 if spec == "full" else 6,
                                   support="H", QG=qg(spec, 5 if spec == "full" else 6))
            if not rep.reduction_surjective:
                findings.append(rep.to_json())
    for f in findings:
        print(f"FINDING (H!! convention): {f}")
    ok = exact == lifts and not findings
    assert record(10, ok, c.elapsed, 300,
                  f"exact reductions {exact}/{lifts}; non-surjective groups {len(findings)}")


CLI_COMMANDS = [
    ["tree", "ball", "--q", "3", "--radius", "2", "--format", "json"],
    ["tree", "act", "--q", "2"],
    ["rep", "dee", "--p", "5", "--max-n", "60"],
    ["rep", "alpha", "--p", "3", "--max-n", "60"],
    ["rep", "cyclicity", "--p", "2", "--max-n", "6"],
    ["rep", "probe", "--q", "2", "--max-n", "3"],
    ["quotient", "build", "--gamma", "gamma0:t^3+t+1", "--depth", "6", "--format", "json"],
    ["quotient", "build", "--gamma", "gamma0:t", "--format", "dot"],
    ["cocycles", "dim", "--gamma", "gamma0:t^3", "--depth", "6"],
    ["cocycles", "basis", "--gamma", "gamma0:t^3+t+1", "--depth", "6", "--ring", "z"],
    ["pairing", "demo", "--gamma", "gamma0:t"],
    ["corr", "roundtrip", "--gamma", "gamma0:t", "--trials", "10"],
    ["corr", "lift", "--gamma", "gamma0:t^3+t+1", "--depth", "6", "--k", "3"],
    ["corr", "weight2", "--gamma", "gamma0:t^3", "--depth", "6"],
]


def _run_cli(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    res = subprocess.run([sys.executable, "-m", "cocycle_forge", *argv, "--seed", "7"],
                         capture_output=True, env=env)
    return res.returncode, res.stdout, res.stderr


def test_11_cli_determinism():
    with Clock() as c:
        differ = [" ".join(argv) for argv in CLI_COMMANDS if _run_cli(argv, 1) != _run_cli(argv, 2)]
    assert record(11, not differ, c.elapsed, 600,
                  f"{len(CLI_COMMANDS)} commands, differing {differ}")
