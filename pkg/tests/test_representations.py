import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cocycle_forge.algebra import FiniteField, FunctionField, Matrix2, PolyMatrix, TruncatedSeries
from cocycle_forge.algebra.poly import polys_of_degree_at_most
from cocycle_forge.errors import NotApplicable, TooLarge
from cocycle_forge.representations import (DualVec, HomPoly, Twist, alpha, closure_from,
                                           cyclicity_closure, dee_contains, dee_table,
                                           default_samples, evaluate_dual, irreducibility_probe,
                                           proof_matrices, rho_apply, rho_dual_apply, rho_matrix,
                                           subrep_probe)

from oracles import all_binomials_survive, dee_by_definition, gl2a_elements, substitute

PRIMES = [2, 3, 5, 7]


@pytest.mark.parametrize("p", PRIMES)
def test_dee_against_both_oracles(p):
    for n in range(1, 120):
        assert dee_contains(n, p) == dee_by_definition(n, p) == all_binomials_survive(n, p)


def test_dee_table_small():
    # frozen from the binomial oracle
    assert [n for n, x in dee_table(2, 20) if x] == [1, 3, 7, 15]
    assert [n for n, x in dee_table(3, 20) if x] == [1, 2, 5, 8, 17]


@given(st.integers(1, 3000), st.sampled_from(PRIMES))
def test_alpha_is_largest_member_and_at_least_half(n, p):
    a = alpha(n, p)
    assert a <= n and dee_contains(a, p)
    assert 2 * a >= n
    assert not any(dee_contains(m, p) for m in range(a + 1, n + 1))


def _const_matrix(F, a, b, c, d):
    return PolyMatrix.from_ints(F, a, b, c, d).to_matrix2()


@pytest.mark.parametrize("p", [2, 3])
def test_rho_matches_substitution(p):
    F = FiniteField(p)
    rng = random.Random(p)
    for n in range(0, 6):
        for _ in range(10):
            while True:
                a, b, c, d = (rng.randrange(p) for _ in range(4))
                if (a * d - b * c) % p:
                    break
            g = _const_matrix(F, a, b, c, d)
            det = (a * d - b * c) % p
            dinv = pow(det, -1, p)
            ginv = (d * dinv, -b * dinv, -c * dinv, a * dinv)
            P = [rng.randrange(p) for _ in range(n + 1)]
            got = rho_apply(g, HomPoly(n, tuple(P), F))
            assert list(got.coeffs) == substitute(P, ginv, p)


def _exact_elements(F, count, seed):
    els = [g for g in gl2a_elements(F, 1)]
    rng = random.Random(seed)
    return [rng.choice(els).to_matrix2() for _ in range(count)]


def test_rho_is_a_homomorphism_over_function_field():
    F = FiniteField(2)
    K = FunctionField(F, "pi")
    gs = _exact_elements(F, 12, 0)
    for n in (1, 3, 4):
        for g, h in zip(gs, gs[1:]):
            P = HomPoly(n, tuple(K.from_int(i % 2) for i in range(n + 1)), K)
            assert rho_apply(g @ h, P) == rho_apply(g, rho_apply(h, P))


def test_dual_pairing_is_invariant():
    F = FiniteField(3)
    K = FunctionField(F, "pi")
    rng = random.Random(5)
    for g in _exact_elements(F, 10, 1):
        n = 3
        P = HomPoly(n, tuple(K.from_int(rng.randrange(3)) for _ in range(n + 1)), K)
        phi = DualVec(n, tuple(K.from_int(rng.randrange(3)) for _ in range(n + 1)), K)
        assert evaluate_dual(rho_dual_apply(g, phi), rho_apply(g, P)) == evaluate_dual(phi, P)


def test_det_twist_is_multiplicative():
    F = FiniteField(3)
    K = FunctionField(F, "pi")
    tw = Twist(l=1)
    gs = _exact_elements(F, 8, 2)
    P = HomPoly(2, (K.one, K.from_int(2), K.zero), K)
    for g, h in zip(gs, gs[1:]):
        assert rho_apply(g @ h, P, tw) == rho_apply(g, rho_apply(h, P, tw), tw)


def test_character_twist_on_constants():
    F = FiniteField(3)
    tw = Twist(xi_gen=2, xi_pi=1, generator=2)     # the sign character of F_3^*
    els = [g.to_matrix2() for g in gl2a_elements(F, 0)]
    assert len(els) == 48
    P = HomPoly(1, (1, 2), F)
    for g, h in itertools.islice(itertools.product(els, repeat=2), 0, 2304, 37):
        assert rho_apply(g @ h, P, tw) == rho_apply(g, rho_apply(h, P, tw), tw)


def test_proof_matrices_have_exact_inverses():
    F = FiniteField(2)
    for a in default_samples(F):
        gamma, delta = proof_matrices(a)
        one = Matrix2.identity(F)
        assert (gamma @ gamma.inverse_hint).agrees(one)
        assert (delta @ delta.inverse_hint).agrees(one)


@pytest.mark.parametrize("p", [2, 3])
def test_cyclicity_small_n(p):
    for n in range(1, 7):
        cl = cyclicity_closure(p, 1, n)
        assert cl.complete and cl.dimension == n + 1
        assert cl.alpha == alpha(n, p)
        assert len(cl.words) == len(cl.basis) == n + 1


def test_cyclicity_n_zero():
    cl = cyclicity_closure(2, 1, 0)
    assert cl.complete and cl.dimension == 1


def test_negative_control_p_divides_n():
    F = FiniteField(2)
    K = FunctionField(F, "pi")
    gens = [g for a in default_samples(F) for g in proof_matrices(a)]
    for n in (2, 4, 6):
        dim, _ = closure_from(K, n, HomPoly.monomial(K, n, n), gens)
        assert dim <= n // 2 + 1


def test_subrep_probe():
    stable, bound = subrep_probe(2, 4)
    assert stable and bound == 3
    with pytest.raises(NotApplicable):
        subrep_probe(2, 3)


def test_irreducibility_probe_small_cases():
    # frozen from exhaustive enumeration of GL2(F_q)
    assert irreducibility_probe(FiniteField(2), 1).irreducible
    assert not irreducibility_probe(FiniteField(2), 2).irreducible
    assert irreducibility_probe(FiniteField(3), 1).irreducible
    assert irreducibility_probe(FiniteField(3), 2).irreducible
    v = irreducibility_probe(FiniteField(2), 2)
    assert v.group_order == 6 and v.witness


def test_irreducibility_probe_refuses_large_fields():
    with pytest.raises(TooLarge):
        irreducibility_probe(FiniteField(5), 1)
