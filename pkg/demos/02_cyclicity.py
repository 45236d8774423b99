"""Cyclicity of V_n over F_p: one vector and a handful of matrices span everything.

The generator is X^alpha Y^(n - alpha) where alpha is the largest degree <= n
at which every binomial coefficient survives mod p.
"""
from cocycle_forge.algebra import FiniteField, FunctionField
from cocycle_forge.representations import (HomPoly, alpha, closure_from, cyclicity_closure,
                                           dee_table, default_samples, proof_matrices)

for p in (2, 3):
    members = [n for n, ok in dee_table(p, 40) if ok]
    print(f"p = {p}: degrees with all binomials nonzero: {members}")

print("\n p  n  alpha  closure_dim")
for p in (2, 3):
    for n in range(1, 9):
        cl = cyclicity_closure(p, 1, n)
        print(f"{p:>2} {n:>2} {alpha(n, p):>6} {cl.dimension:>12}")

# starting from X^n instead fails when p divides n: Frobenius keeps us in p-th powers
F = FiniteField(2)
K = FunctionField(F, "pi")
gens = [g for a in default_samples(F) for g in proof_matrices(a)]
for n in (2, 4, 6, 8):
    dim, _ = closure_from(K, n, HomPoly.monomial(K, n, n), gens)
    print(f"start X^{n}: closure dimension {dim} of {n + 1}")
