"""From invariant cocycles to equivariant maps on the special representation and back.

Each basis cocycle becomes an evaluator on step functions.  We read the
cocycle back off the evaluator, test equivariance on random group elements,
then lift the mod-2 cocycles to Z/4 and Z/8 and reduce again.
"""
from cocycle_forge.algebra import FunctionField, field_from_q
from cocycle_forge.cocycles import invariant_space
from cocycle_forge.correspondence import (basis_cocycles, check_equivariance, evaluator,
                                          hom_to_cocycle, lift_cocycle, same_cocycle,
                                          support_certificate, weight2_integral)
from cocycle_forge.quotient import ArithmeticGroup, quotient_graph

F = field_from_q(2)

for spec, weight, ring in [("gamma0:t^3+t+1", 2, F), ("full", 5, FunctionField(F, "pi"))]:
    QG = quotient_graph(ArithmeticGroup.parse(F, spec), 6)
    sp = invariant_space(QG, weight, ring, support="H")
    print(f"{spec}, weight {weight}: {sp.dimension} basis cocycles")
    for i, gc in enumerate(basis_cocycles(sp)):
        W = evaluator(gc)
        back = same_cocycle(hom_to_cocycle(W)["x0"], gc["x0"])
        eq = check_equivariance(W, trials=30, seed=i)
        cert = support_certificate(W, draws=100, seed=i)
        print(f"  #{i}: round trip {back}, equivariance {eq.checks - len(eq.failures)}/{eq.checks}, "
              f"support orbits {cert.orbits}")

QG = quotient_graph(ArithmeticGroup.parse(F, "gamma0:t^3+t+1"), 6)
sp = invariant_space(QG, 2, F, support="H")
print("\nlifting mod-2 cocycles")
for k in (2, 3):
    reps = [lift_cocycle(sp, vec, k) for vec in sp.basis]
    print(f"  GR(2^{k}): reduce(lift) exact for {sum(r.reduces_exactly for r in reps)}/{len(reps)}")

rep = weight2_integral(QG.group, 6, QG=QG)
print(f"\nintegral weight 2: free rank {rep.free_rank}, F_2 dimension {rep.fp_dimension}, "
      f"reduction surjective {rep.reduction_surjective}")
