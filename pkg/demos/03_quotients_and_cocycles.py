"""Quotient graphs of congruence subgroups and their weight-2 cocycle spaces.

For each group we print the shape of the quotient (orbits, cusps, cycle rank
of the finite part) and the dimension of the invariant harmonic cocycles under
the three support conventions, over F_2 and over Z.

Over Z the cusp-vanishing space has rank betti1.  Over F_2 the full invariant
space is larger: it comes out as betti1 + cusps - 1 on every sample.
"""
from cocycle_forge.algebra import ZZ, field_from_q
from cocycle_forge.cocycles import invariant_space
from cocycle_forge.quotient import ArithmeticGroup, betti1, quotient_graph

F = field_from_q(2)
GROUPS = ["full", "gamma0:t", "gamma0:t^2", "gamma0:t^3+t+1", "gamma0:t^3+1", "gamma0:t^3"]

print(f"{'group':<16} {'V':>3} {'E':>3} {'cusps':>5} {'b1':>3}   "
      f"{'F2 H':>5} {'H!':>3} {'H!!':>4}   {'Z H':>4} {'H!':>3} {'H!!':>4}")
for spec in GROUPS:
    QG = quotient_graph(ArithmeticGroup.parse(F, spec), 5 if spec == "full" else 6)
    dims = [invariant_space(QG, 2, R, support=s).dimension
            for R in (F, ZZ) for s in ("H", "H!", "H!!")]
    print(f"{spec:<16} {len(QG.vertices):>3} {len(QG.edges):>3} {len(QG.cusps):>5} "
          f"{betti1(QG):>3}   {dims[0]:>5} {dims[1]:>3} {dims[2]:>4}   "
          f"{dims[3]:>4} {dims[4]:>3} {dims[5]:>4}")

QG = quotient_graph(ArithmeticGroup.parse(F, "gamma0:t"), 5)
print()
print(QG.to_dot())
