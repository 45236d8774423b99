"""Walk around the Bruhat-Tits tree of GL2 over F_2((1/t)).

Builds a small ball, checks that every vertex has q + 1 neighbours, and moves
the standard vertex around with a few elements of GL2(F_2[t]).
"""
import random

from cocycle_forge.algebra import PolyMatrix, field_from_q
from cocycle_forge.tree import (act_vertex, ball, ball_to_dot, distance, neighbors,
                                random_group_element, random_vertex, standard_vertex)

F = field_from_q(2)
v0 = standard_vertex(F)

verts, edges = ball(v0, 2)
print(f"radius-2 ball around {v0}: {len(verts)} vertices, {len(edges)} edges")
print("neighbour counts:", sorted({len(neighbors(v)) for v in verts}))

# the matrix [[t,1],[1,0]] has determinant 1 and moves v0 one step away
g = PolyMatrix.parse(F, "[[t,1],[1,0]]").to_matrix2()
w = act_vertex(g, v0)
print(f"[[t,1],[1,0]] sends {v0} to {w} at distance {distance(v0, w)}")

# isometry on random pairs
rng = random.Random(0)
for _ in range(5):
    h = random_group_element(F, rng)
    a, b = random_vertex(F, rng), random_vertex(F, rng)
    print(f"d = {distance(a, b)} before, {distance(act_vertex(h, a), act_vertex(h, b))} after")

print()
print(ball_to_dot(*ball(v0, 1)))
