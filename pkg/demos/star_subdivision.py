"""Blowing up the corner of a two-dimensional cone, twice over.

Each star subdivision adds the ray N_i + N_j and cuts cone{N_i, N_j} along it.

Run with ``python demos/star_subdivision.py``.
"""

from weakfan import corpus as C
from weakfan.fan import cardinality_criterion, locate, make_fan, star_subdivide

L, F = C.siegel_lattice(), C.siegel_flag()
n1, n2 = C.quadric(1, 0), C.quadric(0, 1)
fan = make_fan(L, [(C.siegel_sigma(), F)])


def show(label, fan):
    rays = len(fan.of_dim(1))
    chambers = len(fan.of_dim(2))
    print(f"{label}: {rays} rays, {chambers} chambers, {cardinality_criterion(fan).verdict}")


show("start", fan)
fan, report = star_subdivide(fan, n1, n2)
show("after star at N1, N2", fan)
fan, _ = star_subdivide(fan, n1, n1 + n2)
fan, _ = star_subdivide(fan, n1 + n2, n2)
show("after both children", fan)

# every interior point of the original cone now lies in exactly one piece
hits = {len(locate(fan, n1.scale(a) + n2.scale(b))) for a in range(1, 8) for b in range(1, 8)}
print("pieces containing each sampled point:", hits)
