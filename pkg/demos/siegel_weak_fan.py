"""Two Siegel cones that overlap along a ray, and the subdivision that makes them a weak fan.

sigma = cone{x^2, y^2} and tau = cone{(x+y)^2, (x-y)^2} meet along x^2 + y^2
and share the base flag F^1 = span{b1, b2}.  The group is generated by the
Levi elements swapping x and y and negating y.

Run with ``python demos/siegel_weak_fan.py``.
"""

from weakfan import corpus as C
from weakfan.arithgroup import group_pool
from weakfan.cones import intersect_cones
from weakfan.fan import build_weak_fan, cardinality_criterion, intersection_counts, make_fan, weak_fan_check

L, F = C.siegel_lattice(), C.siegel_flag()
sigma, tau = C.siegel_sigma(), C.siegel_tau()
pool = group_pool(C.siegel_generators()[:2], 2, L.dim)

print("sigma ∩ tau =", intersect_cones(sigma, tau))

fan = make_fan(L, [(sigma, F), (tau, F)], pool)
print(f"\n{len(fan)} orbit representatives:")
for k, c in enumerate(fan.reps):
    print(f"  [{k}] dim {c.dim}")

v = weak_fan_check(fan)
print("\nweak fan check:", v.verdict)
print("  overlap along", v.detail["intersection"])
print("cardinality criterion:", cardinality_criterion(fan).verdict)

out, reports = build_weak_fan(fan)
for r in reports:
    print(f"\n{r.stage} modification: {r.input_orbits} -> {r.output_orbits} orbits, {r.removed_count} rays removed")

counts = intersection_counts(out)
print("\n|I| on the diagonal:", sorted({c for (i, j), c in counts.items() if i == j}))
print("|I| off the diagonal:", sorted({c for (i, j), c in counts.items() if i != j}))
print("result:", cardinality_criterion(out).verdict)
