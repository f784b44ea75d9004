"""A degenerating elliptic curve: certify the orbit, read off its limit, then flip the sign.

Run with ``python demos/elliptic_degeneration.py``.
"""

from weakfan import corpus as C
from weakfan.cones import make_cone
from weakfan.limits import certify_orbit_pair, grading_element, sample_orbit_membership
from weakfan.linalg import Matrix

L = C.elliptic_lattice()
N = C.elliptic_nilpotent()
sigma = make_cone(L, [N])

# The monodromy logarithm N e2 = e1 together with F^1 = span{e2} is a nilpotent orbit.
cert = certify_orbit_pair(sigma, C.elliptic_flag())
print("verdict:", cert.verdict)
print("W(sigma):", cert.weight)
print("Deligne pieces:", {k: v.dim for k, v in cert.splitting.as_dict().items()})
print("grading element Y:", grading_element(cert.splitting).Y)
print("exp(iyN)F in D at y = 1, 2, 10:", sample_orbit_membership(sigma, C.elliptic_flag(), (1, 2, 10)))

# A twisted base point still certifies, but the limit is no longer split over R.
twisted = certify_orbit_pair(sigma, C.elliptic_twisted_flag())
print("\ntwisted flag:", twisted.verdict, "| R-split:", twisted.r_split)

# Reversing the orientation of the cone breaks polarization.
flipped = certify_orbit_pair(make_cone(L, [N.scale(-1)]), C.elliptic_flag())
print("\n-N:", flipped.verdict, "| failing axiom:", flipped.failure["axiom"])
assert flipped.failure["axiom"] == "polarization"
assert grading_element(cert.splitting).Y == Matrix.diag([-1, 1])
