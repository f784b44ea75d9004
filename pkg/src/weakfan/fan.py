"""Cone collections, the weak-fan test, and the subdivision passes that produce weak fans."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arithgroup import GroupElement, intersection_set, member_flag, witnesses_from_pool
from .cones import NilpotentCone, conjugate, contains_point, faces, intersect_cones, make_cone, ray, split_cone
from .domain import HodgeFlag
from .errors import CertificationError, InputShapeError, MissingRay, RayNotInCone, UnsupportedDimension
from .limits import certify_orbit_pair, orbit_point

FACE_HEIGHTS = (1, 2, 10, 100)


def face_flag(parent: NilpotentCone, flag: HodgeFlag, face: NilpotentCone) -> HodgeFlag:
    """A flag completing ``face`` to an orbit pair, from one completing ``parent``.

    Uses exp(i t sum of the generators not in the face) F at growing t.
    """
    if face == parent:
        return flag
    rest = [g for g in parent.generators if g not in face.generators]
    helper = NilpotentCone(parent.lattice, tuple(rest))
    for t in FACE_HEIGHTS:
        f = orbit_point(helper, flag, t)
        if certify_orbit_pair(face, f).certified:
            return f
    raise CertificationError(f"no face flag found for {face} at heights {FACE_HEIGHTS}")


@dataclass(frozen=True, eq=False)
class FanCollection:
    """Gamma-orbit representatives of a face-closed cone collection.

    ``flags[k]`` completes ``reps[k]`` to a certified orbit pair.  ``pool`` is a
    finite set of known elements of Gamma (identity first, closed under inverse)
    from which all gamma-witnesses are drawn.
    """

    lattice: object
    reps: tuple
    flags: tuple
    pool: tuple

    def __len__(self):
        return len(self.reps)

    def index(self, cone: NilpotentCone) -> int:
        return self.reps.index(cone)

    def flag(self, cone: NilpotentCone) -> HodgeFlag:
        return self.flags[self.index(cone)]

    def items(self):
        return tuple(zip(self.reps, self.flags))

    def of_dim(self, k: int) -> tuple:
        return tuple(c for c in self.reps if c.dim == k)

    def find_orbit(self, cone: NilpotentCone):
        """(rep index, gamma) with Ad_gamma(rep) == cone, or None."""
        for i, r in enumerate(self.reps):
            if r.dim != cone.dim:
                continue
            for g in self.pool:
                if conjugate(g.matrix, r, check=False) == cone:
                    return i, g
        return None


def _closed_pool(lattice, pool: Sequence[GroupElement]) -> tuple:
    out = {GroupElement.identity(lattice.dim).matrix: GroupElement.identity(lattice.dim)}
    for g in pool:
        g.validate(lattice)
        out.setdefault(g.matrix, g)
    for g in list(out.values()):
        gi = g.inverse()
        out.setdefault(gi.matrix, gi)
    return tuple(out.values())


def make_fan(lattice, entries: Sequence, pool: Sequence[GroupElement] = ()) -> FanCollection:
    """Assemble a collection from (cone, flag) pairs.

    Faces are added with derived flags, cones conjugate under the pool to an
    earlier representative are merged, and every representative is certified.
    """
    pool = _closed_pool(lattice, pool)
    table: dict = {}
    for cone, flag in entries:
        if cone.dim > 2:
            raise UnsupportedDimension("fan cones must have dimension <= 2")
        table.setdefault(cone, flag)
    for cone in sorted(table, key=lambda c: -c.dim):
        for face in faces(cone):
            if face not in table:
                table[face] = face_flag(cone, table[cone], face)
    reps, flags = [], []
    for cone in sorted(table):
        if any(r.dim == cone.dim and conjugate(g.matrix, r, check=False) == cone for r in reps for g in pool):
            continue
        cert = certify_orbit_pair(cone, table[cone])
        if not cert.certified:
            raise CertificationError(f"{cone} does not certify with its flag", cert)
        reps.append(cone)
        flags.append(table[cone])
    return FanCollection(lattice, tuple(reps), tuple(flags), pool)


@dataclass(frozen=True)
class FanVerdict:
    verdict: str  # "WeakFan" | "Violation"
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == "WeakFan"


def weak_fan_check(fan: FanCollection) -> FanVerdict:
    """First pair sigma_i, Ad_gamma(sigma_j) that overlaps under a shared certifying flag yet differs."""
    for i, (si, fi) in enumerate(fan.items()):
        for j, (sj, fj) in enumerate(fan.items()):
            for g in fan.pool:
                f = member_flag(g, si, sj, [fi], [fj])
                if f is None:
                    continue
                tg = conjugate(g.matrix, sj, check=False)
                if tg != si:
                    return FanVerdict("Violation", {
                        "i": i, "j": j, "sigma": si, "tau_gamma": tg, "gamma": g, "flag": f,
                        "intersection": intersect_cones(si, tg),
                    })
    return FanVerdict("WeakFan")


def witness_set(fan: FanCollection, i: int, j: int):
    return witnesses_from_pool(fan.reps[i], fan.reps[j], fan.pool, [fan.flags[i]], [fan.flags[j]])


def intersection_counts(fan: FanCollection) -> dict:
    """|I_{sigma_i, sigma_j}| on the pool witnesses, for every ordered pair."""
    n = len(fan)
    return {(i, j): len(intersection_set(witness_set(fan, i, j))) for i in range(n) for j in range(n)}


def cardinality_criterion(fan: FanCollection) -> FanVerdict:
    """|I_{s,s}| = 1 for every rep and |I_{s,t}| = 0 for distinct reps."""
    counts = intersection_counts(fan)
    for (i, j), c in sorted(counts.items()):
        want = 1 if i == j else 0
        if c != want:
            return FanVerdict("Violation", {"i": i, "j": j, "count": c, "expected": want, "counts": counts})
    return FanVerdict("WeakFan", {"counts": counts})


@dataclass(frozen=True)
class SubdivisionReport:
    stage: str  # "First" | "Second" | "Ray" | "Star"
    input_orbits: int
    output_orbits: int
    removed_rays: tuple  # ((rep, (ray, ...)), ...)
    certified: tuple  # ((cone, bool), ...)

    @property
    def removed_count(self) -> int:
        return sum(len(r) for _, r in self.removed_rays)


def _rays_inside(fan: FanCollection, i: int, candidates) -> tuple:
    """1-dim sigma_i ∩ Ad_gamma(tau) over reps tau (indices) and pool witnesses."""
    si, fi = fan.reps[i], fan.flags[i]
    found = set()
    for j in candidates:
        tj, fj = fan.reps[j], fan.flags[j]
        if tj.is_zero:
            continue
        for g in fan.pool:
            if member_flag(g, si, tj, [fi], [fj]) is None:
                continue
            c = intersect_cones(si, conjugate(g.matrix, tj, check=False))
            if c is not None and c.dim == 1:
                found.add(c)
    return tuple(sorted(found))


def _rebuild(fan: FanCollection, removed: Mapping, extra: Sequence, stage: str):
    entries = []
    for cone, flag in extra:
        entries.append((cone, flag))
    for cone, flag in fan.items():
        rays = removed.get(cone, ())
        if rays:
            entries += [(c, flag) for c in split_cone(cone, rays)]
            entries += [(r, flag) for r in rays]
        else:
            entries.append((cone, flag))
    out = make_fan(fan.lattice, entries, fan.pool)
    report = SubdivisionReport(
        stage, len(fan), len(out),
        tuple((c, tuple(r)) for c, r in removed.items() if r),
        tuple((c, certify_orbit_pair(c, f).certified) for c, f in out.items()),
    )
    return out, report


def first_modification(fan: FanCollection):
    """Cut every 2-dim rep along its 1-dim intersections with conjugates of reps."""
    everything = range(len(fan))
    removed = {fan.reps[i]: _rays_inside(fan, i, everything) for i in range(len(fan)) if fan.reps[i].dim == 2}
    return _rebuild(fan, removed, (), "First")


def second_modification(fan: FanCollection):
    """Cut every 2-dim rep along the conjugates of 1-dim reps landing inside it."""
    rays = [j for j, c in enumerate(fan.reps) if c.dim == 1]
    removed = {fan.reps[i]: _rays_inside(fan, i, rays) for i in range(len(fan)) if fan.reps[i].dim == 2}
    return _rebuild(fan, removed, (), "Second")


def build_weak_fan(fan: FanCollection):
    """Both modification passes, then the cardinality criterion on the result."""
    mid, r1 = first_modification(fan)
    out, r2 = second_modification(mid)
    verdict = cardinality_criterion(out)
    if not verdict.ok:
        raise CertificationError("subdivided collection fails the cardinality criterion", verdict)
    return out, (r1, r2)


def _as_ray(fan: FanCollection, r) -> NilpotentCone:
    if isinstance(r, NilpotentCone):
        if r.dim != 1:
            raise InputShapeError("expected a 1-dimensional cone")
        return r
    return ray(fan.lattice, r)


def ray_refine(fan: FanCollection, upsilon):
    """Add the orbit of a ray lying in the closure of some rep and cut every 2-dim rep along its conjugates."""
    ups = _as_ray(fan, upsilon)
    if fan.find_orbit(ups) is not None:
        return fan, SubdivisionReport("Ray", len(fan), len(fan), (), tuple((c, True) for c in fan.reps))
    home = next((k for k, c in enumerate(fan.reps) if c.dim == 2 and contains_point(c, ups.generators[0])), None)
    if home is None:
        raise RayNotInCone(f"{ups} is not in the closure of any representative")
    f_ups = fan.flags[home]
    removed = {}
    for i, si in enumerate(fan.reps):
        if si.dim != 2:
            continue
        found = set()
        for g in fan.pool:
            if member_flag(g, si, ups, [fan.flags[i]], [f_ups]) is None:
                continue
            c = intersect_cones(si, conjugate(g.matrix, ups, check=False))
            if c is not None:
                found.add(c)
        removed[si] = tuple(sorted(found))
    return _rebuild(fan, removed, [(ups, f_ups)], "Ray")


def star_subdivide(fan: FanCollection, n_i, n_j):
    """Blow-up shadow: add ray{N_i + N_j} and split cone{N_i, N_j} along it."""
    ri, rj = _as_ray(fan, n_i), _as_ray(fan, n_j)
    for r in (ri, rj):
        if r not in fan.reps:
            raise MissingRay(f"{r} is not a representative")
    gi, gj = ri.generators[0], rj.generators[0]
    sigma = make_cone(fan.lattice, [gi, gj])
    if sigma not in fan.reps:
        return fan, SubdivisionReport("Star", len(fan), len(fan), (), tuple((c, True) for c in fan.reps))
    e = ray(fan.lattice, gi + gj)
    return _rebuild(fan, {sigma: (e,)}, (), "Star")


def exceptional_ray(fan: FanCollection, n_i, n_j) -> NilpotentCone:
    ri, rj = _as_ray(fan, n_i), _as_ray(fan, n_j)
    return ray(fan.lattice, ri.generators[0] + rj.generators[0])


def locate(fan_or_cones, m) -> list:
    """All cones (relatively open) containing the point m."""
    cones = fan_or_cones.reps if isinstance(fan_or_cones, FanCollection) else fan_or_cones
    return [c for c in cones if contains_point(c, m)]
