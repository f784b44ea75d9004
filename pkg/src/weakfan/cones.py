"""Relatively open rational nilpotent cones of dimension at most two."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .domain import PolarizedLattice, in_g_q
from .errors import (
    InputShapeError,
    NoSolution,
    NotCommuting,
    NotInGq,
    NotInGZ,
    NotNilpotentGenerator,
    UnsupportedDimension,
)
from .limits import DeligneSplitting, interior_points
from .linalg import Matrix, Subspace, bracket, solve_linear


def primitive(m: Matrix) -> Matrix:
    """Positive rescaling of a nonzero rational matrix to a primitive integral one."""
    if not m.is_real:
        raise InputShapeError("cone generators must be rational")
    vals = [Fraction(x) for x in m.vec() if x]
    if not vals:
        raise InputShapeError("zero matrix has no primitive form")
    den = lcm(*(v.denominator for v in vals))
    g = gcd(*(int(v * den) for v in vals))
    return m.scale(Fraction(den, g))


def matrix_key(m: Matrix) -> tuple:
    return tuple(Fraction(x) for x in m.vec())


@dataclass(frozen=True)
class NilpotentCone:
    """span_{Q>0} of canonical generators; the empty tuple is the zero cone."""

    lattice: PolarizedLattice
    generators: tuple

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def key(self) -> tuple:
        return (self.dim, tuple(matrix_key(g) for g in self.generators))

    def __lt__(self, other):
        return self.key() < other.key()

    def span(self) -> Subspace:
        d = self.lattice.dim
        return Subspace.span([g.vec() for g in self.generators], d * d)

    def __repr__(self):
        if self.is_zero:
            return "NilpotentCone(0)"
        gens = "; ".join(str(g) for g in self.generators)
        return f"NilpotentCone({gens})"


def make_cone(lattice: PolarizedLattice, gens: Sequence[Matrix] = ()) -> NilpotentCone:
    """Validate, then canonicalize to sorted primitive generators."""
    gens = list(gens)
    d = lattice.dim
    for i, g in enumerate(gens):
        if g.shape != (d, d):
            raise InputShapeError(f"generator {i} has shape {g.shape}, expected {(d, d)}")
        if not g.is_real:
            raise InputShapeError(f"generator {i} is not rational")
        if not in_g_q(g, lattice):
            raise NotInGq(i)
        if not g.is_nilpotent():
            raise NotNilpotentGenerator(i)
    for i, j in combinations(range(len(gens)), 2):
        if not bracket(gens[i], gens[j]).is_zero():
            raise NotCommuting(i, j)
    canon = sorted({matrix_key(p): p for p in (primitive(g) for g in gens if not g.is_zero())}.items())
    out = tuple(m for _, m in canon)
    if out and Matrix([g.vec() for g in out]).rank() != len(out):
        raise InputShapeError("cone generators must be linearly independent")
    return NilpotentCone(lattice, out)


def ray(lattice: PolarizedLattice, n: Matrix) -> NilpotentCone:
    return make_cone(lattice, [n])


def faces(sigma: NilpotentCone) -> tuple:
    """All generator-subset faces, zero cone included, in canonical order."""
    out = set()
    for r in range(sigma.dim + 1):
        for sub in combinations(sigma.generators, r):
            out.add(NilpotentCone(sigma.lattice, sub))
    return tuple(sorted(out))


def check_gz(gamma: Matrix, lattice: PolarizedLattice) -> None:
    q = lattice.Q
    if gamma.shape != q.shape or not gamma.is_integral():
        raise NotInGZ("group element must be an integral dim x dim matrix")
    if gamma.det() not in (1, -1):
        raise NotInGZ("group element must have determinant +-1")
    if gamma.T @ q @ gamma != q:
        raise NotInGZ("group element does not preserve Q")


def conjugate(gamma, sigma: NilpotentCone, check: bool = True) -> NilpotentCone:
    """Ad_gamma(sigma)."""
    g = getattr(gamma, "matrix", gamma)
    if check:
        check_gz(g, sigma.lattice)
    gi = g.inverse()
    return make_cone(sigma.lattice, [g @ n @ gi for n in sigma.generators])


def coordinates(sigma: NilpotentCone, m: Matrix):
    """Coefficients of m in the generators of sigma, or None if m is outside the span."""
    if sigma.is_zero:
        return () if m.is_zero() else None
    a = Matrix.from_columns([g.vec() for g in sigma.generators])
    try:
        sol = solve_linear(a, m.vec())
    except NoSolution:
        return None
    return sol.solution


def contains_point(sigma: NilpotentCone, m: Matrix) -> bool:
    """m lies in the relatively open cone (all coefficients strictly positive)."""
    c = coordinates(sigma, m)
    return c is not None and all(x > 0 for x in c)


def in_closure(sigma: NilpotentCone, m: Matrix) -> bool:
    c = coordinates(sigma, m)
    return c is not None and all(x >= 0 for x in c)


def _restrict_to(sigma: NilpotentCone, line: Subspace):
    """sigma ∩ line for a line inside span(sigma): an open ray cone or None."""
    v = Matrix.unvec(line.vectors[0], sigma.lattice.dim)
    if sigma.dim == 1:
        return sigma
    c = coordinates(sigma, v)
    if all(x > 0 for x in c):
        return ray(sigma.lattice, v)
    if all(x < 0 for x in c):
        return ray(sigma.lattice, -v)
    return None


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _two_dim_meet(sigma: NilpotentCone, tau: NilpotentCone):
    """Open 2-dim cones with equal spans: extreme rays of the closed intersection."""
    g1, g2 = sigma.generators
    t = [coordinates(sigma, h) for h in tau.generators]
    if _cross(t[0], t[1]) < 0:
        t = t[::-1]
    cand = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))] + [tuple(x) for x in t]

    def in_tau(p):
        return _cross(t[0], p) >= 0 and _cross(p, t[1]) >= 0

    good = [p for p in cand if p[0] >= 0 and p[1] >= 0 and in_tau(p)]
    dirs = []
    for p in good:
        if not any(_cross(p, q) == 0 for q in dirs):
            dirs.append(p)
    if len(dirs) < 2:
        return None
    lo = next(p for p in dirs if all(_cross(p, q) >= 0 for q in dirs))
    hi = next(p for p in dirs if all(_cross(q, p) >= 0 for q in dirs))
    gens = [g1.scale(p[0]) + g2.scale(p[1]) for p in (lo, hi)]
    return make_cone(sigma.lattice, gens)


def intersect_cones(sigma: NilpotentCone, tau: NilpotentCone):
    """Set-theoretic intersection of two relatively open cones (None if empty)."""
    if sigma.lattice != tau.lattice:
        raise InputShapeError("cones over different lattices")
    if sigma.dim > 2 or tau.dim > 2:
        raise UnsupportedDimension("cone intersection is implemented for dim <= 2")
    if sigma.is_zero or tau.is_zero:
        return sigma if sigma.is_zero and tau.is_zero else None
    if sigma == tau:
        return sigma
    common = sigma.span() & tau.span()
    if common.dim == 0:
        return None
    if common.dim == 1:
        a, b = _restrict_to(sigma, common), _restrict_to(tau, common)
        if a is None or b is None:
            return None
        return a if a == b else None
    # common.dim == 2 forces both cones to be 2-dim with the same span
    return _two_dim_meet(sigma, tau)


def slope_coordinates(sigma: NilpotentCone, r: NilpotentCone):
    """Coordinates (a, b) of the ray generator r in the 2-dim cone sigma."""
    c = coordinates(sigma, r.generators[0])
    if c is None:
        raise InputShapeError("ray is not in the span of the cone")
    return c


def split_cone(sigma: NilpotentCone, rays: Sequence[NilpotentCone]) -> tuple:
    """Open 2-dim sectors of sigma after removing interior rays, in slope order."""
    if sigma.dim != 2:
        raise InputShapeError("only 2-dim cones can be split by rays")
    uniq = {}
    for r in rays:
        if r.dim != 1 or not contains_point(sigma, r.generators[0]):
            raise InputShapeError(f"{r} is not an interior ray of {sigma}")
        uniq[r] = slope_coordinates(sigma, r)
    ordered = sorted(uniq, key=lambda r: uniq[r][1] / uniq[r][0])
    walls = [sigma.generators[0]] + [r.generators[0] for r in ordered] + [sigma.generators[1]]
    return tuple(make_cone(sigma.lattice, [a, b]) for a, b in zip(walls, walls[1:]))


def cone_interior_points(sigma: NilpotentCone) -> list:
    return interior_points(sigma.generators)


def g_splitting_piece(split: DeligneSplitting, p: int, q: int, lattice: PolarizedLattice) -> Subspace:
    """{xi in g_C : xi(I^{r,s}) ⊆ I^{r+p,s+q} for all r, s} inside C^{d*d}."""
    d = lattice.dim
    qm = lattice.Q
    rows = []
    for a in range(d):
        for b in range(d):
            row = [Fraction(0)] * (d * d)
            for k in range(d):
                row[k * d + a] += qm[k, b]
                row[k * d + b] += qm[a, k]
            rows.append(row)
    for (r, s), piece in split.pieces:
        target = split.piece(r + p, s + q)
        ann = target.annihilator().vectors
        for v in piece.vectors:
            # w . (xi v) = sum_{a,k} w_a xi_{ak} v_k
            for w in ann:
                row = [0] * (d * d)
                for a in range(d):
                    if w[a]:
                        for k in range(d):
                            if v[k]:
                                row[a * d + k] = w[a] * v[k]
                rows.append(row)
    kern = Matrix(rows, cols=d * d).kernel()
    return Subspace.span(kern, d * d)
