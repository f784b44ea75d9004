"""Limits of nilpotent orbits: weight filtrations, Deligne splittings and the orbit-pair certificate."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .domain import (
    HodgeFlag,
    PolarizedLattice,
    g_q_basis,
    hodge_riemann_matrix,
    in_compact_dual,
    in_period_domain,
)
from .errors import DomainError, InputShapeError, NoSolution, NotMHS, NotNilpotentError, WeakFanError
from .linalg import (
    I,
    Filtration,
    Matrix,
    Subspace,
    bracket,
    exp_nilpotent,
    positivity_check,
    rank_rows,
    solve_linear,
)


class NotConstant(WeakFanError):
    """W(N) differs between two points of the open cone."""

    def __init__(self, points, filtrations):
        super().__init__("weight filtration is not constant on the cone")
        self.points = tuple(points)
        self.filtrations = tuple(filtrations)


@dataclass(frozen=True, eq=False)
class WeightFiltration:
    """Increasing filtration W with W[center + l] the center-0 step l."""

    base: Filtration
    center: int = 0

    def at(self, index: int) -> Subspace:
        return self.base.at(index - self.center)

    @property
    def ambient(self):
        return self.base.ambient

    @property
    def steps(self):
        return tuple((i + self.center, s) for i, s in self.base.steps)

    @property
    def indices(self):
        return tuple(i for i, _ in self.steps)

    def shifted(self, n: int) -> "WeightFiltration":
        """W[-n]: the same spaces re-indexed so the center sits at n."""
        return WeightFiltration(self.base, self.center + n)

    def graded_dim(self, index: int) -> int:
        return self.at(index).dim - self.at(index - 1).dim

    def transform(self, g: Matrix) -> "WeightFiltration":
        return WeightFiltration(self.base.transform(g), self.center)

    def __eq__(self, other):
        if not isinstance(other, WeightFiltration):
            return NotImplemented
        return self.center == other.center and self.base == other.base

    def __hash__(self):
        return hash((self.center, self.ambient))

    def __repr__(self):
        parts = ", ".join(f"W_{i}={s.dim}" for i, s in self.steps)
        return f"WeightFiltration(center={self.center}: {parts})"


def nilpotency_index(n: Matrix) -> int:
    """Largest k with n^k != 0 (0 for the zero matrix); raises if n is not nilpotent."""
    if not n.is_square:
        raise InputShapeError("nilpotent must be square")
    d = n.rows
    p = n
    k = 0
    while not p.is_zero():
        k += 1
        if k > d:
            raise NotNilpotentError("matrix is not nilpotent")
        p = p @ n
    return k


@lru_cache(maxsize=4096)
def weight_filtration(n: Matrix) -> WeightFiltration:
    """Center-0 weight filtration of a nilpotent endomorphism.

    W_l = sum_j ker N^{j+1} ∩ im N^{j-l}, where im N^m = V for m <= 0.
    """
    k = nilpotency_index(n)
    d = n.rows
    if k == 0:
        base = Filtration(d, "increasing", [(-1, Subspace.zero(d)), (0, Subspace.full(d))])
        return WeightFiltration(base)
    ker = [Subspace.zero(d)]
    img = [Subspace.full(d)]
    power = Matrix.identity(d)
    for _ in range(1, k + 2):
        power = power @ n
        ker.append(Subspace.span(power.kernel(), d))
        img.append(Subspace.span(power.T._e, d))
    cache = {}

    def piece(a, b):
        # ker N^a ∩ im N^b; im N^b ⊆ ker N^a as soon as a + b > k
        a, b = min(a, k + 1), min(max(b, 0), k + 1)
        if a + b > k:
            return img[b]
        if (a, b) not in cache:
            cache[(a, b)] = ker[a] & img[b]
        return cache[(a, b)]

    steps = []
    for ell in range(-k - 1, k + 1):
        # terms with j <= ell are nested inside ker N^{ell+1}; terms with j - ell > k vanish
        first = max(ell, 0)
        w = piece(first + 1, first - ell)
        for j in range(first + 1, min(k, ell + k) + 1):
            w = w + piece(j + 1, j - ell)
        steps.append((ell, w))
    wf = WeightFiltration(Filtration(d, "increasing", steps))
    if not check_weight_axioms(n, wf):
        raise AssertionError("weight filtration failed its defining axioms")
    return wf


def check_weight_axioms(n: Matrix, w: WeightFiltration) -> bool:
    """N W_l ⊆ W_{l-2}, and N^l : Gr_l -> Gr_{-l} is an isomorphism for l > 0 (center 0).

    Injectivity on Gr_l is tested as rank(W_{-l-1} + N^l W_l) - dim W_{-l-1} = dim Gr_l,
    which is valid once the first axiom gives N^l W_{l-1} ⊆ W_{-l-1}.
    """
    d = n.rows
    idx = w.base.indices
    lo, hi = idx[0] - 1, idx[-1] + 1
    c = w.center
    nt = n.T
    for ell in range(lo, hi + 1):
        top, target = w.at(c + ell), w.at(c + ell - 2)
        if top.dim == 0:
            continue
        moved = (top.basis @ nt)._e
        if rank_rows(target.vectors + moved, d) != target.dim:
            return False
    power_t = Matrix.identity(d)
    for ell in range(1, hi + 1):
        power_t = power_t @ nt
        g = w.graded_dim(c + ell)
        if g != w.graded_dim(c - ell):
            return False
        if g == 0:
            continue
        low = w.at(c - ell - 1)
        moved = (w.at(c + ell).basis @ power_t)._e
        if rank_rows(low.vectors + moved, d) - low.dim != g:
            return False
    return True


def interior_points(generators: Sequence[Matrix]) -> list:
    """Deterministic points of the open cone: the sum of all generators and,
    for k >= 2, that sum plus each generator once more."""
    gens = list(generators)
    if not gens:
        return []
    if len(gens) == 1:
        return [gens[0]]
    total = gens[0]
    for g in gens[1:]:
        total = total + g
    return [total] + [total + g for g in gens]


def random_interior_points(generators, samples: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        m = None
        for g in generators:
            t = g.scale(Fraction(rng.randint(1, 9), rng.randint(1, 9)))
            m = t if m is None else m + t
        out.append(m)
    return out


def cone_weight_filtration(sigma, samples: int = 0, seed: int = 0) -> WeightFiltration:
    """W(N) for N in the open cone, checked to agree at every tested interior point.

    Tested points are :func:`interior_points` plus ``samples`` seeded random
    positive combinations.  Raises NotConstant with two witnesses otherwise.
    """
    gens = list(sigma.generators)
    d = sigma.lattice.dim
    if not gens:
        return weight_filtration(Matrix.zeros(d, d))
    points = interior_points(gens) + random_interior_points(gens, samples, seed)
    first = weight_filtration(points[0])
    for p in points[1:]:
        w = weight_filtration(p)
        if w != first:
            raise NotConstant((points[0], p), (first, w))
    return first


@dataclass(frozen=True)
class DeligneSplitting:
    """Bigrading V_C = ⊕ I^{p,q}; only nonzero pieces are stored."""

    pieces: tuple  # ((p, q), Subspace) in sorted order
    weight: int
    ambient: int

    def piece(self, p: int, q: int) -> Subspace:
        for key, s in self.pieces:
            if key == (p, q):
                return s
        return Subspace.zero(self.ambient)

    def as_dict(self) -> dict:
        return dict(self.pieces)

    def keys(self):
        return tuple(k for k, _ in self.pieces)


def _graded_hodge_ok(F: HodgeFlag, W: WeightFiltration, ell: int, p: int) -> bool:
    below = W.at(ell - 1)
    top = W.at(ell)
    a = (F.F(p) & top) + below
    b = (F.conj_F(ell - p + 1) & top) + below
    if a.dim + b.dim - 2 * below.dim != top.dim - below.dim:
        return False
    return (a & b) == below


def check_mhs(W: WeightFiltration, F: HodgeFlag) -> None:
    """Raise NotMHS unless F induces a pure Hodge structure of weight l on every Gr^W_l."""
    n = F.weight
    idx = W.indices
    for ell in range(idx[0], idx[-1] + 1):
        if W.graded_dim(ell) == 0:
            continue
        for p in range(0, n + 2):
            if not _graded_hodge_ok(F, W, ell, p):
                raise NotMHS(
                    f"F does not induce a weight-{ell} Hodge structure on Gr^W_{ell}",
                    {"graded_piece": ell, "p": p},
                )


def deligne_splitting(W: WeightFiltration, F: HodgeFlag) -> DeligneSplitting:
    """Deligne's bigrading of the mixed Hodge structure (W, F).

    ``W`` is the weight filtration already shifted to the Hodge weight (W[-n]).
    """
    if W.ambient != F.lattice.dim:
        raise InputShapeError("W and F live on different spaces")
    check_mhs(W, F)
    n = F.weight
    d = W.ambient
    pieces = []
    for p in range(0, n + 1):
        for q in range(0, n + 1):
            wpq = W.at(p + q)
            corr = F.conj_F(q) & wpq
            for j in range(1, q + 2):
                corr = corr + (F.conj_F(q - j) & W.at(p + q - j - 1))
            ipq = F.F(p) & wpq & corr
            if ipq.dim:
                pieces.append(((p, q), ipq))
    split = DeligneSplitting(tuple(pieces), n, d)
    _check_reconstruction(split, W, F)
    return split


def _direct_sum(spaces, d):
    total = Subspace.zero(d)
    dims = 0
    for s in spaces:
        total = total + s
        dims += s.dim
    return total, dims == total.dim


def _check_reconstruction(split: DeligneSplitting, W: WeightFiltration, F: HodgeFlag) -> None:
    d = split.ambient
    whole, direct = _direct_sum([s for _, s in split.pieces], d)
    if not direct or not whole.is_full():
        raise NotMHS("Deligne pieces do not form a direct sum decomposition", {"reconstruction": "sum"})
    n = split.weight
    for k in range(0, n + 2):
        fk, _ = _direct_sum([s for (p, _), s in split.pieces if p >= k], d)
        if fk != F.F(k):
            raise NotMHS(f"F^{k} is not the sum of I^(p,q) with p >= {k}", {"reconstruction": "F", "index": k})
    idx = W.indices
    for ell in range(idx[0], idx[-1] + 1):
        wl, _ = _direct_sum([s for (p, q), s in split.pieces if p + q <= ell], d)
        if wl != W.at(ell):
            raise NotMHS(f"W_{ell} is not the sum of I^(p,q) with p+q <= {ell}", {"reconstruction": "W", "index": ell})


def is_r_split(split: DeligneSplitting) -> bool:
    """conj(I^{p,q}) == I^{q,p} for all (p, q)."""
    return all(s.conj() == split.piece(q, p) for (p, q), s in split.pieces)


@dataclass(frozen=True)
class GradingElement:
    Y: Matrix

    @property
    def is_rational(self) -> bool:
        return self.Y.is_real


def grading_element(split: DeligneSplitting) -> GradingElement:
    """Y acting by p + q - n on I^{p,q}."""
    cols, eig = [], []
    for (p, q), s in split.pieces:
        for v in s.vectors:
            cols.append(v)
            eig.append(p + q - split.weight)
    b = Matrix.from_columns(cols)
    return GradingElement(b @ Matrix.diag(eig) @ b.inverse())


def eigenspace(y: Matrix, value) -> Subspace:
    d = y.rows
    return Subspace.span((y - Matrix.identity(d).scale(value)).kernel(), d)


def _gq_constraint_rows(lattice: PolarizedLattice):
    d = lattice.dim
    q = lattice.Q
    rows = []
    for a in range(d):
        for b in range(d):
            row = [Fraction(0)] * (d * d)
            for k in range(d):
                row[k * d + a] += q[k, b]
                row[k * d + b] += q[a, k]
            rows.append(row)
    return rows


def _ad_rows(m: Matrix):
    """Rows of the linear map Y -> [M, Y] on row-major vec(Y)."""
    d = m.rows
    rows = []
    for a in range(d):
        for b in range(d):
            row = [Fraction(0)] * (d * d)
            for k in range(d):
                row[k * d + b] += m[a, k]
                row[a * d + k] -= m[k, b]
            rows.append(row)
    return rows


def ad_image(m: Matrix, lattice: PolarizedLattice) -> Subspace:
    """im(ad_M : g -> g) inside Q^{d*d}."""
    d = lattice.dim
    return Subspace.span([bracket(m, xi).vec() for xi in g_q_basis(lattice)], d * d)


def rationalize_grading(y0: Matrix, cones: Sequence, lattice: PolarizedLattice) -> GradingElement:
    """Rational point of {Y' in I : ad_M(Y') = 2M for every cone generator M}.

    I is the intersection of im(ad_M) over the test points of each open cone
    (each entry of ``cones`` is a generator list, or a single Matrix for a ray).
    Raises NoSolution if the system is inconsistent or ``y0`` is not on it.
    The system has rational coefficients, so Re(y0) is a rational solution
    whenever y0 is a Gaussian-rational one.
    """
    d = lattice.dim
    cone_gens = [[c] if isinstance(c, Matrix) else list(getattr(c, "generators", c)) for c in cones]
    rows = _gq_constraint_rows(lattice)
    rhs = [Fraction(0)] * len(rows)
    inner = Subspace.full(d * d)
    for gens in cone_gens:
        for m in gens:
            rows += _ad_rows(m)
            rhs += list(m.scale(2).vec())
        for m in interior_points(gens):
            inner = inner & ad_image(m, lattice)
    for w in inner.annihilator().vectors:
        rows.append(list(w))
        rhs.append(Fraction(0))
    a = Matrix(rows, cols=d * d)
    solve_linear(a, rhs)
    v0 = y0.vec()
    lhs = a.apply(v0)
    if any(x != r for x, r in zip(lhs, rhs)):
        raise NoSolution("Y0 does not satisfy ad_M(Y) = 2M on the cone data")
    return GradingElement(y0.real_part())


@dataclass(frozen=True)
class OrbitCertificate:
    verdict: str  # "Certified" | "Refuted"
    weight: WeightFiltration | None = None
    splitting: DeligneSplitting | None = None
    failure: dict | None = None
    r_split: bool | None = None
    tested_points: tuple = field(default=())

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    def __bool__(self):
        return self.certified


def _refuted(axiom, **info):
    return dict(axiom=axiom, **info)


def polarization_failure(F: HodgeFlag, split: DeligneSplitting, n_point: Matrix):
    """First primitive Hodge piece on which Q(., N^l conj .) is not positive, or None."""
    L = F.lattice
    n = L.weight
    power = Matrix.identity(L.dim)
    powers = [power]
    for _ in range(2 * n + 2):
        power = power @ n_point
        powers.append(power)
    for (p, q), s in split.pieces:
        ell = p + q - n
        if ell < 0:
            continue
        kernel = Subspace.span(powers[ell + 1].kernel(), L.dim) if ell + 1 < len(powers) else Subspace.full(L.dim)
        prim = s & kernel
        if prim.dim == 0:
            continue
        h = hodge_riemann_matrix(L, prim, p, q, twist=powers[ell])
        if not positivity_check(h):
            return {"ell": ell, "p": p, "q": q, "primitive_dim": prim.dim}
    return None


@lru_cache(maxsize=8192)
def certify_orbit_pair(sigma, F: HodgeFlag, samples: int = 0) -> OrbitCertificate:
    """Decide whether (sigma, F) is a nilpotent orbit pair via the polarized LMHS criterion."""
    if not in_compact_dual(F):
        raise DomainError("flag is not in the compact dual")
    L = F.lattice
    if sigma.lattice != L:
        raise InputShapeError("cone and flag use different lattices")
    n = L.weight
    gens = list(sigma.generators)
    for j, nj in enumerate(gens):
        for p in range(1, n + 1):
            if not F.F(p - 1).contains(F.F(p).image(nj)):
                return OrbitCertificate("Refuted", failure=_refuted("horizontality", generator=j, p=p))
    try:
        w = cone_weight_filtration(sigma, samples)
    except NotConstant as exc:
        return OrbitCertificate(
            "Refuted", failure=_refuted("weight_constant", points=[str(x) for x in exc.points])
        )
    try:
        split = deligne_splitting(w.shifted(n), F)
    except NotMHS as exc:
        return OrbitCertificate("Refuted", weight=w, failure=_refuted("mixed_hodge", **exc.witness))
    points = interior_points(gens) or [Matrix.zeros(L.dim, L.dim)]
    for idx, m in enumerate(points):
        bad = polarization_failure(F, split, m)
        if bad is not None:
            return OrbitCertificate(
                "Refuted", weight=w, splitting=split, failure=_refuted("polarization", point=idx, **bad),
                r_split=is_r_split(split), tested_points=tuple(points),
            )
    return OrbitCertificate("Certified", weight=w, splitting=split, r_split=is_r_split(split), tested_points=tuple(points))


def orbit_point(sigma, F: HodgeFlag, t) -> HodgeFlag:
    """exp(i t sum N_j) . F"""
    d = F.lattice.dim
    x = Matrix.zeros(d, d)
    for nj in sigma.generators:
        x = x + nj
    return F.transform(exp_nilpotent(x.scale(I * Fraction(t))))


def sample_orbit_membership(sigma, F: HodgeFlag, heights: Iterable) -> tuple:
    """in_period_domain(exp(i t sum N_j) F) for each height t."""
    return tuple(in_period_domain(orbit_point(sigma, F, t)) for t in heights)
