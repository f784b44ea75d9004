"""Integral automorphisms, bounded word search for Gamma_{sigma,tau}, and the sets I_{sigma,tau}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cones import NilpotentCone, check_gz, conjugate, intersect_cones
from .domain import HodgeFlag, in_compact_dual
from .limits import NotConstant, certify_orbit_pair, cone_weight_filtration
from .linalg import Matrix
from .parallel import pmap


def _reduce_word(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g:
            e = out[-1][1] + e
            out.pop()
            if e:
                out.append((g, e))
        elif e:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Integral Q-preserving matrix, optionally remembering the word that produced it."""

    matrix: Matrix
    word: tuple = ()

    @classmethod
    def identity(cls, d: int) -> "GroupElement":
        return cls(Matrix.identity(d), ())

    @classmethod
    def generator(cls, matrix: Matrix, index: int) -> "GroupElement":
        return cls(matrix, ((index, 1),))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, _reduce_word(self.word + other.word))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.matrix.inverse(), tuple((g, -e) for g, e in reversed(self.word)))

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        w = " ".join(f"g{g}^{e}" for g, e in self.word) or "id"
        return f"GroupElement({w})"

    def validate(self, lattice) -> "GroupElement":
        check_gz(self.matrix, lattice)
        return self


def _cone_weight(sigma):
    try:
        return cone_weight_filtration(sigma)
    except NotConstant:
        return None


def member_flag(gamma, sigma: NilpotentCone, tau: NilpotentCone, flag_pool: Sequence[HodgeFlag] = (),
                tau_flags: Sequence[HodgeFlag] = ()):
    """The first flag certifying both (sigma, F) and (Ad_gamma tau, F), or None.

    Order of tests: weight pre-filter W(sigma) = gamma W(tau), then a nonempty
    open intersection, then the flag search over ``flag_pool`` followed by
    gamma-translates of ``tau_flags``.
    """
    g = getattr(gamma, "matrix", gamma)
    ws, wt = _cone_weight(sigma), _cone_weight(tau)
    if ws is None or wt is None or ws != wt.transform(g):
        return None
    tau_g = conjugate(g, tau, check=False)
    if intersect_cones(sigma, tau_g) is None:
        return None
    seen = []
    for f in list(flag_pool) + [f.transform(g) for f in tau_flags]:
        if f in seen:
            continue
        seen.append(f)
        if not in_compact_dual(f):
            continue
        if certify_orbit_pair(sigma, f).certified and certify_orbit_pair(tau_g, f).certified:
            return f
    return None


def is_gamma_member(gamma, sigma, tau, flag_pool=(), tau_flags=()) -> bool:
    """gamma in Gamma_{sigma,tau}, relative to the candidate flags supplied."""
    return member_flag(gamma, sigma, tau, flag_pool, tau_flags) is not None


def enumerate_words(generators: Sequence[GroupElement], max_word_len: int) -> tuple:
    """Distinct group elements from words of length <= max_word_len, in BFS order.

    Letters are g_i^{+-1}; a letter is never followed by its own inverse.
    Each matrix is kept with the first (shortest) word reaching it.
    """
    if not generators:
        return ()
    d = generators[0].matrix.rows
    letters = []
    for i, g in enumerate(generators):
        letters.append((i, 1, g.matrix))
        letters.append((i, -1, g.matrix.inverse()))
    ident = GroupElement.identity(d)
    seen = {ident.matrix: ident}
    frontier = [(ident, None)]
    for _ in range(max_word_len):
        nxt = []
        for elem, last in frontier:
            for i, e, m in letters:
                if last == (i, -e):
                    continue
                g = GroupElement(elem.matrix @ m, _reduce_word(elem.word + ((i, e),)))
                nxt.append((g, (i, e)))
                if g.matrix not in seen:
                    seen[g.matrix] = g
        frontier = nxt
    return tuple(seen.values())


def group_pool(generators: Sequence[GroupElement], max_word_len: int, d: int) -> tuple:
    """Identity plus all words up to the bound; closed under inverse by construction."""
    if not generators:
        return (GroupElement.identity(d),)
    return enumerate_words(generators, max_word_len)


@dataclass(frozen=True)
class GammaWitnessSet:
    sigma: NilpotentCone
    tau: NilpotentCone
    elements: tuple
    search_bound: int
    flags: tuple = field(default=(), compare=False)

    @property
    def pair(self):
        return (self.sigma, self.tau)

    def __len__(self):
        return len(self.elements)


def enumerate_gamma(sigma: NilpotentCone, tau: NilpotentCone, generators: Sequence[GroupElement],
                    max_word_len: int, flag_pool: Sequence[HodgeFlag] = (),
                    tau_flags: Sequence[HodgeFlag] = ()) -> GammaWitnessSet:
    """Members of Gamma_{sigma,tau} among all words up to ``max_word_len``."""
    d = sigma.lattice.dim
    for g in generators:
        g.validate(sigma.lattice)
    pool = group_pool(generators, max_word_len, d)
    return witnesses_from_pool(sigma, tau, pool, flag_pool, tau_flags, bound=max_word_len)


def witnesses_from_pool(sigma, tau, pool: Sequence[GroupElement], flag_pool=(), tau_flags=(),
                        bound: int = 0) -> GammaWitnessSet:
    """Members of Gamma_{sigma,tau} among an explicit list of group elements."""
    found = pmap(lambda g: member_flag(g, sigma, tau, flag_pool, tau_flags), pool)
    elems = [g for g, f in zip(pool, found) if f is not None]
    flags = [f for f in found if f is not None]
    return GammaWitnessSet(sigma, tau, tuple(elems), bound, tuple(flags))


def inverse_witnesses(ws: GammaWitnessSet) -> GammaWitnessSet:
    """The (tau, sigma) witness set gamma -> gamma^{-1}."""
    inv = tuple(g.inverse() for g in ws.elements)
    flags = tuple(f.transform(g.matrix) for f, g in zip(ws.flags, inv))
    return GammaWitnessSet(ws.tau, ws.sigma, inv, ws.search_bound, flags)


def intersection_set(ws: GammaWitnessSet) -> tuple:
    """Distinct sigma ∩ Ad_gamma(tau) over the witnesses (a lower bound for I_{sigma,tau})."""
    out = set()
    for g in ws.elements:
        c = intersect_cones(ws.sigma, conjugate(g.matrix, ws.tau, check=False))
        if c is not None:
            out.add(c)
    return tuple(sorted(out))


@dataclass(frozen=True)
class CosetBuckets:
    """Witnesses grouped by their intersection cone.

    ``relations`` records, for each non-anchor element of a bucket, "Same" when
    gamma' = z gamma z' was found with z in Z_sigma and z' in Z_tau, else "Unknown".
    """

    keys: tuple
    buckets: tuple
    relations: tuple

    def __len__(self):
        return len(self.buckets)


def centralizes(z: GroupElement, sigma: NilpotentCone) -> bool:
    zi = z.matrix.inverse()
    return all(z.matrix @ n @ zi == n for n in sigma.generators)


def coset_buckets(ws: GammaWitnessSet, sigma_centralizer: Sequence[GroupElement] = (),
                  tau_centralizer: Sequence[GroupElement] = (), search_len: int | None = None) -> CosetBuckets:
    """Partition by intersection cone, then probe double-coset equality within each bucket."""
    for z in sigma_centralizer:
        if not centralizes(z, ws.sigma):
            raise ValueError("supplied element does not centralize sigma")
    for z in tau_centralizer:
        if not centralizes(z, ws.tau):
            raise ValueError("supplied element does not centralize tau")
    bound = ws.search_bound if search_len is None else search_len
    d = ws.sigma.lattice.dim
    zs = group_pool(list(sigma_centralizer), bound, d)
    zts = group_pool(list(tau_centralizer), bound, d)
    groups: dict = {}
    for g in ws.elements:
        key = intersect_cones(ws.sigma, conjugate(g.matrix, ws.tau, check=False))
        groups.setdefault(key, []).append(g)
    keys = sorted(groups, key=lambda c: c.key())
    relations = []
    for k in keys:
        members = groups[k]
        anchor = members[0]
        for other in members[1:]:
            same = double_coset_related(anchor, other, zs, zts)
            relations.append((anchor, other, "Same" if same else "Unknown"))
    return CosetBuckets(tuple(keys), tuple(tuple(groups[k]) for k in keys), tuple(relations))


def double_coset_related(a: GroupElement, b: GroupElement, zs: Iterable[GroupElement],
                         zts: Iterable[GroupElement]) -> bool:
    zts = list(zts)
    return any(z.matrix @ a.matrix @ zt.matrix == b.matrix for z in zs for zt in zts)
