"""Polarized lattices with their Lie algebra g_Q; membership in D and its compact dual."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .errors import DomainError, InputShapeError
from .linalg import (
    I,
    Filtration,
    Matrix,
    Subspace,
    conj,
    positivity_check,
    scalar,
)


def i_power(k: int):
    """i**k as an exact scalar."""
    return (Fraction(1), I, Fraction(-1), -I)[k % 4]


@dataclass(frozen=True)
class PolarizedLattice:
    """V_Z = Z^dim with a (-1)^weight symmetric form Q and Hodge numbers h^{p, weight-p}.

    ``hodge_numbers[p]`` is h^{p, weight-p} for p = 0..weight.
    """

    Q: Matrix
    weight: int
    hodge_numbers: tuple

    def __post_init__(self):
        object.__setattr__(self, "hodge_numbers", tuple(int(h) for h in self.hodge_numbers))
        q, n, h = self.Q, self.weight, self.hodge_numbers
        if not q.is_square or not q.is_real:
            raise InputShapeError("Q must be a square rational matrix")
        if n < 0:
            raise InputShapeError("weight must be nonnegative")
        if len(h) != n + 1:
            raise InputShapeError(f"need {n + 1} Hodge numbers for weight {n}")
        if any(x < 0 for x in h) or sum(h) != q.rows:
            raise InputShapeError("Hodge numbers must be nonnegative and sum to dim")
        if h != h[::-1]:
            raise InputShapeError("Hodge numbers must satisfy h^{p,q} = h^{q,p}")
        sign = -1 if n % 2 else 1
        if q.T != q.scale(sign):
            raise InputShapeError("Q must be (-1)^weight symmetric")
        if q.det() == 0:
            raise InputShapeError("Q must be nondegenerate")

    @property
    def dim(self) -> int:
        return self.Q.rows

    def f(self, p: int) -> int:
        """dim F^p = sum of h^{r, n-r} over r >= p."""
        return sum(self.hodge_numbers[max(p, 0):])

    def form(self, u, v):
        """Q(u, v) = u^T Q v (bilinear, no conjugation)."""
        qv = self.Q.apply(v)
        return scalar(sum((a * b for a, b in zip(u, qv) if a and b), Fraction(0)))

    def gram(self, us, vs) -> Matrix:
        rows = [[self.form(u, v) for v in vs] for u in us]
        return Matrix(rows, cols=len(vs))

    def is_symplectic(self) -> bool:
        return self.weight % 2 == 1


def in_g_q(xi: Matrix, lattice: PolarizedLattice) -> bool:
    """xi^T Q + Q xi == 0."""
    if xi.shape != lattice.Q.shape:
        raise InputShapeError("xi must be dim x dim")
    q = lattice.Q
    return (xi.T @ q + q @ xi).is_zero()


def g_q_basis(lattice: PolarizedLattice) -> tuple:
    """Canonical basis of g_Q, from the kernel of xi -> xi^T Q + Q xi."""
    d = lattice.dim
    q = lattice.Q
    rows = []
    for a in range(d):
        for b in range(d):
            row = [Fraction(0)] * (d * d)
            for k in range(d):
                # (xi^T Q)_{ab} = sum_k xi_{ka} Q_{kb};  (Q xi)_{ab} = sum_k Q_{ak} xi_{kb}
                row[k * d + a] += q[k, b]
                row[k * d + b] += q[a, k]
            rows.append(row)
    kern = Matrix(rows).kernel() if d else ()
    span = Subspace.span(kern, d * d)
    return tuple(Matrix.unvec(v, d) for v in span.vectors)


@dataclass(frozen=True)
class HodgeFlag:
    """Decreasing filtration F^0 = V ⊇ F^1 ⊇ ... ⊇ F^{n+1} = 0 over Q(i)."""

    lattice: PolarizedLattice
    filtration: Filtration

    def __post_init__(self):
        L = self.lattice
        fil = self.filtration
        if fil.direction != "decreasing" or fil.ambient != L.dim:
            raise InputShapeError("Hodge flag must be a decreasing filtration of V")
        for p in range(0, L.weight + 2):
            if fil.at(p).dim != L.f(p):
                raise InputShapeError(
                    f"dim F^{p} = {fil.at(p).dim}, Hodge numbers require {L.f(p)}"
                )

    @classmethod
    def from_spaces(cls, lattice: PolarizedLattice, spaces: Mapping[int, Sequence]) -> "HodgeFlag":
        """Build from spanning vectors of F^p for 1 <= p <= weight."""
        d, n = lattice.dim, lattice.weight
        steps = [(0, Subspace.full(d)), (n + 1, Subspace.zero(d))]
        for p in range(1, n + 1):
            vecs = spaces.get(p, spaces.get(str(p)))
            if vecs is None:
                raise InputShapeError(f"missing F^{p}")
            steps.append((p, vecs if isinstance(vecs, Subspace) else Subspace.span(vecs, d)))
        return cls(lattice, Filtration(d, "decreasing", steps))

    def F(self, p: int) -> Subspace:
        return self.filtration.at(p)

    @property
    def weight(self):
        return self.lattice.weight

    def conj_F(self, p: int) -> Subspace:
        return self.F(p).conj()

    def transform(self, g: Matrix) -> "HodgeFlag":
        return HodgeFlag(self.lattice, self.filtration.transform(g))

    def spaces(self) -> dict:
        return {p: self.F(p) for p in range(1, self.weight + 1)}

    def __hash__(self):
        return hash((self.lattice, tuple(self.F(p) for p in range(self.weight + 2))))

    def __eq__(self, other):
        if not isinstance(other, HodgeFlag):
            return NotImplemented
        return self.lattice == other.lattice and all(
            self.F(p) == other.F(p) for p in range(self.weight + 2)
        )

    @cached_property
    def is_real(self) -> bool:
        return all(self.F(p).is_real for p in range(self.weight + 2))


def _isotropic(lattice, a: Subspace, b: Subspace) -> bool:
    if a.dim == 0 or b.dim == 0:
        return True
    return lattice.gram(a.vectors, b.vectors).is_zero()


def in_compact_dual(flag: HodgeFlag) -> bool:
    """Dimension profile plus the first bilinear relation Q(F^p, F^{n-p+1}) = 0."""
    L = flag.lattice
    n = L.weight
    for p in range(0, n + 2):
        if flag.F(p).dim != L.f(p):
            return False
    return all(_isotropic(L, flag.F(p), flag.F(n - p + 1)) for p in range(1, n + 1))


def hodge_piece(flag: HodgeFlag, p: int) -> Subspace:
    """H^{p, n-p} = F^p ∩ conj(F^{n-p})."""
    return flag.F(p) & flag.conj_F(flag.weight - p)


def hodge_riemann_matrix(lattice: PolarizedLattice, space: Subspace, p: int, q: int, twist=None) -> Matrix:
    """Hermitian matrix of v -> i^{p-q} Q(v, twist conj(v)) on a basis of ``space``."""
    c = i_power(p - q)
    basis = space.vectors
    conjs = [tuple(conj(x) for x in v) for v in basis]
    if twist is not None:
        conjs = [twist.apply(v) for v in conjs]
    rows = [[scalar(c * lattice.form(u, w)) for w in conjs] for u in basis]
    return Matrix(rows, cols=len(basis))


def in_period_domain(flag: HodgeFlag) -> bool:
    """Both Hodge–Riemann relations: flag is a Q-polarized Hodge structure."""
    if not in_compact_dual(flag):
        raise DomainError("flag is not in the compact dual")
    L = flag.lattice
    n, d = L.weight, L.dim
    for p in range(0, n + 2):
        a, b = flag.F(p), flag.conj_F(n - p + 1)
        if a.dim + b.dim != d or not (a & b).is_zero():
            return False
    for p in range(0, n + 1):
        h = hodge_piece(flag, p)
        if h.dim == 0:
            continue
        if not positivity_check(hodge_riemann_matrix(L, h, p, n - p)):
            return False
    return True
