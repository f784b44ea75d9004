"""Exact linear algebra over Q and Q(i).

Scalars are :class:`fractions.Fraction` (rational) or :class:`GaussRat`
(Gaussian rational with nonzero imaginary part).  Every constructor in this
module normalizes a Gaussian rational with zero imaginary part back to a
Fraction, so rational data never pays for complex arithmetic and equality /
hashing stay syntactic.

Row reduction of rational matrices runs fraction-free on Python integers; the
Gaussian path uses field arithmetic directly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import InputShapeError, NoSolution

Rat = Fraction


class GaussRat:
    """Element re + i*im of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def norm(self):
        """|z|^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}+{self.im}i" if self.im > 0 else f"{self.re}{self.im}i"


I = GaussRat(0, 1)


def scalar(x):
    """Normalize ``x`` to a Fraction, or a GaussRat with nonzero imaginary part."""
    t = type(x)
    if t is Fraction:
        return x
    if t is int:
        return Fraction(x)
    if t is GaussRat:
        return x.re if not x.im else x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def conj(x):
    return x.conjugate() if type(x) is GaussRat else x


def re_part(x):
    return x.re if type(x) is GaussRat else x


def im_part(x):
    return x.im if type(x) is GaussRat else Fraction(0)


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _is_real_rows(rows) -> bool:
    return all(type(x) is Fraction for r in rows for x in r)


def _exact_rows(rows):
    return [[scalar(x) for x in r] for r in rows]


def _int_rows(rows):
    """Scale each rational row to a primitive integer row."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
        ints = [x.numerator * (den // x.denominator) for x in r]
        g = math.gcd(*ints) if ints else 0
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _frac(x, p):
    """x / p for ints, skipping Fraction's own normalization."""
    g = math.gcd(x, p)
    if p < 0:
        g = -g
    return Fraction(x // g, p // g, _normalize=False)


def _rref_int(m, ncols, rank_only=False):
    m = [r for r in m if any(r)]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[c]
            if a:
                new = [p * x - a * y for x, y in zip(row, pr)]
                g = math.gcd(*new)
                if g > 1:
                    new = [v // g for v in new]
                m[i] = new
        pivots.append(c)
        r += 1
    if rank_only:
        return None, pivots
    out = []
    for row, c in zip(m[:r], pivots):
        p = row[c]
        out.append([_frac(x, p) if x else _ZERO for x in row])
    return out, pivots


def _rref_field(m, ncols):
    m = [list(r) for r in m]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        pr = [scalar(x / p) for x in m[r]]
        m[r] = pr
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[c]
            if a:
                m[i] = [scalar(x - a * y) if y else x for x, y in zip(row, pr)]
        pivots.append(c)
        r += 1
    return [[scalar(x) for x in row] for row in m[:r]], pivots


def rref_rows(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    if not _is_real_rows(rows):
        rows = _exact_rows(rows)
        if _is_real_rows(rows):
            return _rref_int(_int_rows(rows), ncols)
        return _rref_field(rows, ncols)
    return _rref_int(_int_rows(rows), ncols)


def rank_rows(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    if not _is_real_rows(rows):
        rows = _exact_rows(rows)
        if not _is_real_rows(rows):
            return len(_rref_field(rows, ncols)[1])
    return len(_rref_int(_int_rows(rows), ncols, rank_only=True)[1])


def _kernel_from_rref(red, pivots, ncols):
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [_ZERO] * ncols
        v[f] = _ONE
        for row, c in zip(red, pivots):
            x = row[f]
            if x:
                v[c] = scalar(-x)
        basis.append(tuple(v))
    return basis


class Matrix:
    """Immutable dense matrix of exact scalars."""

    __slots__ = ("rows", "cols", "_e", "_hash")

    def __init__(self, data, cols: int | None = None):
        e = tuple(tuple(scalar(x) for x in r) for r in data)
        if cols is None:
            if not e:
                raise InputShapeError("empty matrix needs an explicit column count")
            cols = len(e[0])
        if any(len(r) != cols for r in e):
            raise InputShapeError("ragged matrix rows")
        object.__setattr__(self, "rows", len(e))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_e", e)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, e, cols):
        m = object.__new__(cls)
        object.__setattr__(m, "rows", len(e))
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "_e", e)
        object.__setattr__(m, "_hash", None)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, rows, cols):
        return cls._raw(tuple((_ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n):
        return cls._raw(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def diag(cls, values):
        values = [scalar(v) for v in values]
        n = len(values)
        return cls._raw(
            tuple(tuple(values[i] if i == j else _ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns, nrows: int | None = None):
        columns = [tuple(c) for c in columns]
        if not columns:
            if nrows is None:
                raise InputShapeError("no columns and no row count")
            return cls._raw(tuple(() for _ in range(nrows)), 0)
        return cls(list(zip(*columns)))

    @classmethod
    def unit(cls, n, i, j):
        """Elementary matrix E_ij (0-based)."""
        return cls._raw(
            tuple(tuple(_ONE if (a, b) == (i, j) else _ZERO for b in range(n)) for a in range(n)),
            n,
        )

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def entries(self):
        """Row-major flat tuple."""
        return tuple(x for r in self._e for x in r)

    def tolist(self):
        return [list(r) for r in self._e]

    def row(self, i):
        return self._e[i]

    def col(self, j):
        return tuple(r[j] for r in self._e)

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def __iter__(self):
        return iter(self._e)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.cols == other.cols and self._e == other._e

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.cols, self._e))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._e)
        return f"Matrix[{self.rows}x{self.cols}]({body})"

    @property
    def is_square(self):
        return self.rows == self.cols

    @property
    def is_real(self):
        return _is_real_rows(self._e)

    def is_zero(self):
        return not any(x for r in self._e for x in r)

    def is_integral(self):
        return all(type(x) is Fraction and x.denominator == 1 for r in self._e for x in r)

    @property
    def T(self):
        return Matrix._raw(tuple(zip(*self._e)) if self.rows else tuple(() for _ in range(self.cols)), self.rows)

    def conj(self):
        if self.is_real:
            return self
        return Matrix._raw(tuple(tuple(conj(x) for x in r) for r in self._e), self.cols)

    @property
    def H(self):
        return self.conj().T

    def real_part(self):
        return Matrix._raw(tuple(tuple(re_part(x) for x in r) for r in self._e), self.cols)

    def imag_part(self):
        return Matrix._raw(tuple(tuple(im_part(x) for x in r) for r in self._e), self.cols)

    def _check_same(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            raise InputShapeError(f"shape mismatch {self.shape} vs {getattr(other, 'shape', None)}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(scalar(x + y) for x, y in zip(a, b)) for a, b in zip(self._e, other._e)),
            self.cols,
        )

    def __sub__(self, other):
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(scalar(x - y) for x, y in zip(a, b)) for a, b in zip(self._e, other._e)),
            self.cols,
        )

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-x for x in r) for r in self._e), self.cols)

    def scale(self, c):
        c = scalar(c)
        return Matrix._raw(tuple(tuple(scalar(c * x) for x in r) for r in self._e), self.cols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise InputShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.is_real and other.is_real:
            return self._matmul_real(other)
        bt = list(zip(*other._e)) if other.rows else [()] * other.cols
        return Matrix._raw(
            tuple(
                tuple(scalar(sum((x * y for x, y in zip(r, c) if x and y), _ZERO)) for c in bt)
                for r in self._e
            ),
            other.cols,
        )

    def _matmul_real(self, other):
        da = _common_den(self._e)
        db = _common_den(other._e)
        A = [[x.numerator * (da // x.denominator) for x in r] for r in self._e]
        bt = [[x.numerator * (db // x.denominator) for x in c] for c in zip(*other._e)] if other.rows else [[] for _ in range(other.cols)]
        den = da * db
        out = []
        for r in A:
            row = []
            for c in bt:
                t = sum(x * y for x, y in zip(r, c) if x)
                row.append(_frac(t, den) if t else _ZERO)
            out.append(tuple(row))
        return Matrix._raw(tuple(out), other.cols)

    def apply(self, v):
        """Matrix times a column vector given as a sequence."""
        v = [scalar(x) for x in v]
        if len(v) != self.cols:
            raise InputShapeError("vector length mismatch")
        if self.is_real and all(type(x) is Fraction for x in v):
            col = Matrix._raw(tuple((x,) for x in v), 1)
            return tuple(r[0] for r in self._matmul_real(col)._e)
        return tuple(scalar(sum((x * y for x, y in zip(r, v) if x and y), _ZERO)) for r in self._e)

    def __pow__(self, k):
        if not self.is_square:
            raise InputShapeError("power of non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def rref(self):
        red, piv = rref_rows(self._e, self.cols)
        return Matrix._raw(tuple(tuple(r) for r in red), self.cols), tuple(piv)

    def rank(self):
        return len(rref_rows(self._e, self.cols)[1])

    def kernel(self):
        """Basis of {x : self @ x = 0} as a tuple of vectors."""
        red, piv = rref_rows(self._e, self.cols)
        return tuple(_kernel_from_rref(red, piv, self.cols))

    def det(self):
        if not self.is_square:
            raise InputShapeError("determinant of non-square matrix")
        m = [list(r) for r in self._e]
        n = self.rows
        d = _ONE
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c]), None)
            if piv is None:
                return _ZERO
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            p = m[c][c]
            d = d * p
            for i in range(c + 1, n):
                a = m[i][c]
                if a:
                    f = a / p
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return scalar(d)

    def inverse(self):
        if not self.is_square:
            raise InputShapeError("inverse of non-square matrix")
        n = self.rows
        aug = [list(r) + [_ONE if i == j else _ZERO for j in range(n)] for i, r in enumerate(self._e)]
        red, piv = rref_rows(aug, 2 * n)
        if len(piv) < n or piv[n - 1] != n - 1:
            raise ZeroDivisionError("singular matrix")
        return Matrix._raw(tuple(tuple(r[n:]) for r in red), n)

    def trace(self):
        return scalar(sum((self._e[i][i] for i in range(min(self.rows, self.cols))), _ZERO))

    def is_nilpotent(self):
        return self.is_square and (self ** self.rows).is_zero()

    def vec(self):
        """Row-major coordinates, used when treating matrices as vectors."""
        return self.entries

    @classmethod
    def unvec(cls, v, n):
        v = tuple(v)
        return cls([v[i * n:(i + 1) * n] for i in range(n)])


def _common_den(rows):
    den = 1
    for r in rows:
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
    return den


def bracket(a: Matrix, b: Matrix) -> Matrix:
    """Commutator [a, b] = ab - ba."""
    return a @ b - b @ a


def exp_nilpotent(x: Matrix) -> Matrix:
    """exp(x) for nilpotent x as a finite series."""
    n = x.rows
    result = Matrix.identity(n)
    term = Matrix.identity(n)
    for k in range(1, n + 1):
        term = (term @ x).scale(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


class Subspace:
    """Subspace of Q^n or Q(i)^n held by its reduced-echelon basis."""

    __slots__ = ("ambient", "basis", "_pivots")

    def __init__(self, ambient: int, basis: Matrix, _pivots=None):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_pivots", _pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        rows = [tuple(scalar(x) for x in v) for v in vectors]
        if any(len(r) != ambient for r in rows):
            raise InputShapeError("vector length does not match ambient dimension")
        red, piv = rref_rows(rows, ambient)
        return cls(ambient, Matrix._raw(tuple(tuple(r) for r in red), ambient), tuple(piv))

    @classmethod
    def zero(cls, n):
        return cls(n, Matrix._raw((), n), ())

    @classmethod
    def full(cls, n):
        return cls(n, Matrix.identity(n), tuple(range(n)))

    @property
    def dim(self):
        return self.basis.rows

    @property
    def vectors(self):
        return self.basis._e

    @property
    def pivots(self):
        return self._pivots

    def is_zero(self):
        return self.dim == 0

    def is_full(self):
        return self.dim == self.ambient

    @property
    def is_real(self):
        return self.basis.is_real

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}/{self.ambient}, basis={[list(map(str, v)) for v in self.vectors]})"

    def _check(self, other):
        if not isinstance(other, Subspace) or other.ambient != self.ambient:
            raise InputShapeError("ambient dimension mismatch")

    def __add__(self, other):
        self._check(other)
        if other.dim == 0 or self.is_full():
            return self
        if self.dim == 0 or other.is_full():
            return other
        return Subspace.span(self.vectors + other.vectors, self.ambient)

    def annihilator(self) -> "Subspace":
        """{w : <v, w> = 0 for all v} under the bilinear (unconjugated) pairing."""
        if self.dim == 0:
            return Subspace.full(self.ambient)
        return Subspace.span(_kernel_from_rref(self.vectors, self._pivots, self.ambient), self.ambient)

    def intersect(self, other) -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.is_full():
            return self
        if other.dim == 0 or self.is_full():
            return other
        return (self.annihilator() + other.annihilator()).annihilator()

    __and__ = intersect

    def contains(self, other) -> bool:
        """True iff ``other`` is a subspace of ``self``."""
        self._check(other)
        if other.dim > self.dim:
            return False
        if other.dim == 0 or self.is_full():
            return True
        return rank_rows(self.vectors + other.vectors, self.ambient) == self.dim

    def contains_vector(self, v) -> bool:
        return self.contains(Subspace.span([v], self.ambient))

    def __le__(self, other):
        return other.contains(self)

    def __ge__(self, other):
        return self.contains(other)

    def conj(self) -> "Subspace":
        if self.basis.is_real:
            return self
        return Subspace.span([[conj(x) for x in v] for v in self.vectors], self.ambient)

    def image(self, m: Matrix) -> "Subspace":
        if m.cols != self.ambient:
            raise InputShapeError("matrix does not act on this space")
        if self.dim == 0:
            return Subspace.zero(m.rows)
        return Subspace.span((self.basis @ m.T)._e, m.rows)

    def preimage(self, m: Matrix) -> "Subspace":
        """{x : m x in self}."""
        if m.rows != self.ambient:
            raise InputShapeError("matrix does not map into this space")
        ann = self.annihilator()
        if ann.dim == 0:
            return Subspace.full(m.cols)
        return Subspace.span((Matrix._raw(ann.vectors, self.ambient) @ m).kernel(), m.cols)

    def coordinates(self, v):
        """Coefficients of ``v`` in the canonical basis (raises NoSolution if v is outside)."""
        sol = solve_linear(self.basis.T, list(v))
        return sol.solution


class Filtration:
    """Finite filtration by subspaces, stored in increasing index order.

    ``direction`` is "increasing" (W-type) or "decreasing" (F-type).  Indices
    beyond the stored range clamp to the first/last step.
    """

    __slots__ = ("ambient", "direction", "steps")

    def __init__(self, ambient, direction, steps):
        steps = tuple(sorted(((int(i), s) for i, s in steps), key=lambda t: t[0]))
        if direction not in ("increasing", "decreasing"):
            raise InputShapeError(f"bad direction {direction!r}")
        if not steps:
            raise InputShapeError("empty filtration")
        idx = [i for i, _ in steps]
        if len(set(idx)) != len(idx):
            raise InputShapeError("filtration indices must be strictly monotone")
        for _, s in steps:
            if s.ambient != ambient:
                raise InputShapeError("filtration step in wrong ambient space")
        for (_, a), (_, b) in zip(steps, steps[1:]):
            ok = b.contains(a) if direction == "increasing" else a.contains(b)
            if not ok:
                raise InputShapeError("filtration steps are not nested")
        lo, hi = steps[0][1], steps[-1][1]
        if direction == "increasing" and not (lo.is_zero() and hi.is_full()):
            raise InputShapeError("increasing filtration must run from 0 to the full space")
        if direction == "decreasing" and not (lo.is_full() and hi.is_zero()):
            raise InputShapeError("decreasing filtration must run from the full space to 0")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "steps", steps)

    def __setattr__(self, name, value):
        raise AttributeError("Filtration is immutable")

    @property
    def indices(self):
        return tuple(i for i, _ in self.steps)

    def at(self, index: int) -> Subspace:
        """Increasing: the last stored step at or below ``index``.
        Decreasing: the first stored step at or above ``index``."""
        if self.direction == "increasing":
            best = None
            for i, s in self.steps:
                if i > index:
                    break
                best = s
            return best if best is not None else Subspace.zero(self.ambient)
        for i, s in self.steps:
            if i >= index:
                return s
        return Subspace.zero(self.ambient)

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        if self.ambient != other.ambient or self.direction != other.direction:
            return False
        lo = min(self.steps[0][0], other.steps[0][0])
        hi = max(self.steps[-1][0], other.steps[-1][0])
        return all(self.at(i) == other.at(i) for i in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.ambient, self.direction))

    def transform(self, g: Matrix) -> "Filtration":
        return Filtration(self.ambient, self.direction, [(i, s.image(g)) for i, s in self.steps])

    def conj(self) -> "Filtration":
        return Filtration(self.ambient, self.direction, [(i, s.conj()) for i, s in self.steps])


class LinearSolution(NamedTuple):
    solution: tuple
    kernel: Matrix


def solve_linear(a: Matrix, b) -> LinearSolution:
    """Exact solution of a x = b with the full kernel of a.

    Raises NoSolution when rank([a|b]) > rank(a).
    """
    if isinstance(b, Matrix):
        if b.cols != 1:
            raise InputShapeError("right-hand side must be a column")
        b = b.col(0)
    b = [scalar(x) for x in b]
    if len(b) != a.rows:
        raise InputShapeError(f"right-hand side has {len(b)} rows, matrix has {a.rows}")
    n = a.cols
    aug = [list(r) + [x] for r, x in zip(a, b)]
    red, piv = rref_rows(aug, n + 1)
    if piv and piv[-1] == n:
        raise NoSolution("inconsistent linear system")
    x = [_ZERO] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    kern = _kernel_from_rref([r[:n] for r in red], piv, n)
    return LinearSolution(tuple(x), Matrix._raw(tuple(kern), n))


class ImageKernel(NamedTuple):
    image: Subspace
    kernel: Subspace


def map_image_kernel(n: Matrix, power: int = 1) -> ImageKernel:
    """Image and kernel of n**power."""
    if not n.is_square:
        raise InputShapeError("map_image_kernel needs a square matrix")
    if power < 0:
        raise InputShapeError("power must be nonnegative")
    d = n.rows
    if power == 0:
        return ImageKernel(Subspace.full(d), Subspace.zero(d))
    m = n ** power
    return ImageKernel(Subspace.span(m.T._e, d), Subspace.span(m.kernel(), d))


def subspace_ops(a: Subspace, b: Subspace, op: str):
    """Dispatch for sum / intersect / contains / equal."""
    if a.ambient != b.ambient:
        raise InputShapeError("ambient dimension mismatch")
    if op == "sum":
        return a + b
    if op == "intersect":
        return a & b
    if op == "contains":
        return a.contains(b)
    if op == "equal":
        return a == b
    raise ValueError(f"unknown subspace op {op!r}")


def is_hermitian(h: Matrix) -> bool:
    return h.is_square and h == h.H


def positivity_check(h: Matrix) -> bool:
    """Exact positive-definiteness of a Hermitian matrix (Sylvester).

    Eliminates without pivoting: the k-th pivot is the ratio of consecutive
    leading principal minors, so all minors are positive iff all pivots are.
    """
    if not is_hermitian(h):
        raise InputShapeError("positivity_check needs a Hermitian matrix")
    m = h.tolist()
    n = h.rows
    for k in range(n):
        p = m[k][k]
        # diagonal of a Hermitian Schur complement is real
        p = re_part(p)
        if p <= 0:
            return False
        for i in range(k + 1, n):
            a = m[i][k]
            if a:
                f = a / p
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return True
