"""Exact linear algebra over the rationals for Z2-graded spaces.

Scalars are stdlib ``fractions.Fraction`` everywhere: arithmetic is exact,
fractions are kept in lowest terms with positive denominator, and string
round-trips are lossless.  Vectors and matrices are plain tuples/lists of
Fractions; no floating point appears anywhere in the package.

Parities are the ints 0 (even) and 1 (odd), added mod 2.  A ``SuperSpace``
keeps its basis in canonical order: every even basis vector precedes every
odd one.  Permutation machinery (shuffles, super signs) uses one-line
notation over 1-based slots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]

EVEN = 0
ODD = 1

ZERO = Fraction(0)
ONE = Fraction(1)

__all__ = [
    "Scalar", "Vector", "EVEN", "ODD", "ZERO", "ONE",
    "parse_scalar", "format_scalar",
    "SuperSpace", "GradedLinearMap", "Subspace",
    "LinearSolution", "InconsistentSystemError",
    "zero_vector", "unit_vector", "vec_add", "vec_sub", "vec_scale",
    "vec_is_zero", "rref", "matrix_rank", "nullspace", "solve_linear",
    "mat_mul", "mat_vec", "identity_matrix",
    "shuffles", "perm_sign", "theta_sign", "pi_label",
]


def parse_scalar(text: str) -> Fraction:
    """Parse an exact rational literal like ``-3/4`` or ``2``."""
    return Fraction(text.strip())


def format_scalar(x: Fraction) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

def zero_vector(n: int) -> Vector:
    return tuple([ZERO] * n)


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c: Fraction, a: Sequence[Fraction]) -> Vector:
    if c == 0:
        return zero_vector(len(a))
    return tuple(c * x for x in a)


def vec_is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


# ---------------------------------------------------------------------------
# matrices: exact Gaussian elimination
# ---------------------------------------------------------------------------

def rref(rows: Iterable[Sequence[Fraction]]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        inv = ONE / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return [tuple(r) for r in m[:row]], pivots


def matrix_rank(rows: Iterable[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Iterable[Sequence[Fraction]], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : A x = 0}, rows of A given; canonical (RREF-derived)."""
    m = [list(r) for r in rows]
    if ncols is None:
        if not m:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(m[0])
    red, pivots = rref(m) if m else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in zip(red, pivots):
            v[pc] = -r[fc]
        basis.append(tuple(v))
    return basis


class InconsistentSystemError(ValueError):
    """Raised when A x = b has no solution; carries the failing reduced row."""

    def __init__(self, row_index: int, row: Sequence[Fraction], rhs: Fraction):
        self.row_index = row_index
        self.row = tuple(row)
        self.rhs = rhs
        super().__init__(
            f"inconsistent linear system: row {row_index} reduces to "
            f"0 = {format_scalar(rhs)}"
        )


@dataclass(frozen=True)
class LinearSolution:
    """Full solution set of A x = b: particular + nullspace basis."""

    particular: Vector
    nullspace: tuple[Vector, ...]

    @property
    def unique(self) -> bool:
        return not self.nullspace

    def contains(self, x: Sequence[Fraction]) -> bool:
        diff = vec_sub(tuple(x), self.particular)
        if not self.nullspace:
            return vec_is_zero(diff)
        red, pivots = rref(self.nullspace)
        resid = list(diff)
        for r, p in zip(red, pivots):
            if resid[p] != 0:
                f = resid[p]
                resid = [x - f * y for x, y in zip(resid, r)]
        return vec_is_zero(resid)


def solve_linear(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> LinearSolution:
    """Exactly solve A x = b, reporting the full solution set.

    Raises InconsistentSystemError when b is outside the column space.
    """
    nrows = len(a)
    if nrows != len(b):
        raise ValueError("matrix/vector size mismatch")
    ncols = len(a[0]) if nrows else 0
    aug = [list(a[r]) + [Fraction(b[r])] for r in range(nrows)]
    red, pivots = rref(aug) if aug else ([], [])
    for idx, (r, p) in enumerate(zip(red, pivots)):
        if p == ncols:
            return _raise_inconsistent(idx, r)
    particular = [ZERO] * ncols
    for r, p in zip(red, pivots):
        particular[p] = r[ncols]
    null = nullspace([r[:ncols] for r in red], ncols) if ncols else []
    return LinearSolution(tuple(particular), tuple(null))


def _raise_inconsistent(idx: int, row: Sequence[Fraction]):
    raise InconsistentSystemError(idx, row[:-1], row[-1])


def mat_vec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return tuple(
        sum((a[r][c] * x[c] for c in range(len(x)) if x[c] != 0), ZERO)
        for r in range(len(a))
    )


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[Vector]:
    return [
        tuple(sum((a[r][k] * b[k][c] for k in range(len(b)) if a[r][k] != 0), ZERO)
              for c in range(len(b[0])))
        for r in range(len(a))
    ]


def identity_matrix(n: int) -> list[Vector]:
    return [unit_vector(n, i) for i in range(n)]


# ---------------------------------------------------------------------------
# permutations: shuffles and super signs
# ---------------------------------------------------------------------------

def shuffles(n: int, k: int) -> list[tuple[int, ...]]:
    """All (n,k)-shuffles of {1..n+k} in one-line notation.

    A shuffle is increasing on the first n slots and on the last k slots;
    there are binomial(n+k, n) of them.
    """
    if n < 0 or k < 0:
        raise ValueError("shuffle block sizes must be nonnegative")
    total = n + k
    out = []
    for first in itertools.combinations(range(1, total + 1), n):
        rest = tuple(i for i in range(1, total + 1) if i not in first)
        out.append(first + rest)
    return out


def perm_sign(perm: Sequence[int]) -> int:
    """Signature via inversion count (one-line notation, any base index)."""
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def theta_sign(perm: Sequence[int], parities: Sequence[int]) -> int:
    """Super-shuffle sign: sgn(sigma) * (-1)^(number of odd-odd inversions).

    ``parities[i]`` is the parity of the object sitting in slot i+1 before
    the permutation is applied; an inversion (i<j, sigma(i)>sigma(j)) counts
    only when both displaced objects are odd.
    """
    if len(perm) != len(parities):
        raise ValueError("permutation degree must match parity list")
    kcount = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if (perm[i] > perm[j]
                    and parities[perm[i] - 1] == ODD
                    and parities[perm[j] - 1] == ODD):
                kcount += 1
    return perm_sign(perm) * (-1) ** kcount


# ---------------------------------------------------------------------------
# graded spaces
# ---------------------------------------------------------------------------

def pi_label(label: str) -> str:
    """Parity-change decoration: wrap in pi(...), unwrap a wrapped label."""
    if label.startswith("pi(") and label.endswith(")"):
        return label[3:-1]
    return f"pi({label})"


@dataclass(frozen=True)
class SuperSpace:
    """Finite-dimensional Z2-graded space with named, parity-tagged basis.

    Invariants: labels are distinct and every even basis vector precedes
    every odd one.  Use :meth:`sorted_from` to canonicalize arbitrary input.
    """

    labels: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.parities):
            raise ValueError("labels/parities length mismatch")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise ValueError("parities must be 0 or 1")
        if list(self.parities) != sorted(self.parities):
            raise ValueError("even basis vectors must precede odd ones")

    @classmethod
    def sorted_from(cls, labels: Sequence[str], parities: Sequence[int]):
        """Build a canonical space from arbitrary order.

        Returns (space, perm, changed) where perm[old_index] = new_index.
        """
        order = sorted(range(len(labels)), key=lambda i: (parities[i], 0))
        # stable sort keeps relative order within each parity class
        perm = [0] * len(labels)
        for new, old in enumerate(order):
            perm[old] = new
        space = cls(tuple(labels[i] for i in order), tuple(parities[i] for i in order))
        return space, tuple(perm), perm != list(range(len(labels)))

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def dim_pair(self) -> tuple[int, int]:
        odd = sum(self.parities)
        return (self.dim - odd, odd)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def parity_of(self, label: str) -> int:
        return self.parities[self.index(label)]

    def vector_parity(self, v: Sequence[Fraction]) -> int | None:
        """Parity of a homogeneous vector, or None for mixed/zero input."""
        seen = {self.parities[i] for i, c in enumerate(v) if c != 0}
        if len(seen) == 1:
            return seen.pop()
        return None

    def parity_projection(self, v: Sequence[Fraction], parity: int) -> Vector:
        return tuple(c if self.parities[i] == parity else ZERO
                     for i, c in enumerate(v))

    def parity_swap(self) -> "SuperSpace":
        """The parity-change functor: flipped parities, pi(...)-labels.

        Applying it twice returns a space identified with the original
        (labels unwrap exactly).
        """
        labels = [pi_label(l) for l in self.labels]
        parities = [1 - p for p in self.parities]
        space, _, _ = SuperSpace.sorted_from(labels, parities)
        return space

    def format_vector(self, v: Sequence[Fraction]) -> str:
        """Human-readable linear combination, zero terms omitted."""
        terms = []
        for i, c in enumerate(v):
            if c == 0:
                continue
            lab = self.labels[i]
            if c == 1:
                t = lab
            elif c == -1:
                t = f"-{lab}"
            else:
                t = f"{format_scalar(c)} {lab}"
            terms.append(t)
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


# ---------------------------------------------------------------------------
# graded linear maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedLinearMap:
    """Linear map between super spaces; rows[i] = image of source basis i.

    The even (odd) part sends parity-p vectors into parity-p (p+1) targets;
    the stored matrix is always the sum of the two parts.
    """

    source: SuperSpace
    target: SuperSpace
    rows: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.rows) != self.source.dim:
            raise ValueError("one row per source basis vector required")
        for r in self.rows:
            if len(r) != self.target.dim:
                raise ValueError("row length must match target dimension")

    @classmethod
    def zero(cls, source: SuperSpace, target: SuperSpace) -> "GradedLinearMap":
        return cls(source, target, tuple(zero_vector(target.dim) for _ in range(source.dim)))

    @classmethod
    def identity(cls, space: SuperSpace) -> "GradedLinearMap":
        return cls(space, space, tuple(identity_matrix(space.dim)))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        out = zero_vector(self.target.dim)
        for i, c in enumerate(v):
            if c != 0:
                out = vec_add(out, vec_scale(c, self.rows[i]))
        return out

    def part(self, parity: int) -> "GradedLinearMap":
        rows = []
        for i, r in enumerate(self.rows):
            want = (self.source.parities[i] + parity) % 2
            rows.append(tuple(c if self.target.parities[j] == want else ZERO
                              for j, c in enumerate(r)))
        return GradedLinearMap(self.source, self.target, tuple(rows))

    def homogeneous_parity(self) -> int | None:
        """0/1 when the map is homogeneous of that parity; None if mixed."""
        seen = set()
        for i, r in enumerate(self.rows):
            for j, c in enumerate(r):
                if c != 0:
                    seen.add((self.target.parities[j] - self.source.parities[i]) % 2)
        if not seen:
            return EVEN
        if len(seen) == 1:
            return seen.pop()
        return None

    def then(self, other: "GradedLinearMap") -> "GradedLinearMap":
        """Composition self followed by other (other . self)."""
        if self.target.dim != other.source.dim:
            raise ValueError("composition dimension mismatch")
        rows = tuple(other.apply(r) for r in self.rows)
        return GradedLinearMap(self.source, other.target, rows)

    def add(self, other: "GradedLinearMap") -> "GradedLinearMap":
        return GradedLinearMap(self.source, self.target,
                               tuple(vec_add(a, b) for a, b in zip(self.rows, other.rows)))

    def sub(self, other: "GradedLinearMap") -> "GradedLinearMap":
        return GradedLinearMap(self.source, self.target,
                               tuple(vec_sub(a, b) for a, b in zip(self.rows, other.rows)))

    def scale(self, c: Fraction) -> "GradedLinearMap":
        return GradedLinearMap(self.source, self.target,
                               tuple(vec_scale(c, r) for r in self.rows))

    def is_invertible(self) -> bool:
        return (self.source.dim == self.target.dim
                and matrix_rank(self.rows) == self.source.dim)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subspace of a SuperSpace, stored as RREF spanning rows."""

    space: SuperSpace
    rows: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(cls, space: SuperSpace, vectors: Iterable[Sequence[Fraction]]) -> "Subspace":
        red, piv = rref(list(vectors))
        return cls(space, tuple(red), tuple(piv))

    @classmethod
    def zero(cls, space: SuperSpace) -> "Subspace":
        return cls(space, (), ())

    @classmethod
    def full(cls, space: SuperSpace) -> "Subspace":
        return cls.from_vectors(space, identity_matrix(space.dim))

    @classmethod
    def from_labels(cls, space: SuperSpace, labels: Iterable[str]) -> "Subspace":
        return cls.from_vectors(
            space, [unit_vector(space.dim, space.index(l)) for l in labels])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains_vector(self, v: Sequence[Fraction]) -> bool:
        resid = list(v)
        for r, p in zip(self.rows, self.pivots):
            if resid[p] != 0:
                f = resid[p]
                resid = [x - f * y for x, y in zip(resid, r)]
        return vec_is_zero(resid)

    def reduce_mod(self, v: Sequence[Fraction]) -> Vector:
        """Canonical representative of v modulo this subspace."""
        resid = list(v)
        for r, p in zip(self.rows, self.pivots):
            if resid[p] != 0:
                f = resid[p]
                resid = [x - f * y for x, y in zip(resid, r)]
        return tuple(resid)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace)
                and self.space == other.space
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.space, self.rows))

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(self.space, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Exact intersection via nullspace of stacked coordinates."""
        if not self.rows or not other.rows:
            return Subspace.zero(self.space)
        # x = sum a_i u_i = sum b_j w_j  <=>  [U^T | -W^T] (a,b)^T = 0
        n = self.space.dim
        cols = len(self.rows) + len(other.rows)
        system = []
        for coord in range(n):
            system.append([self.rows[i][coord] for i in range(len(self.rows))]
                          + [-other.rows[j][coord] for j in range(len(other.rows))])
        vectors = []
        for sol in nullspace(system, cols):
            v = zero_vector(n)
            for i, c in enumerate(sol[:len(self.rows)]):
                if c != 0:
                    v = vec_add(v, vec_scale(c, self.rows[i]))
            vectors.append(v)
        return Subspace.from_vectors(self.space, vectors)

    def is_homogeneous(self) -> bool:
        """True when the subspace splits as (even part) + (odd part)."""
        for r in self.rows:
            for parity in (EVEN, ODD):
                if not self.contains_vector(self.space.parity_projection(r, parity)):
                    return False
        return True

    def homogeneous_basis(self) -> list[Vector]:
        """Parity-pure spanning set (valid only for homogeneous subspaces)."""
        vecs = []
        for r in self.rows:
            for parity in (EVEN, ODD):
                proj = self.space.parity_projection(r, parity)
                if not vec_is_zero(proj):
                    vecs.append(proj)
        red, _ = rref(vecs)
        return list(red)

    def describe(self) -> str:
        if not self.rows:
            return "0"
        return ", ".join(self.space.format_vector(r) for r in self.rows)
