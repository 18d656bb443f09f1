"""Lie superalgebras as structure constants, with full axiom validation.

An algebra is a SuperSpace plus a dense tensor c[i][j][k] meaning
[e_i, e_j] = sum_k c[i][j][k] e_k.  Both (i,j) and (j,i) entries are stored;
super-antisymmetry is a validated invariant, not a storage convention
(odd-odd brackets are symmetric, so half-storage is error-prone).

Sign conventions, for homogeneous x, y, z:

    [x, y] = -(-1)^{|x||y|} [y, x]
    (-1)^{|x||z|}[[x,y],z] + (-1)^{|x||y|}[[y,z],x] + (-1)^{|y||z|}[[z,x],y] = 0
    d([x,y]) = [d(x),y] + (-1)^{|d||x|}[x,d(y)]     (derivation of parity |d|)

All values are immutable after construction; every operation is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .reports import Report
from .superlinalg import (
    EVEN, ODD, GradedLinearMap, Subspace, SuperSpace, Vector,
    nullspace, unit_vector, vec_add, vec_is_zero, vec_scale, zero_vector,
)

__all__ = [
    "LieSuperAlgebra", "QuotientResult",
    "structure_constants_from_relations", "abelian_algebra",
]

Tensor = tuple[tuple[Vector, ...], ...]


def _sign(exp: int) -> int:
    return -1 if exp % 2 else 1


def structure_constants_from_relations(
    space: SuperSpace,
    relations: Mapping[tuple[int, int], Sequence[Fraction]],
) -> Tensor:
    """Dense tensor from sparse relations, completing missing mirror entries.

    A relation for (j,i) that is absent defaults to the super-antisymmetric
    image of (i,j); present mirrors must be consistent (validated later).
    """
    n = space.dim
    c = [[None] * n for _ in range(n)]
    for (i, j), v in relations.items():
        c[i][j] = tuple(v)
    for i in range(n):
        for j in range(n):
            if c[i][j] is None:
                if c[j][i] is not None:
                    s = _sign(space.parities[i] * space.parities[j])
                    c[i][j] = vec_scale(Fraction(-s), c[j][i])
                else:
                    c[i][j] = zero_vector(n)
    return tuple(tuple(row) for row in c)


def abelian_algebra(space: SuperSpace) -> "LieSuperAlgebra":
    return LieSuperAlgebra(space, structure_constants_from_relations(space, {}))


@dataclass(frozen=True)
class LieSuperAlgebra:
    space: SuperSpace
    c: Tensor

    def __post_init__(self):
        n = self.space.dim
        if len(self.c) != n or any(len(r) != n for r in self.c) \
                or any(len(v) != n for r in self.c for v in r):
            raise ValueError("structure tensor must be dim x dim x dim")

    @property
    def dim(self) -> int:
        return self.space.dim

    # -- bracket ---------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self.c[i][j]

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vector dimension mismatch with algebra")
        out = zero_vector(self.dim)
        for i, a in enumerate(x):
            if a == 0:
                continue
            for j, b in enumerate(y):
                if b == 0:
                    continue
                cij = self.c[i][j]
                if not vec_is_zero(cij):
                    out = vec_add(out, vec_scale(a * b, cij))
        return out

    def ad(self, x: Sequence[Fraction]) -> GradedLinearMap:
        """Adjoint action ad_x : y -> [x, y]."""
        rows = tuple(self.bracket(x, unit_vector(self.dim, j)) for j in range(self.dim))
        return GradedLinearMap(self.space, self.space, rows)

    # -- validation ------------------------------------------------------

    def validate(self) -> Report:
        """Grading, super-antisymmetry and the signed Jacobi identity."""
        report = Report("Lie superalgebra axioms")
        par = self.space.parities
        lab = self.space.labels
        n = self.dim

        bad = []
        for i in range(n):
            for j in range(n):
                want = (par[i] + par[j]) % 2
                for k, coeff in enumerate(self.c[i][j]):
                    if coeff != 0 and par[k] != want:
                        bad.append(f"[{lab[i]},{lab[j]}] hits {lab[k]} of wrong parity")
        report.add("bracket respects the Z2-grading", not bad, bad)

        bad = []
        for i in range(n):
            for j in range(i, n):
                s = _sign(par[i] * par[j])
                mirror = vec_scale(Fraction(-s), self.c[j][i])
                if self.c[i][j] != mirror:
                    bad.append(
                        f"([{lab[i]},{lab[j]}], [{lab[j]},{lab[i]}]) = "
                        f"({self.space.format_vector(self.c[i][j])}, "
                        f"{self.space.format_vector(self.c[j][i])})")
        report.add("super-antisymmetry", not bad, bad)

        bad = []
        zero = zero_vector(n)

        def bracket_vec_basis(v: Vector, k: int) -> Vector:
            # [v, e_k] expanded through the tensor, zero-skipping
            out = None
            for t, coeff in enumerate(v):
                if coeff == 0:
                    continue
                ctk = self.c[t][k]
                if vec_is_zero(ctk):
                    continue
                term = vec_scale(coeff, ctk)
                out = term if out is None else vec_add(out, term)
            return out if out is not None else zero

        for i in range(n):
            for j in range(n):
                cij = self.c[i][j]
                ij_zero = vec_is_zero(cij)
                for k in range(n):
                    cjk = self.c[j][k]
                    cki = self.c[k][i]
                    if ij_zero and vec_is_zero(cjk) and vec_is_zero(cki):
                        continue
                    acc = zero
                    if not ij_zero:
                        acc = vec_add(acc, vec_scale(
                            Fraction(_sign(par[i] * par[k])), bracket_vec_basis(cij, k)))
                    if not vec_is_zero(cjk):
                        acc = vec_add(acc, vec_scale(
                            Fraction(_sign(par[i] * par[j])), bracket_vec_basis(cjk, i)))
                    if not vec_is_zero(cki):
                        acc = vec_add(acc, vec_scale(
                            Fraction(_sign(par[j] * par[k])), bracket_vec_basis(cki, j)))
                    if not vec_is_zero(acc):
                        bad.append(f"({lab[i]},{lab[j]},{lab[k]}): residual "
                                   f"{self.space.format_vector(acc)}")
        report.add("super Jacobi identity", not bad, bad)
        return report

    def is_derivation(self, d: GradedLinearMap, parity: int | None = None
                      ) -> tuple[bool, list[str]]:
        """Check the graded Leibniz rule on all basis pairs.

        Each homogeneous part of ``d`` is checked separately unless an
        explicit parity is declared for the whole map.
        """
        parts = [(parity, d)] if parity is not None else [
            (p, d.part(p)) for p in (EVEN, ODD)
        ]
        lab = self.space.labels
        witnesses = []
        for p, dp in parts:
            for i in range(self.dim):
                for j in range(self.dim):
                    lhs = dp.apply(self.c[i][j])
                    rhs = vec_add(
                        self.bracket(dp.rows[i], unit_vector(self.dim, j)),
                        vec_scale(Fraction(_sign(p * self.space.parities[i])),
                                  self.bracket(unit_vector(self.dim, i), dp.rows[j])))
                    if lhs != rhs:
                        witnesses.append(f"parity-{p} part fails on ({lab[i]},{lab[j]})")
        return (not witnesses, witnesses)

    # -- ideals, center, quotients ---------------------------------------

    def center(self) -> Subspace:
        """Exact kernel of x -> (ad_x e_j)_j; always a homogeneous ideal."""
        rows = []
        for j in range(self.dim):
            for k in range(self.dim):
                rows.append([self.c[i][j][k] for i in range(self.dim)])
        return Subspace.from_vectors(self.space, nullspace(rows, self.dim))

    def is_homogeneous_ideal(self, s: Subspace) -> bool:
        if s.space != self.space:
            raise ValueError("subspace lives in a different space")
        if not s.is_homogeneous():
            return False
        for r in s.rows:
            for j in range(self.dim):
                if not s.contains_vector(self.bracket(r, unit_vector(self.dim, j))):
                    return False
        return True

    def quotient(self, j: Subspace) -> "QuotientResult":
        """Quotient by a homogeneous ideal, on canonical complement vectors.

        The complement is spanned by the non-pivot canonical basis vectors
        of the ideal's RREF, preserving even-before-odd order.
        """
        if not self.is_homogeneous_ideal(j):
            raise ValueError("quotient requires a homogeneous ideal")
        n = self.dim
        keep = [k for k in range(n) if k not in j.pivots]
        labels = tuple(self.space.labels[k] for k in keep)
        parities = tuple(self.space.parities[k] for k in keep)
        qspace = SuperSpace(labels, parities)

        def project(v: Sequence[Fraction]) -> Vector:
            red = j.reduce_mod(v)
            return tuple(red[k] for k in keep)

        c = tuple(
            tuple(project(self.c[a][b]) for b in keep)
            for a in keep
        )
        quotient_alg = LieSuperAlgebra(qspace, c)
        proj = GradedLinearMap(self.space, qspace,
                               tuple(project(unit_vector(n, i)) for i in range(n)))
        return QuotientResult(quotient_alg, proj, tuple(keep))

    # -- nilpotency -------------------------------------------------------

    def derived_subspace(self, s: Subspace) -> Subspace:
        """Span of [g, s]."""
        vecs = []
        for r in s.rows:
            for i in range(self.dim):
                v = self.bracket(unit_vector(self.dim, i), r)
                if not vec_is_zero(v):
                    vecs.append(v)
        return Subspace.from_vectors(self.space, vecs)

    def lower_central_series(self) -> list[Subspace]:
        series = [Subspace.full(self.space)]
        while True:
            nxt = self.derived_subspace(series[-1])
            if nxt.dim == series[-1].dim:
                series.append(nxt)
                break
            series.append(nxt)
            if nxt.dim == 0:
                break
        return series

    def nilpotency_class(self) -> int | None:
        """Steps until the lower central series hits zero; None otherwise.

        Convention: nonzero abelian algebras have class 1, the zero algebra
        class 0.
        """
        if self.dim == 0:
            return 0
        series = self.lower_central_series()
        if series[-1].dim != 0:
            return None
        return len(series) - 1


@dataclass(frozen=True)
class QuotientResult:
    algebra: LieSuperAlgebra
    projection: GradedLinearMap
    kept_indices: tuple[int, ...]
