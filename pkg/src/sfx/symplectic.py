"""Homogeneous symplectic forms on Lie superalgebras and their reductions.

A SuperForm is a bilinear form given by its Gram matrix B[i][j] = w(e_i,e_j),
declared even (pairs even-even and odd-odd) or odd (pairs even-odd only),
super-antisymmetric in the graded sense: w(x,y) = -(-1)^{|x||y|} w(y,x), so
odd-odd pairings are symmetric and w(x,x) can be nonzero for odd x.

The closedness identity checked on all basis triples is the cyclic cocycle
condition

    (-1)^{|a||c|} w(a,[b,c]) + (-1)^{|c||b|} w(c,[a,b]) + (-1)^{|b||a|} w(b,[c,a]) = 0.

Everything is exact; degeneracy questions are exact rank computations and no
tolerance parameter exists anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .liesuper import LieSuperAlgebra
from .reports import Report
from .superlinalg import (
    EVEN, ODD, ZERO, Subspace, SuperSpace, Vector,
    matrix_rank, nullspace, unit_vector, vec_is_zero,
)

__all__ = ["SuperForm", "QuasiFrobenius", "ReduceResult"]

Gram = tuple[Vector, ...]


def _sign(exp: int) -> int:
    return -1 if exp % 2 else 1


@dataclass(frozen=True)
class SuperForm:
    space: SuperSpace
    gram: Gram
    parity: int  # EVEN for orthosymplectic candidates, ODD for periplectic

    def __post_init__(self):
        n = self.space.dim
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("Gram matrix must be dim x dim")
        if self.parity not in (EVEN, ODD):
            raise ValueError("form parity must be 0 or 1")

    def value(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        acc = ZERO
        for i, a in enumerate(x):
            if a == 0:
                continue
            row = self.gram[i]
            for j, b in enumerate(y):
                if b != 0 and row[j] != 0:
                    acc += a * b * row[j]
        return acc

    def validate(self) -> Report:
        report = Report("homogeneous super-antisymmetric form")
        par = self.space.parities
        lab = self.space.labels
        n = self.space.dim

        bad = []
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != 0 and (par[i] + par[j]) % 2 != self.parity:
                    bad.append(f"w({lab[i]},{lab[j]}) != 0 breaks declared parity")
        report.add("homogeneity of the declared parity", not bad, bad)

        bad = []
        for i in range(n):
            for j in range(i, n):
                if self.gram[j][i] != -_sign(par[i] * par[j]) * self.gram[i][j]:
                    bad.append(f"pair ({lab[i]},{lab[j]})")
        report.add("super-antisymmetry", not bad, bad)
        return report

    def is_nondegenerate(self) -> bool:
        return matrix_rank(self.gram) == self.space.dim

    def kernel(self) -> Subspace:
        rows = [[self.gram[i][j] for i in range(self.space.dim)]
                for j in range(self.space.dim)]
        return Subspace.from_vectors(self.space, nullspace(rows, self.space.dim))


@dataclass(frozen=True)
class QuasiFrobenius:
    """A Lie superalgebra with a homogeneous symplectic (closed) form."""

    algebra: LieSuperAlgebra
    form: SuperForm

    def __post_init__(self):
        if self.algebra.space != self.form.space:
            raise ValueError("algebra and form must share one space")

    @property
    def space(self) -> SuperSpace:
        return self.algebra.space

    def is_closed(self) -> tuple[bool, list[str]]:
        """Cyclic cocycle condition on all basis triples; all failures listed."""
        alg = self.algebra
        par = self.space.parities
        lab = self.space.labels
        gram = self.form.gram
        n = self.space.dim

        def row_dot(i: int, w: Vector) -> Fraction:
            row = gram[i]
            return sum((row[t] * w[t] for t in range(n) if w[t] != 0), ZERO)

        witnesses = []
        for i in range(n):
            for j in range(n):
                c_ij = alg.c[i][j]
                ij_zero = vec_is_zero(c_ij)
                for k in range(n):
                    c_jk = alg.c[j][k]
                    c_ki = alg.c[k][i]
                    s = ZERO
                    if not vec_is_zero(c_jk):
                        s += _sign(par[i] * par[k]) * row_dot(i, c_jk)
                    if not ij_zero:
                        s += _sign(par[k] * par[j]) * row_dot(k, c_ij)
                    if not vec_is_zero(c_ki):
                        s += _sign(par[j] * par[i]) * row_dot(j, c_ki)
                    if s != 0:
                        witnesses.append(f"({lab[i]},{lab[j]},{lab[k]}): residual {s}")
        return (not witnesses, witnesses)

    def validate(self) -> Report:
        report = Report("quasi-Frobenius structure")
        alg_report = self.algebra.validate()
        report.checks.extend(alg_report.checks)
        form_report = self.form.validate()
        report.checks.extend(form_report.checks)
        report.add("non-degeneracy (full Gram rank)", self.form.is_nondegenerate(),
                   [] if self.form.is_nondegenerate() else
                   [f"kernel: {self.form.kernel().describe()}"])
        ok, wit = self.is_closed()
        report.add("closedness (cyclic cocycle condition)", ok, wit)
        return report

    # -- orthogonals and ideal classification ----------------------------

    def orthogonal(self, s: Subspace) -> Subspace:
        """Exact solution space of w(x, s) = 0."""
        if not self.form.is_nondegenerate():
            raise ValueError("orthogonal complements need a non-degenerate form")
        n = self.space.dim
        rows = []
        for r in s.rows:
            rows.append([self.form.value(unit_vector(n, i), r) for i in range(n)])
        return Subspace.from_vectors(self.space, nullspace(rows, n))

    def classify_ideal(self, j: Subspace) -> set[str]:
        """Label set among isotropic / lagrangian / degenerate / nondegenerate.

        Labels may co-apply (a nonzero isotropic ideal is also degenerate),
        so the full set is reported.
        """
        if not j.is_homogeneous():
            raise ValueError("classification requires a homogeneous ideal")
        perp = self.orthogonal(j)
        labels: set[str] = set()
        if perp.contains(j):
            labels.add("isotropic")
            if j.dim == perp.dim:
                labels.add("lagrangian")
        meet = j.intersect(perp)
        labels.add("degenerate" if meet.dim else "nondegenerate")
        return labels

    def isotropic_ideal_is_abelian_check(self, j: Subspace) -> bool:
        """Cross-check of the pipeline: isotropic homogeneous ideals are abelian.

        A failure here indicates an internal bug, never bad user data.
        """
        if "isotropic" not in self.classify_ideal(j):
            raise ValueError("check applies to isotropic ideals only")
        for a in j.rows:
            for b in j.rows:
                if not vec_is_zero(self.algebra.bracket(a, b)):
                    return False
        return True

    # -- symplectic reduction --------------------------------------------

    def reduce(self, j: Subspace) -> "ReduceResult":
        """Induced quasi-Frobenius structure on j-perp / j.

        Requires j to be an isotropic homogeneous ideal.  Representatives of
        the quotient are the RREF rows of j-perp whose pivots are not pivots
        of j, reduced mod j; when a representative is a plain basis vector
        its label is reused, otherwise a fresh q<i> label is minted.
        """
        if not self.algebra.is_homogeneous_ideal(j):
            raise ValueError("reduction requires a homogeneous ideal")
        if "isotropic" not in self.classify_ideal(j):
            raise ValueError("reduction requires an isotropic ideal")
        perp = self.orthogonal(j)
        n = self.space.dim

        reps = []
        for row, piv in zip(perp.rows, perp.pivots):
            if piv in j.pivots:
                continue
            reps.append((j.reduce_mod(row), piv))

        labels = []
        parities = []
        used = set()
        for idx, (rep, piv) in enumerate(reps):
            par = self.space.vector_parity(rep)
            if par is None:
                raise AssertionError("non-homogeneous representative; internal bug")
            support = [k for k, c in enumerate(rep) if c != 0]
            if len(support) == 1 and rep[support[0]] == 1:
                label = self.space.labels[support[0]]
            else:
                label = f"q{idx + 1}"
            if label in used:
                label = f"q{idx + 1}"
            used.add(label)
            labels.append(label)
            parities.append(par)

        order = sorted(range(len(reps)), key=lambda t: parities[t])
        reps = [reps[t] for t in order]
        labels = [labels[t] for t in order]
        parities = [parities[t] for t in order]
        qspace = SuperSpace(tuple(labels), tuple(parities))
        pivot_of = [piv for (_, piv) in reps]

        def coords(v: Sequence[Fraction]) -> Vector:
            red = j.reduce_mod(v)
            out = [red[p] for p in pivot_of]
            # subtract to confirm v really lies in j-perp + j
            resid = list(red)
            for coeff, (rep, _) in zip(out, reps):
                if coeff != 0:
                    resid = [x - coeff * y for x, y in zip(resid, rep)]
            if not vec_is_zero(resid):
                raise ValueError("vector outside the orthogonal of the ideal")
            return tuple(out)

        c = tuple(
            tuple(coords(self.algebra.bracket(a_rep, b_rep)) for (b_rep, _) in reps)
            for (a_rep, _) in reps
        )
        gram = tuple(
            tuple(self.form.value(a_rep, b_rep) for (b_rep, _) in reps)
            for (a_rep, _) in reps
        )
        reduced = QuasiFrobenius(
            LieSuperAlgebra(qspace, c),
            SuperForm(qspace, gram, self.form.parity),
        )
        rep_rows = tuple(rep for (rep, _) in reps)
        return ReduceResult(reduced, rep_rows, coords)

    def balanced_ideal(self) -> Subspace:
        """The canonical ideal z meet z-perp of a degenerate center.

        Raises when the center is nondegenerate (or zero): the canonical
        balanced presentation needs a nonzero intersection.
        """
        center = self.algebra.center()
        meet = center.intersect(self.orthogonal(center))
        if meet.dim == 0:
            raise ValueError(
                "center is nondegenerate: no canonical balanced ideal exists")
        return meet


@dataclass(frozen=True)
class ReduceResult:
    reduced: QuasiFrobenius
    representatives: tuple[Vector, ...]
    project: object  # maps a j-perp vector to quotient coordinates
