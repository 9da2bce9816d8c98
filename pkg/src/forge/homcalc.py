"""Integer linear algebra for homology.

Matrices are lists of lists of Python ints (arbitrary precision); numpy
integer arrays are accepted on input and converted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .words import Alphabet, Word

IntMatrix = list[list[int]]


def as_matrix(M) -> IntMatrix:
    return [[int(x) for x in row] for row in M]


def identity_matrix(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = as_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def interpolate_int(xs: Sequence[int], ys: Sequence[int]) -> list[int]:
    """Integer coefficients (constant term first) of the polynomial through the points."""
    n = len(xs)
    if len(ys) != n or len(set(xs)) != n:
        raise ValueError("need one value per distinct node")
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            # multiply basis by (t - xs[j])
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("interpolation produced a non-integer coefficient")
    return [int(c) for c in coeffs]


def charpoly(M) -> list[int]:
    """Coefficients of ``det(t I - M)``, leading term first."""
    M = as_matrix(M)
    n = len(M)
    xs = list(range(n + 1))
    ys = [det([[int(i == j) * t - M[i][j] for j in range(n)] for i in range(n)]) for t in xs]
    return interpolate_int(xs, ys)[::-1]


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U M V = D`` diagonal, ``U, V`` unimodular.

    The diagonal satisfies ``d_1 | d_2 | ...`` with nonnegative entries.  Pivot
    rule: smallest nonzero absolute value in the remaining block, ties broken
    row-major, so the output is reproducible.
    """
    D = as_matrix(M)
    m = len(D)
    n = len(D[0]) if m else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return U, D, V
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty |= D[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    _, D, _ = smith_normal_form(M)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            out.append(D[i][i])
    return out


@dataclass(frozen=True)
class FPAbelianGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | ... | d_k`` and each ``d_i > 1``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative rank")
        if any(d <= 1 for d in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_relations(cls, n_gens: int, rows) -> "FPAbelianGroup":
        """Cokernel of the relation matrix (rows are relations among ``n_gens`` generators)."""
        rows = as_matrix(rows)
        if not rows:
            return cls(n_gens)
        factors = invariant_factors(rows)
        return cls(n_gens - len(factors), tuple(d for d in factors if d > 1))

    @classmethod
    def cyclic(cls, d: int) -> "FPAbelianGroup":
        return cls(1) if d == 0 else cls(0, () if d == 1 else (d,))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Cardinality, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def rank_mod(self, p: int) -> int:
        """Dimension of ``G / pG`` over ``Z/p`` (``p`` prime)."""
        return self.free_rank + sum(1 for d in self.torsion if d % p == 0)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupPresentation:
    generators: Alphabet
    relators: tuple[Word, ...] = field(default=())

    def __post_init__(self):
        n = len(self.generators)
        for r in self.relators:
            if any(abs(x) > n for x in r.letters):
                raise ValueError("relator uses a letter outside the alphabet")

    @classmethod
    def parse(cls, gens: Sequence[str], rels: Iterable[str]) -> "GroupPresentation":
        alpha = Alphabet(tuple(gens))
        return cls(alpha, tuple(alpha.parse(r) for r in rels))

    def relation_matrix(self) -> IntMatrix:
        n = len(self.generators)
        return [list(r.abelianize(n)) for r in self.relators]

    def to_dsl(self) -> str:
        rels = ", ".join(self.generators.format(r) for r in self.relators)
        return f"gens: {','.join(self.generators.names)} ; rels: {rels}"

    @property
    def is_trivial_presentation(self) -> bool:
        """No generators left (so the group is trivial)."""
        return len(self.generators.names) == 0


def abelianization(P: GroupPresentation) -> FPAbelianGroup:
    return FPAbelianGroup.from_relations(len(P.generators), P.relation_matrix())


def mapping_torus_h1(M) -> FPAbelianGroup:
    """H_1 of the mapping torus of a surface map acting on H_1 by ``M``: ``Z + coker(I - M)``."""
    M = as_matrix(M)
    n = len(M)
    rel = [[int(i == j) - M[i][j] for j in range(n)] for i in range(n)]
    # coker of (I - M) acting on column vectors = Z^n / column span; relations are the columns
    cols = [list(col) for col in zip(*rel)] if n else []
    inner = FPAbelianGroup.from_relations(n, cols)
    return FPAbelianGroup(inner.free_rank + 1, inner.torsion)


def _drop_generators(P: GroupPresentation, drop: set[int]) -> GroupPresentation:
    keep = [i for i in range(1, len(P.generators) + 1) if i not in drop]
    new_index = {old: new for new, old in enumerate(keep, start=1)}
    rels = []
    for r in P.relators:
        w = Word(tuple((1 if x > 0 else -1) * new_index[abs(x)] for x in r.letters if abs(x) not in drop))
        if w and w not in rels:
            rels.append(w)
    names = tuple(P.generators.names[i - 1] for i in keep)
    return GroupPresentation(Alphabet(names), tuple(rels))


def quotient_presentation(P: GroupPresentation, kill: Iterable[str]) -> GroupPresentation:
    """Add ``g = 1`` for each killed generator and simplify.

    Killed generators are deleted from every relator.  The only other move is
    the equally safe Tietze move of deleting a generator whose single letter
    is itself a relator; no general search is attempted.
    """
    kill = list(kill)
    for g in kill:
        P.generators.index(g)
    current = _drop_generators(P, {P.generators.index(g) for g in kill})
    while True:
        singles = {abs(r.letters[0]) for r in current.relators if len(r) == 1}
        if not singles:
            return current
        current = _drop_generators(current, singles)


def tietze_add_consequence(P: GroupPresentation, i: int, j: int, conj: Word = Word()) -> GroupPresentation:
    """Append ``relator_i * conj relator_j conj^-1`` (a consequence of the existing relators)."""
    extra = P.relators[i] * P.relators[j].conj(conj)
    return GroupPresentation(P.generators, P.relators + (extra,))


def tietze_add_generator(P: GroupPresentation, name: str, value: Word) -> GroupPresentation:
    """New generator ``name`` with defining relator ``name^-1 value``."""
    alpha = Alphabet(P.generators.names + (name,))
    new = len(alpha)
    return GroupPresentation(alpha, P.relators + (Word((-new,)) * value,))
