"""Symmetric bilinear forms over Z and Z/2."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .homcalc import det

Matrix = tuple[tuple[int, ...], ...]


class DefiniteForm(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class RankTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class BilinearForm:
    matrix: Matrix
    ring: str = "Z"

    def __post_init__(self):
        if self.ring not in ("Z", "Z/2"):
            raise ValueError(f"unsupported ring {self.ring!r}")
        rows = tuple(tuple(int(x) % 2 if self.ring == "Z/2" else int(x) for x in row) for row in self.matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("form matrix must be square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
            raise ValueError("form matrix must be symmetric")
        object.__setattr__(self, "matrix", rows)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def det(self) -> int:
        d = det([list(r) for r in self.matrix])
        return d % 2 if self.ring == "Z/2" else d

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    @property
    def is_even(self) -> bool:
        # x.x = sum x_i^2 a_ii + 2(...) so evenness of the diagonal is basis-independent
        return all(self.matrix[i][i] % 2 == 0 for i in range(self.rank))

    def mod2(self) -> "BilinearForm":
        return BilinearForm(self.matrix, "Z/2")

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return direct_sum(self, other)

    def congruent_by(self, P: Sequence[Sequence[int]]) -> "BilinearForm":
        """``P^T A P``."""
        n = self.rank
        A = self.matrix
        AP = [[sum(A[i][k] * P[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return BilinearForm(tuple(tuple(sum(P[k][i] * AP[k][j] for k in range(n)) for j in range(n))
                                  for i in range(n)), self.ring)


def form(rows: Iterable[Iterable[int]], ring: str = "Z") -> BilinearForm:
    return BilinearForm(tuple(tuple(r) for r in rows), ring)


def diag(*entries: int, ring: str = "Z") -> BilinearForm:
    n = len(entries)
    return BilinearForm(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)), ring)


def hyperbolic(ring: str = "Z") -> BilinearForm:
    return form([[0, 1], [1, 0]], ring)


def e8() -> BilinearForm:
    """Cartan matrix of E8 (positive definite, even, unimodular)."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    M = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        M[i][j] = M[j][i] = -1
    return form(M)


def direct_sum(*forms: BilinearForm) -> BilinearForm:
    rings = {f.ring for f in forms}
    if len(rings) > 1:
        raise ValueError("cannot sum forms over different rings")
    n = sum(f.rank for f in forms)
    M = [[0] * n for _ in range(n)]
    off = 0
    for f in forms:
        for i in range(f.rank):
            for j in range(f.rank):
                M[off + i][off + j] = f.matrix[i][j]
        off += f.rank
    return form(M, rings.pop() if rings else "Z")


# -- signature ------------------------------------------------------------------

def inertia(f: BilinearForm) -> tuple[int, int, int]:
    """``(n_+, n_-, n_0)`` of the rationalized form, by exact symmetric elimination."""
    if f.ring != "Z":
        raise ValueError("inertia is defined over Z")
    A = [[Fraction(x) for x in row] for row in f.matrix]
    pos = neg = 0
    while A:
        n = len(A)
        k = next((i for i in range(n) if A[i][i] != 0), None)
        if k is not None:
            p = A[k][k]
            pos += p > 0
            neg += p < 0
            rest = [i for i in range(n) if i != k]
            A = [[A[i][j] - A[i][k] * A[k][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j] != 0), None)
        if pair is None:
            return pos, neg, n
        # zero diagonal: the 2x2 block [[0, a], [a, 0]] has one positive and one negative direction
        i, j = pair
        a = A[i][j]
        pos += 1
        neg += 1
        rest = [r for r in range(n) if r not in pair]
        # inverse of [[0, a], [a, 0]] is [[0, 1/a], [1/a, 0]]
        A = [[A[r][s] - (A[r][i] * A[j][s] + A[r][j] * A[i][s]) / a for s in rest] for r in rest]
    return pos, neg, 0


def signature(f: BilinearForm) -> int:
    pos, neg, _ = inertia(f)
    return pos - neg


# -- classification -------------------------------------------------------------

@dataclass(frozen=True)
class FormClass:
    rank: int
    signature: int
    parity: str
    definite: bool
    name: str


def _sum_name(parts: list[tuple[int, str]]) -> str:
    return "⊕".join(sym if k == 1 else f"{k}{sym}" for k, sym in parts if k)


def standard_name(rank: int, sig: int, parity: str) -> str:
    """Name of the indefinite unimodular form with these invariants."""
    if parity == "odd":
        return _sum_name([((rank + sig) // 2, "⟨1⟩"), ((rank - sig) // 2, "⟨−1⟩")])
    k, h = abs(sig) // 8, (rank - abs(sig)) // 2
    e = "E8" if sig > 0 else "−E8"
    return "⊕".join(([e] * k) + (["H"] * h))


def classify_indefinite(f: BilinearForm) -> FormClass:
    """Rank, signature and parity determine an indefinite unimodular form (a cited fact)."""
    if f.ring != "Z":
        raise ValueError("classification is over Z")
    if not f.is_unimodular:
        raise NotUnimodular(f"det = {f.det()}")
    sig = signature(f)
    if abs(sig) == f.rank:
        raise DefiniteForm("definite forms are not classified by their invariants")
    parity = "even" if f.is_even else "odd"
    if parity == "even" and sig % 8:
        raise ValueError("even unimodular form with signature not divisible by 8")
    return FormClass(f.rank, sig, parity, False, standard_name(f.rank, sig, parity))


def a_form(n: int) -> BilinearForm:
    """``[[0,1],[1,n]] + 4<-1>``."""
    return direct_sum(form([[0, 1], [1, n]]), diag(-1, -1, -1, -1))


def parity_reduction(n: int) -> tuple[tuple[int, ...], ...]:
    """Basis change ``P`` with ``P^T [[0,1],[1,n]] P = [[0,1],[1,n mod 2]]``."""
    return ((1, -(n // 2)), (0, 1))


def _parity_identity_holds() -> bool:
    # entries of P^T M P with P = [[1,k],[0,1]] have degree <= 1 in n and <= 2 in k,
    # so agreement on a 2 x 3 grid is a proof of [[0,1],[1,n+2k]] for all n, k
    for n, k in product(range(2), range(3)):
        lhs = form([[0, 1], [1, n]]).congruent_by(((1, k), (0, 1)))
        if lhs.matrix != ((0, 1), (1, n + 2 * k)):
            return False
    return True


def classify_parametric_a() -> dict[int, FormClass]:
    """Classify ``a_form(n)`` for every integer ``n`` by splitting on parity.

    ``a_form(n)`` is congruent to ``a_form(n mod 2)`` through ``parity_reduction``,
    so the two representatives cover all ``n``.
    """
    if not _parity_identity_holds():
        raise AssertionError("parity reduction identity failed")
    return {p: classify_indefinite(a_form(p)) for p in (0, 1)}


def novikov_sum(parts: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Componentwise sum of ``(b_2, signature)`` over pieces glued along rational S^1 x S^2."""
    b2 = sig = 0
    for b, s in parts:
        b2 += b
        sig += s
    return b2, sig


# -- mod 2 congruence -----------------------------------------------------------

def congruent_mod2(f: BilinearForm, g: BilinearForm, max_rank: int = 6) -> bool:
    """Whether some invertible ``P`` over Z/2 has ``P^T F P = G`` (backtracking search)."""
    if f.rank != g.rank:
        return False
    n = f.rank
    if n > max_rank:
        raise RankTooLarge(f"rank {n} exceeds {max_rank}")
    F = [[x % 2 for x in row] for row in f.matrix]
    G = [[x % 2 for x in row] for row in g.matrix]
    if n == 0:
        return True
    vectors = list(range(1, 1 << n))
    bits = {v: [(v >> i) & 1 for i in range(n)] for v in vectors}

    def pair(u: int, v: int) -> int:
        bu, bv = bits[u], bits[v]
        return sum(bu[i] * F[i][j] * bv[j] for i in range(n) for j in range(n)) % 2

    table = {(u, v): pair(u, v) for u in vectors for v in vectors}
    cols: list[int] = []

    def search(span: set[int]) -> bool:
        i = len(cols)
        if i == n:
            return True
        for v in vectors:
            if v in span or table[v, v] != G[i][i]:
                continue
            if any(table[cols[j], v] != G[j][i] for j in range(i)):
                continue
            cols.append(v)
            if search(span | {s ^ v for s in span}):
                return True
            cols.pop()
        return False

    return search({0})
