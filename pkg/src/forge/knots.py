"""Knot invariants from Seifert matrices, and the shipped knot table."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product
from typing import Optional

from .forms import BilinearForm, signature
from .homcalc import det, interpolate_int


class InvalidSeifert(ValueError):
    pass


@dataclass(frozen=True)
class LaurentPoly:
    """``sum coeffs[i] t^(low + i)`` with no zero coefficients at either end."""

    coeffs: tuple[int, ...]
    low: int = 0

    def __post_init__(self):
        c = list(self.coeffs)
        low = self.low
        while c and c[0] == 0:
            c.pop(0)
            low += 1
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "low", low if c else 0)

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    @property
    def span(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else 0

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, t) -> Fraction:
        return sum(Fraction(c) * Fraction(t) ** (self.low + i) for i, c in enumerate(self.coeffs))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs or not other.coeffs:
            return LaurentPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPoly(tuple(out), self.low + other.low)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple(-c for c in self.coeffs), self.low)

    def is_symmetric(self) -> bool:
        return self.coeffs == self.coeffs[::-1] and self.low == -self.high

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c, e = self.coeffs[i], self.low + i
            if c == 0:
                continue
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, b in terms[1:]:
            out += f" {s} {b}"
        return out


@dataclass(frozen=True)
class SeifertMatrix:
    V: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.V)
        n = len(rows)
        if any(len(r) != n for r in rows) or n % 2:
            raise InvalidSeifert("Seifert matrix must be square of even size")
        skew = [[rows[i][j] - rows[j][i] for j in range(n)] for i in range(n)]
        if abs(det(skew)) != 1:
            raise InvalidSeifert("V - V^T is not unimodular")
        object.__setattr__(self, "V", rows)

    @property
    def size(self) -> int:
        return len(self.V)

    @property
    def genus(self) -> int:
        return self.size // 2

    def block_sum(self, other: "SeifertMatrix") -> "SeifertMatrix":
        n, m = self.size, other.size
        rows = [list(r) + [0] * m for r in self.V] + [[0] * n + list(r) for r in other.V]
        return SeifertMatrix(tuple(map(tuple, rows)))

    def mirror(self) -> "SeifertMatrix":
        """Seifert matrix of the mirror image: ``-V^T``."""
        n = self.size
        return SeifertMatrix(tuple(tuple(-self.V[j][i] for j in range(n)) for i in range(n)))


def alexander(S: SeifertMatrix) -> LaurentPoly:
    """``det(V - t V^T)``, shifted to be symmetric with positive leading coefficient."""
    n = S.size
    if n == 0:
        return LaurentPoly((1,))
    V = S.V
    xs = list(range(n + 1))
    ys = [det([[V[i][j] - t * V[j][i] for j in range(n)] for i in range(n)]) for t in xs]
    p = LaurentPoly(tuple(interpolate_int(xs, ys)))
    p = LaurentPoly(p.coeffs, -p.span // 2)
    if p.leading < 0:
        p = -p
    if not p.is_symmetric() or abs(p(1)) != 1:
        raise InvalidSeifert(f"Alexander polynomial {p} is not a valid knot polynomial")
    return p


def arf(S: SeifertMatrix) -> int:
    """Arf invariant of ``q(x) = x^T V x mod 2``: the value taken on a majority of vectors."""
    n = S.size
    if n == 0:
        return 0
    V = S.V
    ones = sum(sum(x[i] * V[i][j] * x[j] for i in range(n) for j in range(n)) % 2
               for x in product((0, 1), repeat=n))
    return int(ones > (1 << n) // 2)


def arf_from_alexander(S: SeifertMatrix) -> int:
    """Levine's criterion: Arf = 0 iff Delta(-1) = +-1 mod 8."""
    d = int(alexander(S)(-1))
    return 0 if d % 8 in (1, 7) else 1


def determinant_and_signature(S: SeifertMatrix) -> tuple[int, int]:
    n = S.size
    sym = BilinearForm(tuple(tuple(S.V[i][j] + S.V[j][i] for j in range(n)) for i in range(n)))
    return abs(int(alexander(S)(-1))), signature(sym)


@dataclass(frozen=True)
class KnotRecord:
    name: str
    seifert: SeifertMatrix
    four_ball_genus: int
    strongly_neg_amphichiral: bool
    genus: Optional[int] = None

    def __post_init__(self):
        if self.genus is None:
            object.__setattr__(self, "genus", self.seifert.genus)
        elif self.genus != self.seifert.genus:
            raise InvalidSeifert(f"{self.name}: genus {self.genus} but Seifert matrix has size {self.seifert.size}")

    def to_dsl(self) -> str:
        m = "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self.seifert.V) + "]"
        sna = "true" if self.strongly_neg_amphichiral else "false"
        return f"knot {self.name} {{ seifert {m}; g4 {self.four_ball_genus}; sna {sna} }}"


def slice_family_eligible(k: KnotRecord) -> bool:
    return k.strongly_neg_amphichiral and arf(k.seifert) == 1 and k.four_ball_genus == 1


def load_table(text: Optional[str] = None) -> dict[str, KnotRecord]:
    """Knot records from DSL text; defaults to the shipped table."""
    from .dsl import parse

    if text is None:
        text = resources.files("forge.data").joinpath("knots.dsl").read_text(encoding="utf-8")
    return {k.name: k for k in parse(text) if isinstance(k, KnotRecord)}


def knot(name: str) -> KnotRecord:
    return load_table()[name]
